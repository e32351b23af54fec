#include "lambdasim/ensemble.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "lambdasim/errors.hpp"
#include "lambdasim/units.hpp"

namespace lambdasim {

void HyperfineConfig::validate() const {
  if (dip_spacing_mhz <= 0.0)
    throw InvalidSpec("HyperfineConfig: dip_spacing must be positive");
  const double sum = weights[0] + weights[1] + weights[2];
  if (std::abs(sum - 1.0) > 1e-9 || weights[0] < 0 || weights[1] < 0 ||
      weights[2] < 0)
    throw InvalidSpec("HyperfineConfig: weights must be nonnegative and sum to 1");
}

std::vector<std::pair<double, double>> gaussian_grid(const GaussianSpec& spec) {
  if (spec.n_points < 1 || spec.n_points % 2 == 0)
    throw InvalidSpec("gaussian_grid: n_points must be odd and positive");
  if (spec.fwhm_mhz < 0.0)
    throw InvalidSpec("gaussian_grid: fwhm must be nonnegative");
  if (spec.span_sigmas <= 0.0)
    throw InvalidSpec("gaussian_grid: span_sigmas must be positive");
  if (spec.fwhm_mhz == 0.0 || spec.n_points == 1) return {{0.0, 1.0}};

  const double sigma = spec.fwhm_mhz / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  const double half = spec.span_sigmas * sigma;
  const int n = spec.n_points;
  std::vector<std::pair<double, double>> grid(n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = -half + 2.0 * half * i / (n - 1);
    const double w = std::exp(-0.5 * (x / sigma) * (x / sigma));
    grid[i] = {x, w};
    total += w;
  }
  for (auto& [x, w] : grid) w /= total;
  return grid;
}

namespace {

// Evaluates fn(i) for i in [0, n) on up to `threads` workers, storing each
// result in its own slot; the caller reduces in index order so the outcome
// is independent of scheduling.
std::vector<Curve> indexed_map(std::size_t n,
                               const std::function<Curve(std::size_t)>& fn,
                               int threads) {
  std::vector<Curve> results(n);
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) results[i] = fn(i);
    return results;
  }
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= n) return;
      results[i] = fn(i);
    }
  };
  std::vector<std::thread> pool;
  const int nw = std::min<std::size_t>(threads, n);
  pool.reserve(nw);
  for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return results;
}

Curve weighted_sum(const std::vector<Curve>& curves,
                   const std::vector<double>& weights) {
  Curve out = curves.at(0);
  for (auto& p : out) {
    p.pop_g1 *= weights[0];
    p.pop_g2 *= weights[0];
    p.pop_e *= weights[0];
    p.trace *= weights[0];
  }
  for (std::size_t c = 1; c < curves.size(); ++c) {
    const Curve& cur = curves[c];
    if (cur.size() != out.size())
      throw Error("ensemble: experiment curves disagree on grid size");
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i].pop_g1 += weights[c] * cur[i].pop_g1;
      out[i].pop_g2 += weights[c] * cur[i].pop_g2;
      out[i].pop_e += weights[c] * cur[i].pop_e;
      out[i].trace += weights[c] * cur[i].trace;
    }
  }
  return out;
}

Curve average_shifted(const LambdaParams& base, const GaussianSpec& spec,
                      const ScanClosure& experiment, int threads,
                      double LambdaParams::*field) {
  const auto grid = gaussian_grid(spec);
  std::vector<double> weights(grid.size());
  auto curves = indexed_map(
      grid.size(),
      [&](std::size_t i) {
        LambdaParams p = base;
        p.*field += mhz_to_angular(grid[i].first);
        return experiment(p);
      },
      threads);
  for (std::size_t i = 0; i < grid.size(); ++i) weights[i] = grid[i].second;
  return weighted_sum(curves, weights);
}

}  // namespace

Curve average_over_delta_avg(const LambdaParams& base, const GaussianSpec& spec,
                             const ScanClosure& experiment, int threads) {
  return average_shifted(base, spec, experiment, threads,
                         &LambdaParams::delta_avg);
}

Curve average_over_two_photon(const LambdaParams& base,
                              const GaussianSpec& spec,
                              const ScanClosure& experiment, int threads) {
  return average_shifted(base, spec, experiment, threads,
                         &LambdaParams::delta_two_photon);
}

Curve hyperfine_sum(const LambdaParams& base, const HyperfineConfig& config,
                    double laser_two_photon_offset_mhz,
                    const ScanClosure& experiment, int threads) {
  config.validate();
  std::vector<double> weights;
  std::vector<double> delta_n_mhz;
  for (int m = -1; m <= 1; ++m) {
    const double w = config.weights[m + 1];
    if (w == 0.0) continue;
    weights.push_back(w);
    delta_n_mhz.push_back(laser_two_photon_offset_mhz -
                          m * config.dip_spacing_mhz);
  }
  auto curves = indexed_map(
      weights.size(),
      [&](std::size_t i) {
        LambdaParams p = base;
        p.delta_two_photon += mhz_to_angular(delta_n_mhz[i]);
        return experiment(p);
      },
      threads);
  return weighted_sum(curves, weights);
}

}  // namespace lambdasim
