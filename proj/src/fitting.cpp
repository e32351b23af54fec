#include "lambdasim/fitting.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

#include "lambdasim/errors.hpp"

namespace lambdasim {

namespace {

constexpr double pi = std::numbers::pi;

double wrap_phase(double phi) {
  phi = std::fmod(phi, 2.0 * pi);
  if (phi > pi) phi -= 2.0 * pi;
  if (phi <= -pi) phi += 2.0 * pi;
  return phi;
}

struct SpectrumSeed {
  double frequency;
  double phase;
  double amplitude;
};

// Dominant nonzero bin of the discrete spectrum of mean-removed data.
// Throws NoOscillation when nothing stands out against DC.
SpectrumSeed spectral_seed(const FitData& pts) {
  const std::size_t n = pts.size();
  double mean = 0.0;
  for (const auto& [t, y] : pts) mean += y;
  mean /= n;

  double lo = pts.front().second, hi = pts.front().second;
  for (const auto& [t, y] : pts) {
    lo = std::min(lo, y);
    hi = std::max(hi, y);
  }
  const double range = hi - lo;
  if (range < 1e-12) throw NoOscillation("fit: data is constant");

  const double t0 = pts.front().first;
  const double span = pts.back().first - t0;
  if (span <= 0) throw NoOscillation("fit: zero time span");

  SpectrumSeed best{0.0, 0.0, 0.0};
  const int kmax = static_cast<int>(n) / 2;
  for (int k = 1; k <= kmax; ++k) {
    const double f = k / span;
    std::complex<double> s = 0.0;
    for (const auto& [t, y] : pts)
      s += (y - mean) * std::exp(std::complex<double>(0.0, -2.0 * pi * f * (t - t0)));
    const double amp = 2.0 * std::abs(s) / n;
    if (amp > best.amplitude) {
      best = {f, wrap_phase(std::arg(s) + 2.0 * pi * f * t0), amp};
    }
  }
  if (best.amplitude < 1e-3 * range)
    throw NoOscillation("fit: no spectral peak distinguishable from DC");
  return best;
}

// Decay-rate seed from a log-linear fit through the local maxima of the
// rectified oscillating part.
double decay_rate_seed(const FitData& pts, double mean) {
  std::vector<std::pair<double, double>> peaks;
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const double a = std::abs(pts[i - 1].second - mean);
    const double b = std::abs(pts[i].second - mean);
    const double c = std::abs(pts[i + 1].second - mean);
    if (b >= a && b >= c && b > 1e-12) peaks.emplace_back(pts[i].first, b);
  }
  const double span = pts.back().first - pts.front().first;
  if (peaks.size() < 3 || span <= 0) return span > 0 ? 0.5 / span : 0.0;
  double st = 0, sl = 0, stt = 0, stl = 0;
  for (const auto& [t, v] : peaks) {
    const double l = std::log(v);
    st += t;
    sl += l;
    stt += t * t;
    stl += t * l;
  }
  const double np = static_cast<double>(peaks.size());
  const double denom = np * stt - st * st;
  if (denom <= 0) return 0.5 / span;
  const double slope = (np * stl - st * sl) / denom;
  return std::max(-slope, 0.0);
}

using Model = std::function<double(const Eigen::VectorXd&, double)>;

// Damped least squares with a finite-difference Jacobian.  Accepted steps
// decrease the residual monotonically; converged means the relative step
// norm fell below tolerance before the iteration cap.
FitResult levenberg_marquardt(const Model& model, Eigen::VectorXd p,
                              const FitData& pts) {
  const int max_iter = 200;
  const double step_tol = 1e-10;
  const std::size_t n = pts.size();
  const int np = static_cast<int>(p.size());

  auto residual = [&](const Eigen::VectorXd& q) {
    Eigen::VectorXd r(n);
    for (std::size_t i = 0; i < n; ++i)
      r(i) = pts[i].second - model(q, pts[i].first);
    return r;
  };

  Eigen::VectorXd r = residual(p);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  FitResult result;

  int iter = 0;
  for (; iter < max_iter; ++iter) {
    Eigen::MatrixXd jac(n, np);
    for (int j = 0; j < np; ++j) {
      const double h = 1e-7 * std::max(std::abs(p(j)), 1e-7);
      Eigen::VectorXd q = p;
      q(j) += h;
      const Eigen::VectorXd rp = residual(q);
      jac.col(j) = (rp - r) / h;
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtr = jac.transpose() * r;

    bool accepted = false;
    for (int tries = 0; tries < 30; ++tries) {
      Eigen::MatrixXd a = jtj;
      a.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-12);
      const Eigen::VectorXd step = a.ldlt().solve(-jtr);
      const Eigen::VectorXd q = p + step;
      const Eigen::VectorXd rq = residual(q);
      const double cq = rq.squaredNorm();
      if (cq <= cost) {
        const double rel = step.norm() / std::max(p.norm(), 1e-12);
        p = q;
        r = rq;
        cost = cq;
        lambda = std::max(lambda * 0.3, 1e-12);
        accepted = true;
        if (rel < step_tol) {
          result.converged = true;
        }
        break;
      }
      lambda *= 10.0;
    }
    if (result.converged) break;
    if (!accepted) {
      // Stuck at a (possibly flat) minimum.
      result.converged = cost <= 1e-20 * n || lambda >= 1e11;
      break;
    }
  }
  if (iter >= max_iter)
    throw NonConvergence("fit: iteration cap reached");

  result.iterations = iter + 1;
  result.residual_norm = std::sqrt(cost);
  for (int j = 0; j < np; ++j)
    result.parameters["p" + std::to_string(j)] = p(j);
  return result;
}

void require_sampling(const FitData& pts) {
  if (pts.size() < 8) throw InsufficientData("fit: too few points");
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i].first <= pts[i - 1].first)
      throw InsufficientData("fit: x values must be strictly increasing");
}

}  // namespace

FitResult fit_damped_cosine(const FitData& pts) {
  require_sampling(pts);
  const SpectrumSeed seed = spectral_seed(pts);

  double mean = 0.0, st = 0.0, stt = 0.0, sty = 0.0, sy = 0.0;
  for (const auto& [t, y] : pts) {
    st += t;
    stt += t * t;
    sty += t * y;
    sy += y;
  }
  const double n = static_cast<double>(pts.size());
  mean = sy / n;
  const double slope_seed = (n * sty - st * sy) / std::max(n * stt - st * st, 1e-30);

  // p = (A, f, phi, decay_rate, B, C)
  Eigen::VectorXd p(6);
  p << seed.amplitude, seed.frequency, seed.phase, decay_rate_seed(pts, mean),
      mean, slope_seed;

  const Model model = [](const Eigen::VectorXd& q, double t) {
    return q(0) * std::exp(-q(3) * t) * std::cos(2.0 * pi * q(1) * t + q(2)) +
           q(4) + q(5) * t;
  };
  FitResult fit = levenberg_marquardt(model, p, pts);

  double A = fit.parameters.at("p0");
  double freq = fit.parameters.at("p1");
  double phi = fit.parameters.at("p2");
  const double rate = fit.parameters.at("p3");
  const double offset = fit.parameters.at("p4");
  const double slope = fit.parameters.at("p5");
  if (A < 0) {
    A = -A;
    phi += pi;
  }
  if (freq < 0) {
    freq = -freq;
    phi = -phi;
  }
  fit.parameters.clear();
  fit.parameters["amplitude"] = A;
  fit.parameters["frequency"] = freq;
  fit.parameters["phase"] = wrap_phase(phi);
  fit.parameters["decay_time"] = rate > 0 ? 1.0 / rate : INFINITY;
  fit.parameters["offset"] = offset;
  fit.parameters["slope"] = slope;
  return fit;
}

FitResult fit_gaussian_cosine(const FitData& pts) {
  require_sampling(pts);
  const SpectrumSeed seed = spectral_seed(pts);

  double mean = 0.0;
  for (const auto& [t, y] : pts) mean += y;
  mean /= pts.size();
  const double span = pts.back().first - pts.front().first;

  // p = (A, inv_t2, delta, phi, B)
  Eigen::VectorXd p(5);
  p << seed.amplitude, 1.0 / std::max(span, 1e-9), seed.frequency, seed.phase,
      mean;

  const Model model = [](const Eigen::VectorXd& q, double t) {
    const double g = q(1) * t;
    return q(0) * std::exp(-g * g) * std::cos(2.0 * pi * q(2) * t + q(3)) +
           q(4);
  };
  FitResult fit = levenberg_marquardt(model, p, pts);

  double A = fit.parameters.at("p0");
  const double inv_t2 = std::abs(fit.parameters.at("p1"));
  double freq = fit.parameters.at("p2");
  double phi = fit.parameters.at("p3");
  const double offset = fit.parameters.at("p4");
  if (A < 0) {
    A = -A;
    phi += pi;
  }
  if (freq < 0) {
    freq = -freq;
    phi = -phi;
  }
  fit.parameters.clear();
  fit.parameters["amplitude"] = A;
  fit.parameters["t2_star"] = inv_t2 > 0 ? 1.0 / inv_t2 : INFINITY;
  fit.parameters["frequency"] = freq;
  fit.parameters["phase"] = wrap_phase(phi);
  fit.parameters["offset"] = offset;
  return fit;
}

double extract_period(const FitData& pts) {
  const FitResult fit = fit_damped_cosine(pts);
  const double f = fit.parameters.at("frequency");
  if (f <= 0) throw NoOscillation("extract_period: nonpositive frequency");
  return 1.0 / f;
}

}  // namespace lambdasim
