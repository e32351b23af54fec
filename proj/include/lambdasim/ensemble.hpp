#pragma once

#include <array>
#include <functional>
#include <utility>
#include <vector>

#include "lambdasim/params.hpp"
#include "lambdasim/scan.hpp"

namespace lambdasim {

// Discretized Gaussian distribution of a frequency offset.  fwhm is an
// ordinary frequency in MHz (the natural unit of the configuration layer);
// fwhm = 0 collapses to a single point at the center.
struct GaussianSpec {
  double fwhm_mhz = 0.0;
  int n_points = 1;  // odd
  double span_sigmas = 3.0;
};

// 14N hyperfine manifold bookkeeping.  dip_spacing is the two-photon
// detuning offset per unit m_n; weights are the occupation probabilities of
// m_n = {-1, 0, +1}.  hyperfine_A and zeeman_wB are reference constants
// only; neither enters the rotating-frame dynamics.
struct HyperfineConfig {
  double dip_spacing_mhz = 4.4;
  std::array<double, 3> weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  double hyperfine_A_mhz = 2.2;
  double zeeman_wB_mhz = 150.0;

  void validate() const;  // throws InvalidSpec
};

// Symmetric uniform grid over +-span_sigmas*sigma with Gaussian weights
// renormalized to sum to 1 exactly.  Offsets are in MHz.
// Throws InvalidSpec for even n_points.
std::vector<std::pair<double, double>> gaussian_grid(const GaussianSpec& spec);

// A closure producing an experiment curve for one fully-specified
// parameter set.  All curves returned for one averaging call must share
// the same x grid.
using ScanClosure = std::function<Curve(const LambdaParams&)>;

// Weighted sum of the experiment over delta_avg = base + offset for each
// grid point.  Evaluations may run on `threads` workers; the reduction is
// always performed in fixed grid order, so results are independent of the
// thread count.
Curve average_over_delta_avg(const LambdaParams& base, const GaussianSpec& spec,
                             const ScanClosure& experiment, int threads = 1);

// Same contract with delta_two_photon = base + offset per grid point.
Curve average_over_two_photon(const LambdaParams& base,
                              const GaussianSpec& spec,
                              const ScanClosure& experiment, int threads = 1);

// Weighted sum over the three nuclear-spin manifolds with per-manifold
// two-photon detuning delta_n = laser_offset - m_n * dip_spacing (MHz,
// added on top of base.delta_two_photon).  Zero-weight manifolds are
// skipped, so a one-hot weight vector reproduces a plain single-manifold
// run exactly.
Curve hyperfine_sum(const LambdaParams& base, const HyperfineConfig& config,
                    double laser_two_photon_offset_mhz,
                    const ScanClosure& experiment, int threads = 1);

}  // namespace lambdasim
