#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace lambdasim {

struct FitResult {
  std::map<std::string, double> parameters;
  double residual_norm = 0.0;
  bool converged = false;
  int iterations = 0;
};

using FitData = std::vector<std::pair<double, double>>;

// y = A * exp(-t/tau_d) * cos(2*pi*f*t + phi) + B + C*t
// Frequencies in 1/x-unit (MHz when t is in us).  Parameters reported:
// amplitude, frequency, phase, decay_time, offset, slope.
// Throws NoOscillation when the discrete spectrum has no peak away from DC,
// NonConvergence after the iteration cap.
FitResult fit_damped_cosine(const FitData& points);

// y = A * exp(-(tau/T2s)^2) * cos(2*pi*delta*tau + phi) + B
// Parameters reported: amplitude, t2_star, frequency, phase, offset.
FitResult fit_gaussian_cosine(const FitData& points);

// 1 / fitted frequency of fit_damped_cosine.
double extract_period(const FitData& points);

}  // namespace lambdasim
