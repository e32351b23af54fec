#include "lambdasim/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "lambdasim/errors.hpp"
#include "lambdasim/units.hpp"

namespace lambdasim {

void check_scan_invariants(const ScanResult& scan) {
  double prev_x = -INFINITY;
  for (const auto& p : scan.points) {
    if (p.x < prev_x)
      throw ValidationError("ScanResult: points not sorted by x");
    prev_x = p.x;
    for (double pop : {p.pop_g1, p.pop_g2, p.pop_e})
      if (pop < -1e-9 || pop > 1.0 + 1e-9)
        throw ValidationError("ScanResult: population out of [0, 1]");
    if (p.pop_g1 + p.pop_g2 + p.pop_e > 1.0 + 1e-9)
      throw ValidationError("ScanResult: populations sum above 1");
  }
}

namespace {

ScanPoint state_point(double x, const DensityMatrix& rho) {
  ScanPoint p;
  p.x = x;
  p.pop_g1 = rho(0, 0).real();
  p.pop_g2 = rho(1, 1).real();
  p.pop_e = rho(2, 2).real();
  p.trace = p.pop_g1 + p.pop_g2 + p.pop_e;
  return p;
}

PulseSequence square_pair(const DriveConfig& cfg, double duration) {
  PulseSequence seq = make_rabi_pair(cfg.peak_plus, duration);
  for (auto& e : seq.minus_envelopes) e.peak = cfg.peak_minus;
  return seq;
}

// Nest the configured ensemble wrappers around one single-parameter-set
// closure: dephasing innermost, spectral diffusion (parallelized) in the
// middle, hyperfine manifolds outermost.  All shifts are additive, so the
// nesting order does not affect the result.
Curve run_ensemble(const DriveConfig& cfg, const ScanClosure& single) {
  ScanClosure dephased = [&](const LambdaParams& p) {
    return average_over_two_photon(p, cfg.two_photon_spec, single);
  };
  ScanClosure diffused = [&](const LambdaParams& p) {
    return average_over_delta_avg(p, cfg.delta_avg_spec, dephased,
                                  cfg.threads);
  };
  return hyperfine_sum(cfg.params, cfg.hyperfine,
                       cfg.laser_two_photon_offset_mhz, diffused);
}

void require_sorted(const std::vector<double>& xs, const char* what) {
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (xs[i] < xs[i - 1])
      throw ValidationError(std::string(what) + ": values must be sorted");
  if (!xs.empty() && xs.front() < 0.0)
    throw ValidationError(std::string(what) + ": values must be nonnegative");
}

}  // namespace

ScanResult rabi_scan(const std::vector<double>& durations,
                     const DriveConfig& cfg) {
  require_sorted(durations, "rabi_scan durations");
  ScanResult result;
  result.scan_variable = "duration";
  result.unit = "us";
  if (durations.empty()) return result;

  const double max_duration = durations.back();
  ScanClosure single = [&](const LambdaParams& p) {
    const PulseSequence seq = square_pair(cfg, max_duration);
    const double dt = suggest_dt(p, seq, {cfg.dt_phase_budget});
    const auto states = propagate(ground_state(0), seq, p, durations, dt);
    Curve curve;
    curve.reserve(states.size());
    for (const auto& [t, rho] : states) curve.push_back(state_point(t, rho));
    return curve;
  };
  result.points = run_ensemble(cfg, single);
  check_scan_invariants(result);
  return result;
}

ScanResult stirap_scan(const std::vector<double>& T_values, double t_rise,
                       const DriveConfig& cfg) {
  require_sorted(T_values, "stirap_scan separations");
  ScanResult result;
  result.scan_variable = "separation";
  result.unit = "us";

  ScanClosure single = [&](const LambdaParams& p) {
    Curve curve;
    curve.reserve(T_values.size());
    for (double T : T_values) {
      PulseSequence seq =
          make_stirap_pair(cfg.peak_plus, cfg.pulse_width, t_rise, T, cfg.ramp);
      for (auto& e : seq.minus_envelopes) e.peak = cfg.peak_minus;
      const double dt = suggest_dt(p, seq, {cfg.dt_phase_budget});
      const auto states = propagate(ground_state(0), seq, p, {seq.span}, dt);
      curve.push_back(state_point(T, states.back().second));
    }
    return curve;
  };
  result.points = run_ensemble(cfg, single);
  check_scan_invariants(result);
  return result;
}

ScanResult ramsey_scan(const std::vector<double>& tau_values,
                       const DriveConfig& cfg) {
  require_sorted(tau_values, "ramsey_scan taus");
  ScanResult result;
  result.scan_variable = "tau";
  result.unit = "us";

  // Pulse lengths and amplitudes come from the nominal parameters, as in
  // the experiment; only the propagation sees the ensemble shifts.
  std::vector<PulseSequence> sequences;
  sequences.reserve(tau_values.size());
  for (double tau : tau_values)
    sequences.push_back(
        make_ramsey_sequence(cfg.omega_R_target, cfg.params, tau));

  ScanClosure single = [&](const LambdaParams& p) {
    Curve curve;
    curve.reserve(tau_values.size());
    for (std::size_t i = 0; i < tau_values.size(); ++i) {
      const PulseSequence& seq = sequences[i];
      const double dt = suggest_dt(p, seq, {cfg.dt_phase_budget});
      const auto states = propagate(ground_state(0), seq, p, {seq.span}, dt);
      curve.push_back(state_point(tau_values[i], states.back().second));
    }
    return curve;
  };
  result.points = run_ensemble(cfg, single);
  check_scan_invariants(result);
  return result;
}

ScanResult cpt_scan(const std::vector<double>& two_photon_offsets_mhz,
                    double pulse_duration, const DriveConfig& cfg) {
  if (pulse_duration < 0.0)
    throw ValidationError("cpt_scan: negative pulse duration");
  ScanResult result;
  result.scan_variable = "two_photon_offset";
  result.unit = "MHz";

  for (double offset : two_photon_offsets_mhz) {
    ScanClosure single = [&](const LambdaParams& p) {
      const PulseSequence seq = square_pair(cfg, pulse_duration);
      const double dt = suggest_dt(p, seq, {cfg.dt_phase_budget});
      const auto states =
          propagate(ground_state(0), seq, p, {pulse_duration}, dt);
      return Curve{state_point(offset, states.back().second)};
    };
    ScanClosure dephased = [&](const LambdaParams& p) {
      return average_over_two_photon(p, cfg.two_photon_spec, single);
    };
    ScanClosure diffused = [&](const LambdaParams& p) {
      return average_over_delta_avg(p, cfg.delta_avg_spec, dephased,
                                    cfg.threads);
    };
    const Curve point =
        hyperfine_sum(cfg.params, cfg.hyperfine, offset, diffused);
    result.points.push_back(point.front());
  }
  std::sort(result.points.begin(), result.points.end(),
            [](const ScanPoint& a, const ScanPoint& b) { return a.x < b.x; });
  check_scan_invariants(result);
  return result;
}

std::vector<PeriodEntry> period_vs_detuning(
    const std::vector<double>& delta_values_mhz,
    const std::vector<double>& intensity_scales, const DriveConfig& cfg) {
  std::vector<PeriodEntry> table;
  for (double delta_mhz : delta_values_mhz) {
    for (double intensity : intensity_scales) {
      DriveConfig sub = cfg;
      sub.params.delta_avg = mhz_to_angular(delta_mhz);
      sub.peak_plus = cfg.peak_plus * std::sqrt(intensity);
      sub.peak_minus = cfg.peak_minus * std::sqrt(intensity);

      const double omega_r = effective_rabi_frequency(
          sub.peak_plus, sub.peak_minus, sub.params.delta_avg);
      const double period = two_pi / std::abs(omega_r);
      const int per_period = 12;
      const double n_periods = 3.5;
      std::vector<double> durations;
      const int n = static_cast<int>(std::ceil(n_periods * per_period)) + 1;
      for (int i = 0; i < n; ++i)
        durations.push_back(i * period / per_period);

      const ScanResult scan = rabi_scan(durations, sub);
      FitData data;
      for (const auto& p : scan.points) data.emplace_back(p.x, p.pop_g2);
      const FitResult fit = fit_damped_cosine(data);
      const double freq = fit.parameters.at("frequency");
      table.push_back({delta_mhz, intensity, 1.0 / freq, freq});
    }
  }
  return table;
}

double estimate_fidelity(const ScanResult& scan,
                         double participating_fraction) {
  if (participating_fraction <= 0.0 || participating_fraction > 1.0)
    throw ValidationError("estimate_fidelity: fraction must be in (0, 1]");
  FitData data;
  for (const auto& p : scan.points) data.emplace_back(p.x, p.pop_g2);
  FitResult fit;
  try {
    fit = fit_damped_cosine(data);
  } catch (const NoOscillation&) {
    throw InsufficientData("estimate_fidelity: no oscillation detectable");
  }
  const double period = 1.0 / fit.parameters.at("frequency");
  if (data.back().first < period)
    throw InsufficientData(
        "estimate_fidelity: scan shorter than one oscillation period");

  double peak = 0.0;
  for (const auto& p : scan.points)
    if (p.x <= period * (1.0 + 1e-9)) peak = std::max(peak, p.pop_g2);
  return std::clamp(peak / participating_fraction, 0.0, 1.0);
}

}  // namespace lambdasim
