#pragma once

#include <optional>
#include <vector>

#include "lambdasim/dynamics.hpp"
#include "lambdasim/ensemble.hpp"
#include "lambdasim/fitting.hpp"
#include "lambdasim/scan.hpp"

namespace lambdasim {

// Everything needed to run one named experiment, before ensemble wrapping.
// Frequencies are angular (rad/us) except where the _mhz suffix says
// otherwise; the configuration layer owns the MHz -> rad/us conversion.
struct DriveConfig {
  LambdaParams params;       // nominal detunings and rates
  double peak_plus = 0.0;    // rad/us
  double peak_minus = 0.0;   // rad/us
  GaussianSpec delta_avg_spec{0.0, 1, 3.0};   // spectral diffusion
  GaussianSpec two_photon_spec{0.0, 1, 4.0};  // spin dephasing
  HyperfineConfig hyperfine;
  double laser_two_photon_offset_mhz = 0.0;
  double pulse_width = 1.5;  // us, STIRAP pulse width W
  RampShape ramp = RampShape::trapezoid;
  double omega_R_target = 0.0;  // rad/us, Ramsey pi/2 calibration
  double dt_phase_budget = 0.05;
  int threads = 1;
};

// Final-state populations vs Raman pulse duration, starting from g1.
// Square equal pulses make the scan a single propagation sampled at the
// requested durations.
ScanResult rabi_scan(const std::vector<double>& durations,
                     const DriveConfig& cfg);

// Final-state populations vs pulse separation T for the STIRAP/Rabi
// geometry with the given rise time.
ScanResult stirap_scan(const std::vector<double>& T_values, double t_rise,
                       const DriveConfig& cfg);

// Final g2 population vs free-evolution time tau between two pi/2 pulses.
// Pulse lengths are fixed from the nominal parameters; ensemble shifts
// apply only to the propagation.
ScanResult ramsey_scan(const std::vector<double>& tau_values,
                       const DriveConfig& cfg);

// Final g1 population vs laser two-photon offset after a long
// equal-amplitude pulse pair; dips appear at offsets m_n * dip_spacing.
ScanResult cpt_scan(const std::vector<double>& two_photon_offsets_mhz,
                    double pulse_duration, const DriveConfig& cfg);

struct PeriodEntry {
  double delta_mhz;
  double intensity_scale;
  double period_us;
  double rabi_frequency_mhz;
};

// Fits the Rabi period for each (detuning, intensity) pair; the peak Rabi
// amplitudes scale as sqrt(intensity_scale).
std::vector<PeriodEntry> period_vs_detuning(
    const std::vector<double>& delta_values_mhz,
    const std::vector<double>& intensity_scales, const DriveConfig& cfg);

// Peak transferred (g2) population within the first fitted oscillation
// period, normalized by the participating population fraction and clamped
// to [0, 1].  Throws InsufficientData when no oscillation is detectable.
double estimate_fidelity(const ScanResult& scan, double participating_fraction);

}  // namespace lambdasim
