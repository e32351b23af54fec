#pragma once

#include <map>
#include <string>
#include <vector>

#include "lambdasim/experiments.hpp"
#include "lambdasim/fitting.hpp"

namespace lambdasim {

enum class ExperimentKind { rabi, stirap, ramsey, cpt, period, fidelity };

// Fully-resolved run description.  Config files are line-based
// `key = value` with `[section]` headers and `#` comments; frequencies are
// ordinary MHz, times us.  Unknown keys are rejected.
struct RunConfig {
  ExperimentKind experiment = ExperimentKind::rabi;
  std::string output = "out.csv";
  int threads = 1;
  double dt_phase_budget = 0.05;

  // [physics]
  double detuning_mhz = 1500.0;
  double two_photon_mhz = 0.0;
  double gamma_mhz = 7.0;
  double gamma_opt_mhz = 7.0;
  double t2_us = 200.0;
  double leak_mhz = 0.0;

  // [pulses]
  double omega_plus_mhz = 46.0;
  double omega_minus_mhz = 46.0;
  double pulse_width_us = 1.5;
  double t_rise_us = 0.0;
  std::string ramp = "linear";  // linear | sin2
  double omega_r_mhz = 2.5;     // Ramsey pi/2 calibration
  double cpt_duration_us = 10.0;

  // [ensemble]
  double diffusion_fwhm_mhz = 0.0;
  int diffusion_points = 21;
  double diffusion_span_sigmas = 3.0;
  double dephasing_fwhm_mhz = 0.0;
  int dephasing_points = 41;
  double dephasing_span_sigmas = 4.0;

  // [hyperfine]
  std::string manifold = "none";  // none | random | -1 | 0 | +1
  double dip_spacing_mhz = 4.4;
  double laser_offset_mhz = 0.0;

  // [scan]
  double scan_start = 0.0;
  double scan_stop = 10.0;
  int scan_points = 101;
  std::vector<double> scan_values;  // overrides start/stop/points when set

  // [period]
  std::vector<double> period_detunings_mhz = {1000.0, 1500.0, 2000.0};
  std::vector<double> period_intensities = {1.0};

  // [fidelity]
  double participating_fraction = 1.0;

  DriveConfig to_drive_config() const;
  std::vector<double> scan_grid() const;

  // Resolved key/value view, stable order; the basis of the CSV preamble
  // and the sidecar file.
  std::vector<std::pair<std::string, std::string>> resolved() const;
};

ExperimentKind parse_experiment(const std::string& name);
const char* experiment_name(ExperimentKind kind);

// Throws ParseError (with line number) or ValidationError (naming the key).
RunConfig load_config(const std::string& path);
RunConfig parse_config_text(const std::string& text,
                            const std::string& origin = "<string>");

struct RunOutput {
  std::vector<std::string> files_written;
  double fidelity = -1.0;  // set by the fidelity experiment
};

// Executes the configured experiment, writes `output` (CSV with a
// `#`-prefixed metadata preamble) and `output + ".meta"` (the resolved
// configuration, itself a loadable config file).
RunOutput run(const RunConfig& config);

// Reads a scan CSV written by run(), fits the requested model
// ("damped-cosine" or "gaussian-cosine") to the given column, and writes
// `<report_base>.txt` plus a dense fitted-curve CSV `<report_base>_curve.csv`.
FitResult emit_fit_report(const std::string& csv_path,
                          const std::string& model,
                          const std::string& column = "pop_g2",
                          const std::string& report_base = "fit_report");

// CSV helpers shared by run() and the tests.
void write_scan_csv(const std::string& path, const ScanResult& scan,
                    const std::vector<std::pair<std::string, std::string>>&
                        preamble);
ScanResult read_scan_csv(const std::string& path);

}  // namespace lambdasim
