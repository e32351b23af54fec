#include "lambdasim/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "lambdasim/errors.hpp"
#include "lambdasim/units.hpp"

namespace lambdasim {

namespace {

constexpr const char* kVersion = "lambdasim 0.1.0";

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& vs) {
  std::string out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) out += ", ";
    out += fmt(vs[i]);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (trim(value.substr(pos)).empty()) return v;
  } catch (...) {
  }
  throw ValidationError("config: key '" + key + "' is not a number: " + value);
}

int parse_int(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  const int i = static_cast<int>(std::lround(v));
  if (std::abs(v - i) > 1e-9)
    throw ValidationError("config: key '" + key + "' is not an integer");
  return i;
}

std::vector<double> parse_list(const std::string& key,
                               const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(key, item));
  }
  if (out.empty())
    throw ValidationError("config: key '" + key + "' has an empty list");
  return out;
}

struct KeyHandler {
  std::function<void(RunConfig&, const std::string&, const std::string&)>
      apply;
};

const std::map<std::string, KeyHandler>& key_handlers() {
  using C = RunConfig;
  static const std::map<std::string, KeyHandler> handlers = {
      {"run.experiment",
       {[](C& c, const std::string&, const std::string& v) {
         c.experiment = parse_experiment(v);
       }}},
      {"run.output",
       {[](C& c, const std::string&, const std::string& v) { c.output = v; }}},
      {"run.threads",
       {[](C& c, const std::string& k, const std::string& v) {
         c.threads = parse_int(k, v);
       }}},
      {"run.dt_phase_budget",
       {[](C& c, const std::string& k, const std::string& v) {
         c.dt_phase_budget = parse_double(k, v);
       }}},
      {"physics.detuning_mhz",
       {[](C& c, const std::string& k, const std::string& v) {
         c.detuning_mhz = parse_double(k, v);
       }}},
      {"physics.two_photon_mhz",
       {[](C& c, const std::string& k, const std::string& v) {
         c.two_photon_mhz = parse_double(k, v);
       }}},
      {"physics.gamma_mhz",
       {[](C& c, const std::string& k, const std::string& v) {
         c.gamma_mhz = parse_double(k, v);
       }}},
      {"physics.gamma_opt_mhz",
       {[](C& c, const std::string& k, const std::string& v) {
         c.gamma_opt_mhz = parse_double(k, v);
       }}},
      {"physics.t2_us",
       {[](C& c, const std::string& k, const std::string& v) {
         c.t2_us = parse_double(k, v);
       }}},
      {"physics.leak_mhz",
       {[](C& c, const std::string& k, const std::string& v) {
         c.leak_mhz = parse_double(k, v);
       }}},
      {"pulses.omega_plus_mhz",
       {[](C& c, const std::string& k, const std::string& v) {
         c.omega_plus_mhz = parse_double(k, v);
       }}},
      {"pulses.omega_minus_mhz",
       {[](C& c, const std::string& k, const std::string& v) {
         c.omega_minus_mhz = parse_double(k, v);
       }}},
      {"pulses.omega_mhz",
       {[](C& c, const std::string& k, const std::string& v) {
         c.omega_plus_mhz = c.omega_minus_mhz = parse_double(k, v);
       }}},
      {"pulses.pulse_width_us",
       {[](C& c, const std::string& k, const std::string& v) {
         c.pulse_width_us = parse_double(k, v);
       }}},
      {"pulses.t_rise_us",
       {[](C& c, const std::string& k, const std::string& v) {
         c.t_rise_us = parse_double(k, v);
       }}},
      {"pulses.ramp",
       {[](C& c, const std::string& k, const std::string& v) {
         if (v != "linear" && v != "sin2")
           throw ValidationError("config: key '" + k +
                                 "' must be linear or sin2");
         c.ramp = v;
       }}},
      {"pulses.omega_r_mhz",
       {[](C& c, const std::string& k, const std::string& v) {
         c.omega_r_mhz = parse_double(k, v);
       }}},
      {"pulses.cpt_duration_us",
       {[](C& c, const std::string& k, const std::string& v) {
         c.cpt_duration_us = parse_double(k, v);
       }}},
      {"ensemble.diffusion_fwhm_mhz",
       {[](C& c, const std::string& k, const std::string& v) {
         c.diffusion_fwhm_mhz = parse_double(k, v);
       }}},
      {"ensemble.diffusion_points",
       {[](C& c, const std::string& k, const std::string& v) {
         c.diffusion_points = parse_int(k, v);
       }}},
      {"ensemble.diffusion_span_sigmas",
       {[](C& c, const std::string& k, const std::string& v) {
         c.diffusion_span_sigmas = parse_double(k, v);
       }}},
      {"ensemble.dephasing_fwhm_mhz",
       {[](C& c, const std::string& k, const std::string& v) {
         c.dephasing_fwhm_mhz = parse_double(k, v);
       }}},
      {"ensemble.dephasing_points",
       {[](C& c, const std::string& k, const std::string& v) {
         c.dephasing_points = parse_int(k, v);
       }}},
      {"ensemble.dephasing_span_sigmas",
       {[](C& c, const std::string& k, const std::string& v) {
         c.dephasing_span_sigmas = parse_double(k, v);
       }}},
      {"hyperfine.manifold",
       {[](C& c, const std::string& k, const std::string& v) {
         if (v != "none" && v != "random" && v != "-1" && v != "0" &&
             v != "+1" && v != "1")
           throw ValidationError("config: key '" + k +
                                 "' must be none, random, -1, 0, or +1");
         c.manifold = (v == "1") ? "+1" : v;
       }}},
      {"hyperfine.dip_spacing_mhz",
       {[](C& c, const std::string& k, const std::string& v) {
         c.dip_spacing_mhz = parse_double(k, v);
       }}},
      {"hyperfine.laser_offset_mhz",
       {[](C& c, const std::string& k, const std::string& v) {
         c.laser_offset_mhz = parse_double(k, v);
       }}},
      {"scan.start",
       {[](C& c, const std::string& k, const std::string& v) {
         c.scan_start = parse_double(k, v);
       }}},
      {"scan.stop",
       {[](C& c, const std::string& k, const std::string& v) {
         c.scan_stop = parse_double(k, v);
       }}},
      {"scan.points",
       {[](C& c, const std::string& k, const std::string& v) {
         c.scan_points = parse_int(k, v);
       }}},
      {"scan.values",
       {[](C& c, const std::string& k, const std::string& v) {
         c.scan_values = parse_list(k, v);
       }}},
      {"period.detunings_mhz",
       {[](C& c, const std::string& k, const std::string& v) {
         c.period_detunings_mhz = parse_list(k, v);
       }}},
      {"period.intensities",
       {[](C& c, const std::string& k, const std::string& v) {
         c.period_intensities = parse_list(k, v);
       }}},
      {"fidelity.participating_fraction",
       {[](C& c, const std::string& k, const std::string& v) {
         c.participating_fraction = parse_double(k, v);
       }}},
  };
  return handlers;
}

}  // namespace

ExperimentKind parse_experiment(const std::string& name) {
  if (name == "rabi") return ExperimentKind::rabi;
  if (name == "stirap") return ExperimentKind::stirap;
  if (name == "ramsey") return ExperimentKind::ramsey;
  if (name == "cpt") return ExperimentKind::cpt;
  if (name == "period" || name == "period-vs-detuning")
    return ExperimentKind::period;
  if (name == "fidelity") return ExperimentKind::fidelity;
  throw ValidationError("config: unknown experiment '" + name + "'");
}

const char* experiment_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::rabi: return "rabi";
    case ExperimentKind::stirap: return "stirap";
    case ExperimentKind::ramsey: return "ramsey";
    case ExperimentKind::cpt: return "cpt";
    case ExperimentKind::period: return "period";
    case ExperimentKind::fidelity: return "fidelity";
  }
  return "?";
}

RunConfig parse_config_text(const std::string& text,
                            const std::string& origin) {
  RunConfig cfg;
  std::stringstream ss(text);
  std::string line, section;
  int lineno = 0;
  bool saw_content = false;
  while (std::getline(ss, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError(origin + ":" + std::to_string(lineno) +
                         ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      saw_content = true;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(origin + ":" + std::to_string(lineno) +
                       ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string qualified = section.empty() ? key : section + "." + key;
    const auto& handlers = key_handlers();
    const auto it = handlers.find(qualified);
    if (it == handlers.end())
      throw ValidationError("config: unknown key '" + qualified + "' (" +
                            origin + ":" + std::to_string(lineno) + ")");
    it->second.apply(cfg, qualified, value);
    saw_content = true;
  }
  if (!saw_content) throw ParseError(origin + ": empty config");

  // Cross-field validation.
  if (cfg.threads < 1)
    throw ValidationError("config: key 'run.threads' must be >= 1");
  if (cfg.dt_phase_budget <= 0 || cfg.dt_phase_budget > 0.05)
    throw ValidationError(
        "config: key 'run.dt_phase_budget' must be in (0, 0.05]");
  if (cfg.t2_us <= 0)
    throw ValidationError("config: key 'physics.t2_us' must be > 0");
  if (cfg.scan_values.empty() && cfg.scan_points < 1)
    throw ValidationError("config: key 'scan.points' must be >= 1");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("config: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

DriveConfig RunConfig::to_drive_config() const {
  DriveConfig d;
  d.params.delta_avg = mhz_to_angular(detuning_mhz);
  d.params.delta_two_photon = mhz_to_angular(two_photon_mhz);
  d.params.gamma_repop = mhz_to_angular(gamma_mhz);
  d.params.gamma_opt = mhz_to_angular(gamma_opt_mhz);
  d.params.gamma_spin = 1.0 / t2_us;  // gamma_s = 1/T2 in rad/us
  d.params.leak_rate = mhz_to_angular(leak_mhz);
  d.peak_plus = mhz_to_angular(omega_plus_mhz);
  d.peak_minus = mhz_to_angular(omega_minus_mhz);
  d.delta_avg_spec = {diffusion_fwhm_mhz, diffusion_points,
                      diffusion_span_sigmas};
  d.two_photon_spec = {dephasing_fwhm_mhz, dephasing_points,
                       dephasing_span_sigmas};
  d.hyperfine.dip_spacing_mhz = dip_spacing_mhz;
  if (manifold == "random") {
    d.hyperfine.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  } else if (manifold == "-1") {
    d.hyperfine.weights = {1.0, 0.0, 0.0};
  } else if (manifold == "+1") {
    d.hyperfine.weights = {0.0, 0.0, 1.0};
  } else {  // "none" and "0": single manifold at the laser offset
    d.hyperfine.weights = {0.0, 1.0, 0.0};
  }
  d.laser_two_photon_offset_mhz = laser_offset_mhz;
  d.pulse_width = pulse_width_us;
  d.ramp = (ramp == "sin2") ? RampShape::sin2_ramp : RampShape::trapezoid;
  d.omega_R_target = mhz_to_angular(omega_r_mhz);
  d.dt_phase_budget = dt_phase_budget;
  d.threads = threads;
  return d;
}

std::vector<double> RunConfig::scan_grid() const {
  if (!scan_values.empty()) {
    std::vector<double> v = scan_values;
    std::sort(v.begin(), v.end());
    return v;
  }
  std::vector<double> v;
  v.reserve(scan_points);
  if (scan_points == 1) return {scan_start};
  for (int i = 0; i < scan_points; ++i)
    v.push_back(scan_start +
                (scan_stop - scan_start) * i / (scan_points - 1));
  return v;
}

std::vector<std::pair<std::string, std::string>> RunConfig::resolved() const {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("run.experiment", experiment_name(experiment));
  kv.emplace_back("run.output", output);
  // threads is an execution detail; it never changes the results, so it is
  // kept out of the preamble and the sidecar.
  kv.emplace_back("run.dt_phase_budget", fmt(dt_phase_budget));
  kv.emplace_back("physics.detuning_mhz", fmt(detuning_mhz));
  kv.emplace_back("physics.two_photon_mhz", fmt(two_photon_mhz));
  kv.emplace_back("physics.gamma_mhz", fmt(gamma_mhz));
  kv.emplace_back("physics.gamma_opt_mhz", fmt(gamma_opt_mhz));
  kv.emplace_back("physics.t2_us", fmt(t2_us));
  kv.emplace_back("physics.leak_mhz", fmt(leak_mhz));
  kv.emplace_back("pulses.omega_plus_mhz", fmt(omega_plus_mhz));
  kv.emplace_back("pulses.omega_minus_mhz", fmt(omega_minus_mhz));
  kv.emplace_back("pulses.pulse_width_us", fmt(pulse_width_us));
  kv.emplace_back("pulses.t_rise_us", fmt(t_rise_us));
  kv.emplace_back("pulses.ramp", ramp);
  kv.emplace_back("pulses.omega_r_mhz", fmt(omega_r_mhz));
  kv.emplace_back("pulses.cpt_duration_us", fmt(cpt_duration_us));
  kv.emplace_back("ensemble.diffusion_fwhm_mhz", fmt(diffusion_fwhm_mhz));
  kv.emplace_back("ensemble.diffusion_points",
                  std::to_string(diffusion_points));
  kv.emplace_back("ensemble.diffusion_span_sigmas",
                  fmt(diffusion_span_sigmas));
  kv.emplace_back("ensemble.dephasing_fwhm_mhz", fmt(dephasing_fwhm_mhz));
  kv.emplace_back("ensemble.dephasing_points",
                  std::to_string(dephasing_points));
  kv.emplace_back("ensemble.dephasing_span_sigmas",
                  fmt(dephasing_span_sigmas));
  kv.emplace_back("hyperfine.manifold", manifold);
  kv.emplace_back("hyperfine.dip_spacing_mhz", fmt(dip_spacing_mhz));
  kv.emplace_back("hyperfine.laser_offset_mhz", fmt(laser_offset_mhz));
  if (scan_values.empty()) {
    kv.emplace_back("scan.start", fmt(scan_start));
    kv.emplace_back("scan.stop", fmt(scan_stop));
    kv.emplace_back("scan.points", std::to_string(scan_points));
  } else {
    kv.emplace_back("scan.values", fmt_list(scan_values));
  }
  if (experiment == ExperimentKind::period) {
    kv.emplace_back("period.detunings_mhz", fmt_list(period_detunings_mhz));
    kv.emplace_back("period.intensities", fmt_list(period_intensities));
  }
  if (experiment == ExperimentKind::fidelity)
    kv.emplace_back("fidelity.participating_fraction",
                    fmt(participating_fraction));
  return kv;
}

namespace {

std::string row(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_sidecar(const std::string& path, const RunConfig& cfg) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << "# resolved configuration (" << kVersion << ")\n";
  std::string section;
  for (const auto& [key, value] : cfg.resolved()) {
    const auto dot = key.find('.');
    const std::string sec = key.substr(0, dot);
    if (sec != section) {
      out << "[" << sec << "]\n";
      section = sec;
    }
    out << key.substr(dot + 1) << " = " << value << "\n";
  }
}

}  // namespace

void write_scan_csv(
    const std::string& path, const ScanResult& scan,
    const std::vector<std::pair<std::string, std::string>>& preamble) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << "# " << kVersion << "\n";
  for (const auto& [key, value] : preamble)
    out << "# " << key << " = " << value << "\n";
  out << scan.scan_variable << "_" << scan.unit
      << ",pop_g1,pop_g2,pop_e,trace\n";
  for (const auto& p : scan.points)
    out << row(p.x) << "," << row(p.pop_g1) << "," << row(p.pop_g2) << ","
        << row(p.pop_e) << "," << row(p.trace) << "\n";
}

ScanResult read_scan_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  ScanResult scan;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      std::vector<std::string> cols;
      std::stringstream ss(line);
      std::string c;
      while (std::getline(ss, c, ',')) cols.push_back(trim(c));
      if (cols.size() != 5 || cols[1] != "pop_g1" || cols[2] != "pop_g2" ||
          cols[3] != "pop_e" || cols[4] != "trace")
        throw SchemaError("csv: unexpected header in " + path);
      const auto us = cols[0].rfind('_');
      scan.scan_variable =
          us == std::string::npos ? cols[0] : cols[0].substr(0, us);
      scan.unit = us == std::string::npos ? "" : cols[0].substr(us + 1);
      header_seen = true;
      continue;
    }
    std::stringstream ss(line);
    std::string c;
    std::vector<double> vals;
    while (std::getline(ss, c, ',')) vals.push_back(parse_double("csv", c));
    if (vals.size() != 5) throw SchemaError("csv: malformed row in " + path);
    scan.points.push_back({vals[0], vals[1], vals[2], vals[3], vals[4]});
  }
  if (!header_seen) throw SchemaError("csv: no header in " + path);
  return scan;
}

RunOutput run(const RunConfig& config) {
  const DriveConfig drive = config.to_drive_config();
  const std::vector<double> grid = config.scan_grid();
  RunOutput out;

  auto preamble = config.resolved();

  if (config.experiment == ExperimentKind::period) {
    const auto table = period_vs_detuning(config.period_detunings_mhz,
                                          config.period_intensities, drive);
    std::ofstream f(config.output, std::ios::binary);
    if (!f) throw Error("cannot write " + config.output);
    f << "# " << kVersion << "\n";
    for (const auto& [key, value] : preamble)
      f << "# " << key << " = " << value << "\n";
    f << "detuning_mhz,intensity,period_us,rabi_frequency_mhz\n";
    for (const auto& e : table)
      f << row(e.delta_mhz) << "," << row(e.intensity_scale) << ","
        << row(e.period_us) << "," << row(e.rabi_frequency_mhz) << "\n";
  } else {
    ScanResult scan;
    switch (config.experiment) {
      case ExperimentKind::rabi:
      case ExperimentKind::fidelity:
        scan = rabi_scan(grid, drive);
        break;
      case ExperimentKind::stirap:
        scan = stirap_scan(grid, config.t_rise_us, drive);
        break;
      case ExperimentKind::ramsey:
        scan = ramsey_scan(grid, drive);
        break;
      case ExperimentKind::cpt:
        scan = cpt_scan(grid, config.cpt_duration_us, drive);
        break;
      default:
        break;
    }
    if (config.experiment == ExperimentKind::fidelity) {
      out.fidelity = estimate_fidelity(scan, config.participating_fraction);
      preamble.emplace_back("result.fidelity", fmt(out.fidelity));
    }
    write_scan_csv(config.output, scan, preamble);
  }

  write_sidecar(config.output + ".meta", config);
  out.files_written = {config.output, config.output + ".meta"};
  return out;
}

FitResult emit_fit_report(const std::string& csv_path, const std::string& model,
                          const std::string& column,
                          const std::string& report_base) {
  const ScanResult scan = read_scan_csv(csv_path);
  FitData data;
  for (const auto& p : scan.points) {
    double y;
    if (column == "pop_g1")
      y = p.pop_g1;
    else if (column == "pop_g2")
      y = p.pop_g2;
    else if (column == "pop_e")
      y = p.pop_e;
    else
      throw SchemaError("fit: unknown column '" + column + "'");
    data.emplace_back(p.x, y);
  }

  FitResult fit;
  std::function<double(double)> eval;
  if (model == "damped-cosine") {
    fit = fit_damped_cosine(data);
    const auto& q = fit.parameters;
    eval = [q](double t) {
      return q.at("amplitude") * std::exp(-t / q.at("decay_time")) *
                 std::cos(two_pi * q.at("frequency") * t + q.at("phase")) +
             q.at("offset") + q.at("slope") * t;
    };
  } else if (model == "gaussian-cosine") {
    fit = fit_gaussian_cosine(data);
    const auto& q = fit.parameters;
    eval = [q](double t) {
      const double g = t / q.at("t2_star");
      return q.at("amplitude") * std::exp(-g * g) *
                 std::cos(two_pi * q.at("frequency") * t + q.at("phase")) +
             q.at("offset");
    };
  } else {
    throw ValidationError("fit: unknown model '" + model + "'");
  }

  static const std::map<std::string, std::string> units = {
      {"amplitude", ""},        {"frequency", "MHz"}, {"phase", "rad"},
      {"decay_time", "us"},     {"offset", ""},       {"slope", "1/us"},
      {"t2_star", "us"},
  };
  {
    std::ofstream rep(report_base + ".txt", std::ios::binary);
    if (!rep) throw Error("cannot write " + report_base + ".txt");
    rep << "model: " << model << "\n";
    rep << "input: " << csv_path << " column " << column << "\n";
    rep << "converged: " << (fit.converged ? "yes" : "no")
        << "  iterations: " << fit.iterations
        << "  residual_norm: " << row(fit.residual_norm) << "\n";
    for (const auto& [name, value] : fit.parameters) {
      rep << name << " = " << row(value);
      const auto u = units.find(name);
      if (u != units.end() && !u->second.empty()) rep << " " << u->second;
      rep << "\n";
    }
  }
  {
    std::ofstream curve(report_base + "_curve.csv", std::ios::binary);
    if (!curve) throw Error("cannot write " + report_base + "_curve.csv");
    curve << scan.scan_variable << "_" << scan.unit << ",fit\n";
    const double t0 = data.front().first;
    const double t1 = data.back().first;
    const int n = static_cast<int>(data.size()) * 10;
    for (int i = 0; i <= n; ++i) {
      const double t = t0 + (t1 - t0) * i / n;
      curve << row(t) << "," << row(eval(t)) << "\n";
    }
  }
  return fit;
}

}  // namespace lambdasim
