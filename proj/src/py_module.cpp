#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lambdasim/config.hpp"
#include "lambdasim/dynamics.hpp"
#include "lambdasim/experiments.hpp"

namespace py = pybind11;
using namespace lambdasim;

PYBIND11_MODULE(_lambdasim, m) {
  m.doc() = "Lambda-system Raman spin dynamics simulator";

  py::class_<LambdaParams>(m, "LambdaParams")
      .def(py::init<>())
      .def_readwrite("delta_avg", &LambdaParams::delta_avg)
      .def_readwrite("delta_two_photon", &LambdaParams::delta_two_photon)
      .def_readwrite("gamma_repop", &LambdaParams::gamma_repop)
      .def_readwrite("gamma_opt", &LambdaParams::gamma_opt)
      .def_readwrite("gamma_spin", &LambdaParams::gamma_spin)
      .def_readwrite("leak_rate", &LambdaParams::leak_rate);

  py::class_<FieldSample>(m, "FieldSample")
      .def(py::init<double, double>(), py::arg("omega_plus"),
           py::arg("omega_minus"))
      .def_readwrite("omega_plus", &FieldSample::omega_plus)
      .def_readwrite("omega_minus", &FieldSample::omega_minus);

  py::class_<Envelope>(m, "Envelope")
      .def_readwrite("peak", &Envelope::peak)
      .def_readwrite("start", &Envelope::start)
      .def_readwrite("width", &Envelope::width)
      .def_readwrite("rise", &Envelope::rise)
      .def_readwrite("fall", &Envelope::fall)
      .def("value", &Envelope::value);

  py::class_<PulseSequence>(m, "PulseSequence")
      .def_readonly("span", &PulseSequence::span)
      .def("sample", &PulseSequence::sample);

  py::class_<ScanPoint>(m, "ScanPoint")
      .def_readonly("x", &ScanPoint::x)
      .def_readonly("pop_g1", &ScanPoint::pop_g1)
      .def_readonly("pop_g2", &ScanPoint::pop_g2)
      .def_readonly("pop_e", &ScanPoint::pop_e)
      .def_readonly("trace", &ScanPoint::trace);

  py::class_<ScanResult>(m, "ScanResult")
      .def_readonly("scan_variable", &ScanResult::scan_variable)
      .def_readonly("unit", &ScanResult::unit)
      .def_readonly("points", &ScanResult::points);

  py::class_<GaussianSpec>(m, "GaussianSpec")
      .def(py::init<double, int, double>(), py::arg("fwhm_mhz"),
           py::arg("n_points"), py::arg("span_sigmas") = 3.0)
      .def_readwrite("fwhm_mhz", &GaussianSpec::fwhm_mhz)
      .def_readwrite("n_points", &GaussianSpec::n_points)
      .def_readwrite("span_sigmas", &GaussianSpec::span_sigmas);

  py::class_<HyperfineConfig>(m, "HyperfineConfig")
      .def(py::init<>())
      .def_readwrite("dip_spacing_mhz", &HyperfineConfig::dip_spacing_mhz)
      .def_readwrite("weights", &HyperfineConfig::weights);

  py::class_<DriveConfig>(m, "DriveConfig")
      .def(py::init<>())
      .def_readwrite("params", &DriveConfig::params)
      .def_readwrite("peak_plus", &DriveConfig::peak_plus)
      .def_readwrite("peak_minus", &DriveConfig::peak_minus)
      .def_readwrite("delta_avg_spec", &DriveConfig::delta_avg_spec)
      .def_readwrite("two_photon_spec", &DriveConfig::two_photon_spec)
      .def_readwrite("hyperfine", &DriveConfig::hyperfine)
      .def_readwrite("laser_two_photon_offset_mhz",
                     &DriveConfig::laser_two_photon_offset_mhz)
      .def_readwrite("pulse_width", &DriveConfig::pulse_width)
      .def_readwrite("omega_R_target", &DriveConfig::omega_R_target)
      .def_readwrite("dt_phase_budget", &DriveConfig::dt_phase_budget)
      .def_readwrite("threads", &DriveConfig::threads);

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("parameters", &FitResult::parameters)
      .def_readonly("residual_norm", &FitResult::residual_norm)
      .def_readonly("converged", &FitResult::converged)
      .def_readonly("iterations", &FitResult::iterations);

  m.def("hamiltonian", &hamiltonian);
  m.def("dissipator", &dissipator);
  m.def("rhs", &rhs);
  m.def(
      "propagate",
      [](const Eigen::Matrix3cd& rho0, const PulseSequence& seq,
         const LambdaParams& params, const std::vector<double>& times,
         double dt) { return propagate(rho0, seq, params, times, dt); },
      py::arg("rho0"), py::arg("sequence"), py::arg("params"),
      py::arg("sample_times"), py::arg("dt"));
  m.def("suggest_dt",
        [](const LambdaParams& p, const PulseSequence& s) {
          return suggest_dt(p, s);
        });
  m.def("piecewise_constant_oracle", &piecewise_constant_oracle);
  m.def("effective_rabi_frequency", &effective_rabi_frequency);
  m.def("dark_state", [](double op, double om) {
    const DarkState d = dark_state(op, om);
    return std::make_pair(d.plus_amp, d.minus_amp);
  });
  m.def("effective_two_level_propagate", &effective_two_level_propagate);

  py::enum_<RampShape>(m, "RampShape")
      .value("square", RampShape::square)
      .value("trapezoid", RampShape::trapezoid)
      .value("sin2_ramp", RampShape::sin2_ramp);

  m.def("make_rabi_pair", &make_rabi_pair);
  m.def("make_stirap_pair", &make_stirap_pair, py::arg("peak"),
        py::arg("pulse_width"), py::arg("t_rise"), py::arg("separation"),
        py::arg("ramp") = RampShape::trapezoid);
  m.def("make_ramsey_sequence", &make_ramsey_sequence);

  m.def("gaussian_grid", &gaussian_grid);

  m.def("rabi_scan", &rabi_scan);
  m.def("stirap_scan", &stirap_scan);
  m.def("ramsey_scan", &ramsey_scan);
  m.def("cpt_scan", &cpt_scan);
  m.def("estimate_fidelity", &estimate_fidelity);

  m.def("fit_damped_cosine", &fit_damped_cosine);
  m.def("fit_gaussian_cosine", &fit_gaussian_cosine);
  m.def("extract_period", &extract_period);

  m.def("run_config_text", [](const std::string& text) {
    const RunConfig cfg = parse_config_text(text);
    const RunOutput out = run(cfg);
    return std::make_pair(out.files_written, out.fidelity);
  });
}
