#include <doctest.h>

#include <cmath>

#include "lambdasim/errors.hpp"
#include "lambdasim/experiments.hpp"
#include "lambdasim/units.hpp"

using namespace lambdasim;

namespace {

DriveConfig raman_config(double detuning_mhz, double omega_mhz,
                         bool decay = true) {
  DriveConfig cfg;
  cfg.params.delta_avg = mhz_to_angular(detuning_mhz);
  if (decay) {
    cfg.params.gamma_repop = mhz_to_angular(7.0);
    cfg.params.gamma_opt = mhz_to_angular(7.0);
    cfg.params.gamma_spin = 1.0 / 200.0;
  }
  cfg.peak_plus = mhz_to_angular(omega_mhz);
  cfg.peak_minus = mhz_to_angular(omega_mhz);
  cfg.hyperfine.weights = {0.0, 1.0, 0.0};  // single central manifold
  return cfg;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

}  // namespace

TEST_CASE("rabi scan starts from g1 at zero duration") {
  const auto cfg = raman_config(800.0, 40.0);
  const auto scan = rabi_scan({0.0, 0.1}, cfg);
  REQUIRE(scan.points.size() == 2);
  CHECK(scan.points[0].pop_g1 == doctest::Approx(1.0));
  CHECK(scan.points[0].pop_g2 == doctest::Approx(0.0));
  CHECK(scan.scan_variable == "duration");
}

TEST_CASE("rabi scan satisfies the curve invariants") {
  const auto cfg = raman_config(800.0, 46.0);
  const auto scan = rabi_scan(linspace(0.0, 2.0, 21), cfg);
  CHECK_NOTHROW(check_scan_invariants(scan));
  for (const auto& pt : scan.points) {
    CHECK(pt.trace == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(pt.pop_g1 >= -1e-9);
    CHECK(pt.pop_g2 <= 1.0 + 1e-9);
  }
}

TEST_CASE("rabi oscillation frequency matches adiabatic elimination") {
  const auto cfg = raman_config(1200.0, 40.0, false);
  const double omega_r = effective_rabi_frequency(
      cfg.peak_plus, cfg.peak_minus, cfg.params.delta_avg);
  const double period = two_pi / omega_r;
  const auto scan = rabi_scan(linspace(0.0, 3.0 * period, 61), cfg);
  FitData data;
  for (const auto& pt : scan.points) data.push_back({pt.x, pt.pop_g2});
  const auto fit = fit_damped_cosine(data);
  CHECK(fit.parameters.at("frequency") * two_pi ==
        doctest::Approx(omega_r).epsilon(0.03));
}

TEST_CASE("stirap with disjoint pulses does not transfer") {
  auto cfg = raman_config(900.0, 48.0, false);
  cfg.pulse_width = 1.0;
  // t_rise = 0 and T >= 2W: the two pulses never overlap.
  const auto scan = stirap_scan({2.5}, 0.0, cfg);
  CHECK(scan.points[0].pop_g2 < 0.05);
}

TEST_CASE("stirap transfers through the counterintuitive overlap window") {
  auto cfg = raman_config(900.0, 48.0, false);
  cfg.pulse_width = 1.5;
  const auto scan = stirap_scan({1.4}, 1.2, cfg);
  CHECK(scan.points[0].pop_g2 > 0.9);
}

TEST_CASE("square stirap scan is symmetric about full overlap without decay") {
  auto cfg = raman_config(900.0, 48.0, false);
  cfg.pulse_width = 1.5;
  const auto scan = stirap_scan({1.2, 1.5, 1.8}, 0.0, cfg);
  CHECK(scan.points[0].pop_g2 ==
        doctest::Approx(scan.points[2].pop_g2).epsilon(0.02));
}

TEST_CASE("ramsey with zero gap acts as a pi pulse on resonance") {
  auto cfg = raman_config(1000.0, 0.0, false);
  cfg.omega_R_target = mhz_to_angular(2.5);
  const auto scan = ramsey_scan({0.0}, cfg);
  CHECK(scan.points[0].pop_g2 == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("ramsey fringe frequency equals the laser two-photon offset") {
  auto cfg = raman_config(1000.0, 0.0, false);
  cfg.omega_R_target = mhz_to_angular(2.5);
  cfg.hyperfine.weights = {0.0, 1.0, 0.0};
  cfg.laser_two_photon_offset_mhz = 1.4;
  const auto scan = ramsey_scan(linspace(0.0, 2.0, 81), cfg);
  FitData data;
  for (const auto& pt : scan.points) data.push_back({pt.x, pt.pop_g2});
  const auto fit = fit_damped_cosine(data);
  CHECK(fit.parameters.at("frequency") == doctest::Approx(1.4).epsilon(0.01));
}

TEST_CASE("three-manifold ramsey equals the weighted per-manifold sum") {
  auto base = raman_config(1000.0, 0.0, false);
  base.omega_R_target = mhz_to_angular(2.5);
  base.laser_two_photon_offset_mhz = 1.4;
  const auto taus = linspace(0.0, 1.0, 11);

  auto mixed = base;
  mixed.hyperfine.weights = {0.2, 0.5, 0.3};
  const auto combined = ramsey_scan(taus, mixed);

  std::array<std::array<double, 3>, 3> onehot = {
      {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
  const std::array<double, 3> w = {0.2, 0.5, 0.3};
  std::vector<double> manual(taus.size(), 0.0);
  for (int m = 0; m < 3; ++m) {
    auto single = base;
    single.hyperfine.weights = onehot[m];
    const auto scan = ramsey_scan(taus, single);
    for (std::size_t i = 0; i < taus.size(); ++i)
      manual[i] += w[m] * scan.points[i].pop_g2;
  }
  for (std::size_t i = 0; i < taus.size(); ++i)
    CHECK(combined.points[i].pop_g2 ==
          doctest::Approx(manual[i]).epsilon(1e-9).scale(1.0));
}

TEST_CASE("cpt scan with zero duration stays in g1") {
  auto cfg = raman_config(100.0, 12.0);
  const auto scan = cpt_scan({-4.4, 0.0, 4.4}, 0.0, cfg);
  for (const auto& pt : scan.points) CHECK(pt.pop_g1 == doctest::Approx(1.0));
}

TEST_CASE("cpt dip appears on two-photon resonance") {
  auto cfg = raman_config(100.0, 12.0);
  cfg.hyperfine.weights = {0.0, 1.0, 0.0};
  const auto scan = cpt_scan({0.0, 2.2}, 10.0, cfg);
  // On resonance the dark state pulls half the population into the ground
  // superposition; off resonance the detuned Raman transfer is weak and
  // most population stays in g1.
  CHECK(scan.points[0].pop_g1 < scan.points[1].pop_g1 - 0.05);
}

TEST_CASE("period table reproduces Eq.-style scaling") {
  auto cfg = raman_config(1500.0, 46.0);
  const auto table = period_vs_detuning({1500.0}, {1.0}, cfg);
  REQUIRE(table.size() == 1);
  CHECK(table[0].rabi_frequency_mhz == doctest::Approx(0.705).epsilon(0.02));
  CHECK(table[0].period_us ==
        doctest::Approx(1.0 / table[0].rabi_frequency_mhz).epsilon(1e-9));
  // Doubling the intensity doubles the Rabi frequency (both fields scale
  // by sqrt(2)).
  const auto scaled = period_vs_detuning({1500.0}, {2.0}, cfg);
  CHECK(scaled[0].rabi_frequency_mhz ==
        doctest::Approx(2.0 * table[0].rabi_frequency_mhz).epsilon(0.02));
}

TEST_CASE("estimate_fidelity on an ideal single-manifold transfer") {
  auto cfg = raman_config(1200.0, 40.0, false);
  const double omega_r = effective_rabi_frequency(
      cfg.peak_plus, cfg.peak_minus, cfg.params.delta_avg);
  const double period = two_pi / omega_r;
  const auto scan = rabi_scan(linspace(0.0, 2.0 * period, 81), cfg);
  CHECK(estimate_fidelity(scan, 1.0) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("estimate_fidelity normalizes by the participating fraction") {
  auto cfg = raman_config(1200.0, 40.0, false);
  const double omega_r = effective_rabi_frequency(
      cfg.peak_plus, cfg.peak_minus, cfg.params.delta_avg);
  const double period = two_pi / omega_r;
  auto scan = rabi_scan(linspace(0.0, 2.0 * period, 81), cfg);
  // Rescale the transfer as if only a third of the population participates.
  for (auto& pt : scan.points) pt.pop_g2 /= 3.0;
  CHECK(estimate_fidelity(scan, 1.0 / 3.0) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("estimate_fidelity rejects non-oscillating scans") {
  ScanResult scan;
  scan.scan_variable = "duration";
  scan.unit = "us";
  for (int i = 0; i < 30; ++i) scan.points.push_back({0.1 * i, 1.0, 0.0, 0.0, 1.0});
  CHECK_THROWS_AS(estimate_fidelity(scan, 1.0), InsufficientData);
}

TEST_CASE("check_scan_invariants flags broken points") {
  ScanResult scan;
  scan.scan_variable = "duration";
  scan.unit = "us";
  scan.points.push_back({0.0, 1.0, 0.0, 0.0, 1.0});
  CHECK_NOTHROW(check_scan_invariants(scan));
  scan.points.push_back({1.0, 0.8, 0.5, -0.3, 1.0});
  CHECK_THROWS_AS(check_scan_invariants(scan), ValidationError);
}
