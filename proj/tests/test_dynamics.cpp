#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lambdasim/dynamics.hpp"
#include "lambdasim/errors.hpp"
#include "lambdasim/units.hpp"

using namespace lambdasim;

namespace {

LambdaParams paper_rates() {
  LambdaParams p;
  p.gamma_repop = mhz_to_angular(7.0);
  p.gamma_opt = mhz_to_angular(7.0);
  p.gamma_spin = 1.0 / 200.0;
  return p;
}

double max_abs_diff(const Eigen::Matrix3cd& a, const Eigen::Matrix3cd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("hamiltonian matches the rotating-frame matrix") {
  LambdaParams p;
  p.delta_avg = mhz_to_angular(1500.0);
  const FieldSample f{mhz_to_angular(46.0), mhz_to_angular(46.0)};
  const auto h = hamiltonian(p, f);

  CHECK(angular_to_mhz(h(0, 0).real()) == doctest::Approx(1500.0));
  CHECK(angular_to_mhz(h(1, 1).real()) == doctest::Approx(1500.0));
  CHECK(h(2, 2) == std::complex<double>(0.0));
  CHECK(angular_to_mhz(h(0, 2).real()) == doctest::Approx(23.0));
  CHECK(angular_to_mhz(h(1, 2).real()) == doctest::Approx(23.0));
  CHECK(h(0, 1) == std::complex<double>(0.0));
  CHECK(max_abs_diff(h, h.adjoint()) == 0.0);
}

TEST_CASE("hamiltonian with zero inputs is the zero matrix") {
  CHECK(hamiltonian(LambdaParams{}, FieldSample{}).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("hamiltonian splits the two-photon detuning across the diagonal") {
  LambdaParams p;
  p.delta_avg = mhz_to_angular(900.0);
  p.delta_two_photon = mhz_to_angular(2.0);
  const auto h = hamiltonian(p, {mhz_to_angular(48.0), 0.0});
  CHECK(angular_to_mhz(h(0, 0).real()) == doctest::Approx(899.0));
  CHECK(angular_to_mhz(h(1, 1).real()) == doctest::Approx(901.0));
  CHECK(angular_to_mhz(h(1, 2).real()) == doctest::Approx(24.0));
  CHECK(h(0, 2) == std::complex<double>(0.0));
}

TEST_CASE("dissipator on pure excited population") {
  const LambdaParams p = paper_rates();
  const auto d = dissipator(p, ground_state(2));
  CHECK(d(0, 0).real() == doctest::Approx(p.gamma_repop));
  CHECK(d(1, 1).real() == doctest::Approx(p.gamma_repop));
  CHECK(d(2, 2).real() == doctest::Approx(-2.0 * p.gamma_repop));
  CHECK(std::abs(d.trace()) < 1e-14);
}

TEST_CASE("dissipator decays the ground coherence at gamma_spin") {
  const LambdaParams p = paper_rates();
  DensityMatrix rho = DensityMatrix::Zero();
  const std::complex<double> c(0.3, -0.2);
  rho(0, 1) = c;
  rho(1, 0) = std::conj(c);
  const auto d = dissipator(p, rho);
  CHECK(std::abs(d(0, 1) + p.gamma_spin * c) < 1e-14);
  CHECK(std::abs(d(1, 0) + p.gamma_spin * std::conj(c)) < 1e-14);
  CHECK(std::abs(d(2, 2)) < 1e-14);
}

TEST_CASE("dissipator is traceless for any state when the leak is off") {
  const LambdaParams p = paper_rates();
  DensityMatrix rho;
  rho << 0.2, std::complex<double>(0.1, 0.05), 0.0,
      std::complex<double>(0.1, -0.05), 0.5, std::complex<double>(0.0, 0.2),
      0.0, std::complex<double>(0.0, -0.2), 0.3;
  CHECK(std::abs(dissipator(p, rho).trace()) < 1e-14);
}

TEST_CASE("rhs reduces to the dissipator for diagonal states") {
  LambdaParams p = paper_rates();
  p.delta_avg = mhz_to_angular(1234.0);
  const auto r = rhs(p, {0.0, 0.0}, ground_state(2));
  CHECK(r(0, 0).real() == doctest::Approx(p.gamma_repop));
  CHECK(r(2, 2).real() == doctest::Approx(-2.0 * p.gamma_repop));
  CHECK(r.cwiseAbs().maxCoeff() ==
        doctest::Approx(2.0 * p.gamma_repop).epsilon(1e-12));
}

TEST_CASE("dark state is stationary without decay on two-photon resonance") {
  LambdaParams p;
  p.delta_avg = mhz_to_angular(500.0);
  const double omega = mhz_to_angular(30.0);
  const DensityMatrix rho = dark_state_density(omega, omega);
  const auto r = rhs(p, {omega, omega}, rho);
  CHECK(r.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("rhs trace equals the leak loss") {
  LambdaParams p = paper_rates();
  p.delta_avg = mhz_to_angular(200.0);
  DensityMatrix rho;
  rho << 0.3, std::complex<double>(0.05, 0.1), std::complex<double>(0.0, 0.1),
      std::complex<double>(0.05, -0.1), 0.4, 0.1,
      std::complex<double>(0.0, -0.1), 0.1, 0.3;
  const FieldSample f{mhz_to_angular(20.0), mhz_to_angular(10.0)};
  CHECK(std::abs(rhs(p, f, rho).trace()) < 1e-13);

  p.leak_rate = mhz_to_angular(1.0);
  CHECK(rhs(p, f, rho).trace().real() ==
        doctest::Approx(-p.leak_rate * 0.3).epsilon(1e-10));
}

TEST_CASE("rhs is linear in the state") {
  LambdaParams p = paper_rates();
  p.delta_avg = mhz_to_angular(100.0);
  const FieldSample f{mhz_to_angular(25.0), mhz_to_angular(15.0)};
  const DensityMatrix a = ground_state(0);
  const DensityMatrix b = dark_state_density(f.omega_plus, f.omega_minus);
  const double alpha = 0.7, beta = -1.3;
  const Eigen::Matrix3cd lhs = rhs(p, f, alpha * a + beta * b);
  const Eigen::Matrix3cd sum = alpha * rhs(p, f, a) + beta * rhs(p, f, b);
  CHECK(max_abs_diff(lhs, sum) < 1e-13);
}

TEST_CASE("propagate keeps a stationary state fixed") {
  const auto seq = make_rabi_pair(0.0, 1.0);
  const auto states = propagate(ground_state(0), seq, LambdaParams{},
                                {0.0, 0.5, 1.0}, 1e-3);
  REQUIRE(states.size() == 3);
  for (const auto& [t, rho] : states)
    CHECK(max_abs_diff(rho, ground_state(0)) < 1e-14);
}

TEST_CASE("excited population decays at 2*Gamma") {
  const LambdaParams p = paper_rates();
  const auto seq = make_rabi_pair(0.0, 0.05);
  const double t = 0.0114;  // one excited-state lifetime, 11.4 ns
  const double dt = t / std::ceil(t / suggest_dt(p, seq));
  const auto states = propagate(ground_state(2), seq, p, {t}, dt);
  const double ree = states.back().second(2, 2).real();
  CHECK(ree == doctest::Approx(std::exp(-2.0 * p.gamma_repop * t))
                   .epsilon(1e-6));
  CHECK(ree == doctest::Approx(1.0 / std::numbers::e).epsilon(2e-3));
}

TEST_CASE("full Rabi period returns the population to g1") {
  LambdaParams p;
  p.delta_avg = mhz_to_angular(1500.0);
  const double omega = mhz_to_angular(46.0);
  const double omega_r = effective_rabi_frequency(omega, omega, p.delta_avg);
  const double period = two_pi / omega_r;
  const auto seq = make_rabi_pair(omega, period);
  const auto states =
      propagate(ground_state(0), seq, p, {period}, suggest_dt(p, seq));
  CHECK(states.back().second(0, 0).real() == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("propagate agrees with the effective two-level oracle") {
  LambdaParams p;
  p.delta_avg = mhz_to_angular(1200.0);
  const double omega = mhz_to_angular(40.0);
  const double omega_r = effective_rabi_frequency(omega, omega, p.delta_avg);
  const double t_end = 0.6 * two_pi / omega_r;

  const auto seq = make_rabi_pair(omega, t_end);
  const auto states =
      propagate(ground_state(0), seq, p, {t_end}, suggest_dt(p, seq));

  Eigen::Matrix2cd rho2 = Eigen::Matrix2cd::Zero();
  rho2(0, 0) = 1.0;
  const auto ref = effective_two_level_propagate(rho2, omega_r, 0.0, t_end);
  CHECK(states.back().second(1, 1).real() ==
        doctest::Approx(ref(1, 1).real()).epsilon(0.03));
}

TEST_CASE("propagate preserves the density-matrix invariants") {
  LambdaParams p = paper_rates();
  p.delta_avg = mhz_to_angular(300.0);
  const double omega = mhz_to_angular(46.0);
  const auto seq = make_rabi_pair(omega, 2.0);
  const auto states = propagate(ground_state(0), seq, p,
                                {0.5, 1.0, 1.5, 2.0}, suggest_dt(p, seq));
  for (const auto& [t, rho] : states) {
    CHECK(hermiticity_error(rho) <= 1e-12);
    CHECK(trace_error(rho) <= 1e-9);
    CHECK(min_eigenvalue(rho) >= -1e-9);
  }
}

TEST_CASE("propagate matches the matrix-exponential oracle elementwise") {
  LambdaParams p = paper_rates();
  p.delta_avg = mhz_to_angular(1500.0);
  p.delta_two_photon = mhz_to_angular(1.0);
  const double omega = mhz_to_angular(46.0);
  const FieldSample f{omega, omega};
  const double t = 0.1;  // 100 ns constant segment

  const auto seq = make_rabi_pair(omega, t);
  // dt divides t exactly so the sampled step lands on the oracle's endpoint.
  const double dt = t / std::ceil(t / suggest_dt(p, seq, {0.005}));
  const auto states = propagate(ground_state(0), seq, p, {t}, dt);
  const auto ref = piecewise_constant_oracle(ground_state(0), f, p, t);
  CHECK(max_abs_diff(states.back().second, ref) <= 1e-8);
}

TEST_CASE("halving dt leaves the sampled populations unchanged to 1e-7") {
  LambdaParams p = paper_rates();
  p.delta_avg = mhz_to_angular(300.0);
  const double omega = mhz_to_angular(46.0);
  const auto seq = make_rabi_pair(omega, 1.5);
  // Both resolutions must land the sample times on step boundaries.
  const double dt = 0.75 / std::ceil(0.75 / suggest_dt(p, seq));
  const auto a = propagate(ground_state(0), seq, p, {0.75, 1.5}, dt);
  const auto b = propagate(ground_state(0), seq, p, {0.75, 1.5}, 0.5 * dt);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (int k = 0; k < 3; ++k)
      CHECK(std::abs(a[i].second(k, k).real() - b[i].second(k, k).real()) <
            1e-7);
}

TEST_CASE("propagate rejects out-of-span sample times") {
  const auto seq = make_rabi_pair(1.0, 1.0);
  CHECK_THROWS_AS(
      propagate(ground_state(0), seq, LambdaParams{}, {1.5}, 1e-3),
      InvalidWindow);
  CHECK_THROWS_AS(
      propagate(ground_state(0), seq, LambdaParams{}, {0.8, 0.2}, 1e-3),
      InvalidWindow);
}

TEST_CASE("oracle: identity evolution and closed-form decay") {
  const DensityMatrix rho0 = dark_state_density(3.0, 4.0);
  CHECK(max_abs_diff(
            piecewise_constant_oracle(rho0, {0, 0}, LambdaParams{}, 1.0),
            rho0) < 1e-12);

  const LambdaParams p = paper_rates();
  const auto rho = piecewise_constant_oracle(ground_state(2), {0, 0}, p, 0.02);
  CHECK(rho(2, 2).real() ==
        doctest::Approx(std::exp(-2.0 * p.gamma_repop * 0.02)).epsilon(1e-10));
}

TEST_CASE("effective Rabi frequency follows Omega+Omega-/(2 Delta)") {
  CHECK(effective_rabi_frequency(46.0, 46.0, 1500.0) ==
        doctest::Approx(0.70533).epsilon(1e-4));
  CHECK(effective_rabi_frequency(48.0, 48.0, 900.0) ==
        doctest::Approx(1.28).epsilon(1e-6));
  CHECK(effective_rabi_frequency(0.0, 5.0, 100.0) == 0.0);
  CHECK_THROWS_AS(effective_rabi_frequency(46.0, 46.0, 0.0), DivisionByZero);
}

TEST_CASE("dark state amplitudes") {
  const DarkState symmetric = dark_state(1.0, 1.0);
  CHECK(symmetric.plus_amp == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(symmetric.minus_amp == doctest::Approx(-1.0 / std::sqrt(2.0)));

  const DarkState d = dark_state(3.0, 4.0);
  CHECK(d.plus_amp == doctest::Approx(0.8));
  CHECK(d.minus_amp == doctest::Approx(-0.6));

  // Only Omega_plus on: the dark state is the Omega_minus-coupled state.
  const DarkState uncoupled = dark_state(1.0, 0.0);
  CHECK(std::abs(uncoupled.minus_amp) == doctest::Approx(1.0));
  CHECK(uncoupled.plus_amp == 0.0);

  CHECK_THROWS_AS(dark_state(0.0, 0.0), DegenerateInput);
}

TEST_CASE("dark state stays dark for ten Rabi periods") {
  LambdaParams p;
  p.delta_avg = mhz_to_angular(300.0);
  const double omega = mhz_to_angular(46.0);
  const double period =
      two_pi / effective_rabi_frequency(omega, omega, p.delta_avg);
  const double t_end = 10.0 * period;
  const auto seq = make_rabi_pair(omega, t_end);
  const auto states = propagate(dark_state_density(omega, omega), seq, p,
                                {0.5 * t_end, t_end}, suggest_dt(p, seq));
  for (const auto& [t, rho] : states) CHECK(rho(2, 2).real() <= 1e-6);
}

TEST_CASE("effective two-level propagator: pi pulse, full period, idle") {
  Eigen::Matrix2cd rho0 = Eigen::Matrix2cd::Zero();
  rho0(0, 0) = 1.0;
  const double omega_r = 2.0;

  const auto pi_pulse = effective_two_level_propagate(
      rho0, omega_r, 0.0, std::numbers::pi / omega_r);
  CHECK(pi_pulse(1, 1).real() == doctest::Approx(1.0));

  const auto period = effective_two_level_propagate(rho0, omega_r, 0.0,
                                                    two_pi / omega_r);
  CHECK(period(0, 0).real() == doctest::Approx(1.0));

  const auto idle = effective_two_level_propagate(rho0, 0.0, 1.7, 3.0);
  CHECK(idle(0, 0).real() == doctest::Approx(1.0));
}
