#include "lambdasim/dynamics.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <complex>

#include "lambdasim/errors.hpp"

namespace lambdasim {

using std::complex;
using cd = complex<double>;

void LambdaParams::validate() const {
  if (gamma_repop < 0 || gamma_opt < 0 || gamma_spin < 0 || leak_rate < 0)
    throw Error("LambdaParams: rates must be nonnegative");
  if (gamma_opt < gamma_repop)
    std::fprintf(stderr,
                 "lambdasim: warning: gamma_opt < gamma_repop breaks complete "
                 "positivity of the dissipator\n");
}

Eigen::Matrix3cd hamiltonian(const LambdaParams& p, const FieldSample& f) {
  Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
  h(0, 0) = p.delta_avg - 0.5 * p.delta_two_photon;
  h(1, 1) = p.delta_avg + 0.5 * p.delta_two_photon;
  h(0, 2) = h(2, 0) = 0.5 * f.omega_minus;
  h(1, 2) = h(2, 1) = 0.5 * f.omega_plus;
  return h;
}

Eigen::Matrix3cd dissipator(const LambdaParams& p, const DensityMatrix& rho) {
  Eigen::Matrix3cd d;
  const cd ree = rho(2, 2);
  d(0, 0) = p.gamma_repop * ree;
  d(1, 1) = p.gamma_repop * ree;
  d(2, 2) = -(2.0 * p.gamma_repop + p.leak_rate) * ree;
  d(0, 1) = -p.gamma_spin * rho(0, 1);
  d(1, 0) = -p.gamma_spin * rho(1, 0);
  d(0, 2) = -p.gamma_opt * rho(0, 2);
  d(2, 0) = -p.gamma_opt * rho(2, 0);
  d(1, 2) = -p.gamma_opt * rho(1, 2);
  d(2, 1) = -p.gamma_opt * rho(2, 1);
  return d;
}

Eigen::Matrix3cd rhs(const LambdaParams& p, const FieldSample& f,
                     const DensityMatrix& rho) {
  const Eigen::Matrix3cd h = hamiltonian(p, f);
  const cd mi(0.0, -1.0);
  return mi * (h * rho - rho * h) + dissipator(p, rho);
}

namespace {

// rhs with a prebuilt Hamiltonian; the inner loop of the integrator.
inline Eigen::Matrix3cd rhs_with_h(const LambdaParams& p,
                                   const Eigen::Matrix3cd& h,
                                   const DensityMatrix& rho) {
  const cd mi(0.0, -1.0);
  Eigen::Matrix3cd out = mi * (h * rho - rho * h);
  const cd ree = rho(2, 2);
  out(0, 0) += p.gamma_repop * ree;
  out(1, 1) += p.gamma_repop * ree;
  out(2, 2) -= (2.0 * p.gamma_repop + p.leak_rate) * ree;
  out(0, 1) -= p.gamma_spin * rho(0, 1);
  out(1, 0) -= p.gamma_spin * rho(1, 0);
  out(0, 2) -= p.gamma_opt * rho(0, 2);
  out(2, 0) -= p.gamma_opt * rho(2, 0);
  out(1, 2) -= p.gamma_opt * rho(1, 2);
  out(2, 1) -= p.gamma_opt * rho(2, 1);
  return out;
}

}  // namespace

double suggest_dt(const LambdaParams& params, const PulseSequence& seq,
                  const PropagateOptions& opts) {
  double peak_plus = 0.0, peak_minus = 0.0;
  for (const auto& e : seq.plus_envelopes) peak_plus = std::max(peak_plus, e.peak);
  for (const auto& e : seq.minus_envelopes)
    peak_minus = std::max(peak_minus, e.peak);
  const double scale = std::abs(params.delta_avg) +
                       std::abs(params.delta_two_photon) + peak_plus +
                       peak_minus + 2.0 * params.gamma_repop;
  if (scale <= 0.0) return opts.max_dt;
  return std::min(opts.max_dt, opts.dt_phase_budget / scale);
}

std::vector<std::pair<double, DensityMatrix>> propagate(
    const DensityMatrix& rho0, const PulseSequence& sequence,
    const LambdaParams& params, const std::vector<double>& sample_times,
    double dt) {
  if (dt <= 0.0) throw Error("propagate: dt must be positive");
  params.validate();

  const double span = sequence.span;
  std::vector<long> sample_steps;
  sample_steps.reserve(sample_times.size());
  long max_step = 0;
  double prev = -1.0;
  for (double t : sample_times) {
    if (t < prev) throw InvalidWindow("propagate: sample times must be nondecreasing");
    if (t < -1e-12 || t > span + 1e-9)
      throw InvalidWindow("propagate: sample time outside sequence span");
    prev = t;
    const long k = std::lround(t / dt);
    sample_steps.push_back(k);
    max_step = std::max(max_step, k);
  }

  std::vector<std::pair<double, DensityMatrix>> out;
  out.reserve(sample_times.size());

  DensityMatrix rho = rho0;
  const bool check_trace = params.leak_rate == 0.0;
  std::size_t next = 0;
  for (long step = 0; step <= max_step; ++step) {
    while (next < sample_steps.size() && sample_steps[next] == step) {
      out.emplace_back(sample_times[next], rho);
      ++next;
    }
    if (step == max_step) break;

    const double t = step * dt;
    const Eigen::Matrix3cd h0 =
        hamiltonian(params, sequence.sample(t));
    const Eigen::Matrix3cd hm =
        hamiltonian(params, sequence.sample(t + 0.5 * dt));
    const Eigen::Matrix3cd h1 =
        hamiltonian(params, sequence.sample(t + dt));

    const Eigen::Matrix3cd k1 = rhs_with_h(params, h0, rho);
    const Eigen::Matrix3cd k2 = rhs_with_h(params, hm, rho + (0.5 * dt) * k1);
    const Eigen::Matrix3cd k3 = rhs_with_h(params, hm, rho + (0.5 * dt) * k2);
    const Eigen::Matrix3cd k4 = rhs_with_h(params, h1, rho + dt * k3);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    rho = 0.5 * (rho + rho.adjoint().eval());

    if (check_trace && (step & 0x3ff) == 0) {
      if (std::abs(rho.trace().real() - 1.0) > 1e-6)
        throw NonConvergence("propagate: trace drift exceeds 1e-6; reduce dt");
    }
  }
  if (check_trace && std::abs(rho.trace().real() - 1.0) > 1e-6)
    throw NonConvergence("propagate: trace drift exceeds 1e-6; reduce dt");
  return out;
}

Eigen::Matrix<cd, 9, 9> rhs_superoperator(const LambdaParams& params,
                                          const FieldSample& fields) {
  Eigen::Matrix<cd, 9, 9> L;
  // rhs is linear in rho; its columns are the images of the basis matrices,
  // column-major vectorization.
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) {
      Eigen::Matrix3cd basis = Eigen::Matrix3cd::Zero();
      basis(i, j) = 1.0;
      const Eigen::Matrix3cd image = rhs(params, fields, basis);
      const int col = j * 3 + i;
      for (int jj = 0; jj < 3; ++jj)
        for (int ii = 0; ii < 3; ++ii) L(jj * 3 + ii, col) = image(ii, jj);
    }
  }
  return L;
}

DensityMatrix piecewise_constant_oracle(const DensityMatrix& rho0,
                                        const FieldSample& fields,
                                        const LambdaParams& params, double t) {
  const Eigen::Matrix<cd, 9, 9> L = rhs_superoperator(params, fields);
  const Eigen::Matrix<cd, 9, 9> U = (L * t).exp();
  Eigen::Matrix<cd, 9, 1> v;
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) v(j * 3 + i) = rho0(i, j);
  const Eigen::Matrix<cd, 9, 1> w = U * v;
  DensityMatrix rho;
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) rho(i, j) = w(j * 3 + i);
  return rho;
}

double effective_rabi_frequency(double omega_plus, double omega_minus,
                                double delta_avg) {
  if (delta_avg == 0.0)
    throw DivisionByZero("effective_rabi_frequency: delta_avg must be nonzero");
  return omega_plus * omega_minus / (2.0 * delta_avg);
}

DarkState dark_state(double omega_plus, double omega_minus) {
  const double norm = std::hypot(omega_plus, omega_minus);
  if (norm == 0.0)
    throw DegenerateInput("dark_state: both field amplitudes are zero");
  return {omega_minus / norm, -omega_plus / norm};
}

DensityMatrix dark_state_density(double omega_plus, double omega_minus) {
  const DarkState d = dark_state(omega_plus, omega_minus);
  Eigen::Vector3cd psi;
  psi << d.minus_amp, d.plus_amp, 0.0;  // basis (g1, g2, e)
  return pure_state(psi);
}

Eigen::Matrix2cd effective_two_level_propagate(const Eigen::Matrix2cd& rho0,
                                               double omega_R,
                                               double delta_two_photon,
                                               double t) {
  const double omega_gen = std::hypot(omega_R, delta_two_photon);
  Eigen::Matrix2cd u;
  if (omega_gen == 0.0) {
    u = Eigen::Matrix2cd::Identity();
  } else {
    const double half = 0.5 * omega_gen * t;
    const double c = std::cos(half);
    const double s = std::sin(half) / omega_gen;
    // U = cos(theta/2) I - i sin(theta/2) (n . sigma)
    const cd mi(0.0, -1.0);
    u(0, 0) = c + mi * s * delta_two_photon;
    u(1, 1) = c - mi * s * delta_two_photon;
    u(0, 1) = mi * s * omega_R;
    u(1, 0) = mi * s * omega_R;
  }
  return u * rho0 * u.adjoint();
}

}  // namespace lambdasim
