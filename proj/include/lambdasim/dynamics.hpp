#pragma once

#include <utility>
#include <vector>

#include "lambdasim/density_matrix.hpp"
#include "lambdasim/params.hpp"
#include "lambdasim/pulses.hpp"

namespace lambdasim {

// Rotating-frame Hamiltonian (rad/us):
//   diag(Delta - delta/2, Delta + delta/2, 0),
//   (g1,e) and (e,g1) elements Omega_minus/2,
//   (g2,e) and (e,g2) elements Omega_plus/2.
Eigen::Matrix3cd hamiltonian(const LambdaParams& params,
                             const FieldSample& fields);

// Relaxation term: Gamma*rho_ee feeds both ground populations, the excited
// population loses 2*Gamma*rho_ee (plus leak_rate*rho_ee when enabled),
// ground coherence decays at gamma_spin, optical coherences at gamma_opt.
Eigen::Matrix3cd dissipator(const LambdaParams& params,
                            const DensityMatrix& rho);

// drho/dt = -i[H, rho] + D(rho).  Traceless when leak_rate = 0.
Eigen::Matrix3cd rhs(const LambdaParams& params, const FieldSample& fields,
                     const DensityMatrix& rho);

struct PropagateOptions {
  // Step bound in radians: dt <= dt_phase_budget / (|Delta| + peak_plus +
  // peak_minus + 2*Gamma).  Used by suggest_dt.
  double dt_phase_budget = 0.05;
  double max_dt = 0.01;  // us, cap when all scales vanish
};

double suggest_dt(const LambdaParams& params, const PulseSequence& seq,
                  const PropagateOptions& opts = {});

// Fixed-step RK4 integration of rhs with the envelopes sampled at the RK4
// stage times.  Sample times are snapped to the nearest step boundary
// (no interpolation); each requested time yields one output entry.
// Throws InvalidWindow for samples outside [0, span] and NonConvergence
// if the trace drifts by more than 1e-6 with the leak disabled.
std::vector<std::pair<double, DensityMatrix>> propagate(
    const DensityMatrix& rho0, const PulseSequence& sequence,
    const LambdaParams& params, const std::vector<double>& sample_times,
    double dt);

// Brute-force reference for propagate on constant fields: exponentiates the
// vectorized 9x9 superoperator of rhs (scaling and squaring).
DensityMatrix piecewise_constant_oracle(const DensityMatrix& rho0,
                                        const FieldSample& fields,
                                        const LambdaParams& params, double t);

// The 9x9 superoperator L with vec(drho/dt) = L vec(rho), column-major vec.
Eigen::Matrix<std::complex<double>, 9, 9> rhs_superoperator(
    const LambdaParams& params, const FieldSample& fields);

// Omega_plus * Omega_minus / (2 * Delta).  Throws DivisionByZero at Delta=0.
double effective_rabi_frequency(double omega_plus, double omega_minus,
                                double delta_avg);

// Ground-manifold superposition decoupled from the fields, written as
// amplitudes on the two ground states:
//   plus_amp  (on g2, the Omega_plus-coupled state)  =  Omega_minus / N
//   minus_amp (on g1, the Omega_minus-coupled state) = -Omega_plus  / N
// Throws DegenerateInput when both amplitudes are zero.
struct DarkState {
  double plus_amp;
  double minus_amp;
};
DarkState dark_state(double omega_plus, double omega_minus);

// Density matrix of the dark state embedded in the 3-level basis.
DensityMatrix dark_state_density(double omega_plus, double omega_minus);

// Exact decay-free evolution of the reduced two-level spin under
// H2 = (delta/2) sigma_z + (omega_R/2) sigma_x, basis (g1, g2).
Eigen::Matrix2cd effective_two_level_propagate(const Eigen::Matrix2cd& rho0,
                                               double omega_R,
                                               double delta_two_photon,
                                               double t);

}  // namespace lambdasim
