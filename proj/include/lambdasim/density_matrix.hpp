#pragma once

#include <Eigen/Dense>
#include <complex>

namespace lambdasim {

// State of the Lambda-system in the fixed basis (|g1>, |g2>, |e>):
// g1 couples to the excited level via Omega_minus, g2 via Omega_plus,
// e is the optically excited state.
using DensityMatrix = Eigen::Matrix3cd;

inline DensityMatrix ground_state(int which) {
  DensityMatrix rho = DensityMatrix::Zero();
  rho(which, which) = 1.0;
  return rho;
}

inline DensityMatrix pure_state(const Eigen::Vector3cd& psi) {
  return psi * psi.adjoint();
}

inline double hermiticity_error(const DensityMatrix& rho) {
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

inline double trace_error(const DensityMatrix& rho) {
  return std::abs(rho.trace() - std::complex<double>(1.0, 0.0));
}

inline double min_eigenvalue(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<DensityMatrix> es(rho, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

inline bool is_valid_state(const DensityMatrix& rho, double herm_tol = 1e-12,
                           double trace_tol = 1e-9, double eig_tol = 1e-9) {
  return hermiticity_error(rho) <= herm_tol && trace_error(rho) <= trace_tol &&
         min_eigenvalue(rho) >= -eig_tol;
}

}  // namespace lambdasim
