#pragma once

#include <Eigen/Dense>
#include <complex>

namespace opq {

// Pair-exponential state exp(sum_ij Psi_ij c+_{i,up} c+_{j,dn})|0> with
// Psi = D Psibar D, D = diag(exp(i phi_i / 2)), Psibar real symmetric.
// The half angle is per created fermion; a Cooper pair picks up the full phi.
struct PairingState {
  Eigen::MatrixXd amplitude;  // Psibar, real symmetric
  double global_phase = 0.0;
};

void validate_amplitude(const Eigen::MatrixXd& psi_bar);  // symmetric + finite

struct GaussianCorrelators {
  Eigen::MatrixXd pair;      // <c_{i,dn} c_{j,up}> at phi = 0:  Psibar (1+Psibar^2)^-1
  Eigen::MatrixXd one_body;  // <c+_{i,s} c_{j,s}> per spin:     Psibar^2 (1+Psibar^2)^-1
  double inversion_residual = 0.0;
};

// Throws std::runtime_error if the linear solves lose accuracy
// (inversion residual above 1e-8).
GaussianCorrelators gaussian_correlators(const Eigen::MatrixXd& psi_bar);

// Per-spin site densities, the diagonal of one_body. Eigenvalues of one_body
// lie in [0, 1); a clamped near-singular amplitude approaches full filling.
Eigen::VectorXd gaussian_density(const Eigen::MatrixXd& psi_bar);

// Delta_i = -U <c_{i,dn} c_{i,up}> = -U [Psibar(1+Psibar^2)^-1]_ii exp(i phi).
Eigen::VectorXcd pairing_gap(const PairingState& state, double U);

// Normalized overlap of two pair-exponential states with site-local phases:
//   det(1 + Psi1^+ Psi2) / sqrt(det(1+Psi1^+Psi1) det(1+Psi2^+Psi2)),
// evaluated in log-determinant form so large systems neither over- nor
// underflow. |result| <= 1 up to roundoff; result = 1 for identical inputs.
std::complex<double> gaussian_overlap(const Eigen::MatrixXd& psi1, const Eigen::VectorXd& phases1,
                                      const Eigen::MatrixXd& psi2, const Eigen::VectorXd& phases2);

// D Psibar D for a given site-phase profile.
Eigen::MatrixXcd phased_amplitude(const Eigen::MatrixXd& psi_bar, const Eigen::VectorXd& phases);

}  // namespace opq
