#pragma once

#include <Eigen/Dense>
#include <vector>

#include "opq/lattice.hpp"
#include "opq/meanfield.hpp"

namespace opq {

// Pair-phase profile along the wire axis, one value per x-slice. Sites share
// the value of their x-coordinate; transverse bonds see no phase difference.
struct PhaseProfile {
  Eigen::VectorXd values;
};

PhaseProfile uniform_profile(int nx, double value);
// Ring-safe sawtooth: every bond (including the wrap bond) sees |dphi| = per_bond.
// Requires even nx.
PhaseProfile triangle_profile(int nx, double per_bond);
PhaseProfile linear_profile(int nx, double per_bond);           // open-chain ramp
PhaseProfile sine_profile(int nx, double amplitude, int wavenumber);

struct BondTwist {
  int site_a = 0;
  int site_b = 0;
  double rho = 0.0;
  double dphi = 0.0;
  double energy = 0.0;
};

struct StiffnessReport {
  double exact = 0.0;
  double quadratic = 0.0;
  double ratio = 0.0;  // exact / quadratic (0 when quadratic == 0)
  std::vector<BondTwist> bonds;
};

// Exact energy cost of imprinting the profile on the converged state:
// the phase twist commutes with every density term, so only hopping shifts,
//   dE = 2 t sum_bonds rho_ij [1 - cos((phi_jx - phi_ix)/2)],
// with rho the two-spin ground-state correlator (half angle: pairs carry 2e).
double twist_energy_exact(const MeanFieldSolution& sol, const LatticeGraph& graph, double t,
                          const PhaseProfile& profile);

// Small-gradient expansion of the same sum: (t/4) sum_bonds rho_ij dphi^2.
double twist_energy_quadratic(const MeanFieldSolution& sol, const LatticeGraph& graph, double t,
                              const PhaseProfile& profile);

StiffnessReport stiffness_report(const MeanFieldSolution& sol, const LatticeGraph& graph,
                                 double t, const PhaseProfile& profile);

// Positive-semidefinite quadratic form S with phi^T S phi / 2 = quadratic twist
// energy; uniform profiles span its kernel.
Eigen::MatrixXd stiffness_matrix(const MeanFieldSolution& sol, const LatticeGraph& graph,
                                 double t);

struct OrthogonalityCurve {
  Eigen::VectorXd per_mode_abs;   // |o_m|, one per transverse mode
  Eigen::VectorXd abs_overlap;    // |O(M)| for M = 1..modes
  Eigen::VectorXd log10_abs;      // log10 |O(M)|, computed additively (no underflow)
  double log10_slope = 0.0;       // (log10|O(M)| - log10|O(1)|) / (M - 1)
  long m_star = -1;               // smallest M with |O(M)| < 1e-10, -1 if never
};

// Total overlap between two phase configurations of a stack of independent 1D
// modes: |O(M)| = prod_m |o_m| (Cauchy-Schwarz product bound saturated for a
// product state). Pass one amplitude to model M identical transverse modes, or
// exactly `modes` amplitudes for an inhomogeneous stack.
OrthogonalityCurve overlap_decay(const std::vector<Eigen::MatrixXd>& mode_amplitudes,
                                 const PhaseProfile& a, const PhaseProfile& b, int modes);

}  // namespace opq
