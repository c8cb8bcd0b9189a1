#pragma once

#include <Eigen/Dense>

#include "opq/gaussian.hpp"
#include "opq/lattice.hpp"

namespace opq {

struct SolverOptions {
  double tolerance = 1e-8;      // max-abs of the amplitude-equation residual, units of t
  int max_iter = 2000;
  double mixing = 0.5;          // linear mixing of the density and gap fields
  double amplitude_cap = 1e4;   // v/u singularity clamp for the normal branch
  int verbosity = 0;            // >= 2 logs residual per cycle to stderr
};

struct MeanFieldSolution {
  PairingState pairing;
  Eigen::VectorXcd gap;      // Delta_i, carries the global phase
  Eigen::VectorXd n_up;
  Eigen::VectorXd n_down;
  Eigen::MatrixXd rho;       // sum_s <c+_{i,s} c_{j,s}>
  double energy = 0.0;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  bool superconducting = false;  // max |Delta| above threshold (see solver)
};

// Stationarity residual of the variational energy in matrix form,
//   R = A Psibar + Psibar A + Dhat - Psibar Dhat Psibar,
// A = h - U diag(n), Dhat = diag(Delta) at zero phase. Densities and Delta are
// recomputed from psi_bar here, never taken from cached fields. R == 0 exactly
// at Psibar = 0 (normal state) and at the self-consistent pairing solution.
Eigen::MatrixXd stationarity_residual(const Eigen::MatrixXd& psi_bar, const LatticeGraph& graph,
                                      const LatticeSpec& spec);

// Variational energy <H> of the pair-exponential state:
// hopping + potential + U (n_up n_dn + |<c_dn c_up>|^2) per site, all from the
// closed-form correlators. Independent of the global phase.
double free_energy(const Eigen::MatrixXd& psi_bar, const LatticeGraph& graph,
                   const LatticeSpec& spec);

// Fixed-point iteration on the density and gap fields: diagonalize the 2N x 2N
// mean-field block matrix [[A, Dhat], [Dhat, -A]], rebuild the fields from the
// positive-branch Bogoliubov blocks, mix linearly, repeat. Each cycle the pair
// amplitude -V U^-1 is extracted from the same diagonalization and tested
// against the amplitude equation; converged means that residual dropped below
// options.tolerance. On exhaustion or when the fields go stationary without
// the residual passing (a state outside the pair-exponential family, e.g. the
// U = 0 Fermi sea), the best state plus diagnostics is returned with
// converged = false (no exception).
// NaN/Inf during iteration throws std::runtime_error (numerical failure).
MeanFieldSolution solve_self_consistent(const LatticeSpec& spec, const PairingState& init,
                                        const SolverOptions& options = {});

// Assemble a full solution record (correlators, gap, energy, residual) from a
// given amplitude without iterating.
MeanFieldSolution evaluate_state(const PairingState& state, const LatticeGraph& graph,
                                 const LatticeSpec& spec);

PairingState uniform_seed(int n_sites, double amplitude = 0.1, double phase = 0.0);

}  // namespace opq
