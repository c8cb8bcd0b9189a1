#include "opq/meanfield.hpp"

#include <cmath>
#include <complex>
#include <iostream>
#include <limits>
#include <stdexcept>

namespace opq {

namespace {

// A = h - U diag(n_opposite_spin); spin-balanced sector, so one matrix serves
// both spins.
Eigen::MatrixXd hartree_shifted(const Eigen::MatrixXd& h, const Eigen::VectorXd& n, double U) {
  Eigen::MatrixXd a = h;
  a.diagonal() -= U * n;
  return a;
}

// Positive-branch Bogoliubov blocks of [[A, Dhat], [Dhat, -A]]. The spectrum
// pairs as +-E, so the top N of the ascending eigenvalue order is the branch.
struct BogoliubovBlocks {
  Eigen::MatrixXd u;
  Eigen::MatrixXd v;
};

BogoliubovBlocks positive_branch(const Eigen::MatrixXd& a, const Eigen::VectorXd& delta) {
  const int n = static_cast<int>(a.rows());
  Eigen::MatrixXd m(2 * n, 2 * n);
  m.topLeftCorner(n, n) = a;
  m.topRightCorner(n, n) = delta.asDiagonal();
  m.bottomLeftCorner(n, n) = delta.asDiagonal();
  m.bottomRightCorner(n, n) = -a;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("solve_self_consistent: Bogoliubov diagonalization failed");
  return {es.eigenvectors().topRows(n).rightCols(n),
          es.eigenvectors().bottomRows(n).rightCols(n)};
}

// Pair amplitude -V U^-1 from the positive branch. The SVD floor keeps the
// normal limit (u -> 0 on filled modes) representable: singular values of the
// u block below 1/cap invert to cap.
Eigen::MatrixXd amplitude_from_blocks(const BogoliubovBlocks& blk, double cap) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(blk.u, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::VectorXd inv = svd.singularValues();
  for (Eigen::Index k = 0; k < inv.size(); ++k)
    inv(k) = 1.0 / std::max(inv(k), 1.0 / cap);
  const Eigen::MatrixXd uinv =
      svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();

  Eigen::MatrixXd psi = -blk.v * uinv;
  psi = 0.5 * (psi + psi.transpose()).eval();
  psi = psi.cwiseMax(-cap).cwiseMin(cap).eval();
  return psi;
}

}  // namespace

Eigen::MatrixXd stationarity_residual(const Eigen::MatrixXd& psi_bar, const LatticeGraph& graph,
                                      const LatticeSpec& spec) {
  const auto g = gaussian_correlators(psi_bar);
  const Eigen::MatrixXd h = hamiltonian_matrix_elements(graph, spec);
  const Eigen::MatrixXd a = hartree_shifted(h, g.one_body.diagonal(), spec.U);
  const Eigen::MatrixXd dhat = (-spec.U * g.pair.diagonal()).asDiagonal();
  return a * psi_bar + psi_bar * a + dhat - psi_bar * dhat * psi_bar;
}

double free_energy(const Eigen::MatrixXd& psi_bar, const LatticeGraph& graph,
                   const LatticeSpec& spec) {
  const auto g = gaussian_correlators(psi_bar);
  const Eigen::VectorXd n = g.one_body.diagonal();

  double e_hop = 0.0;
  for (const Bond& b : graph.bonds)
    e_hop += -spec.t * 2.0 * (g.one_body(b.a, b.b) + g.one_body(b.b, b.a));  // both spins

  double e_pot = 0.0, e_int = 0.0;
  for (int i = 0; i < graph.n_sites(); ++i) {
    const double ev = spec.site_potential.empty() ? 0.0 : spec.site_potential[i];
    e_pot -= (ev + spec.mu) * 2.0 * n(i);
    const double p = g.pair(i, i);
    e_int -= spec.U * (n(i) * n(i) + p * p);
  }
  return e_hop + e_pot + e_int;
}

MeanFieldSolution evaluate_state(const PairingState& state, const LatticeGraph& graph,
                                 const LatticeSpec& spec) {
  const auto g = gaussian_correlators(state.amplitude);
  MeanFieldSolution sol;
  sol.pairing = state;
  sol.gap = pairing_gap(state, spec.U);
  sol.n_up = g.one_body.diagonal();
  sol.n_down = sol.n_up;
  sol.rho = 2.0 * g.one_body;
  sol.energy = free_energy(state.amplitude, graph, spec);
  sol.residual_norm =
      stationarity_residual(state.amplitude, graph, spec).cwiseAbs().maxCoeff();
  sol.superconducting = sol.gap.cwiseAbs().maxCoeff() > 1e-6 * spec.t;
  return sol;
}

PairingState uniform_seed(int n_sites, double amplitude, double phase) {
  PairingState s;
  s.amplitude = amplitude * Eigen::MatrixXd::Identity(n_sites, n_sites);
  s.global_phase = phase;
  return s;
}

MeanFieldSolution solve_self_consistent(const LatticeSpec& spec, const PairingState& init,
                                        const SolverOptions& options) {
  spec.validate();
  validate_amplitude(init.amplitude);
  const auto graph = build_lattice(spec);
  const int n = graph.n_sites();
  if (init.amplitude.rows() != n)
    throw std::invalid_argument("solve_self_consistent: seed dimension mismatch");
  if (!(options.mixing > 0.0 && options.mixing <= 1.0))
    throw std::invalid_argument("solve_self_consistent: mixing must be in (0, 1]");
  if (options.max_iter < 1)
    throw std::invalid_argument("solve_self_consistent: max_iter must be >= 1");

  const Eigen::MatrixXd h = hamiltonian_matrix_elements(graph, spec);

  // a seed that already satisfies the amplitude equation is returned untouched
  {
    const double r0 =
        stationarity_residual(init.amplitude, graph, spec).cwiseAbs().maxCoeff();
    if (r0 <= options.tolerance) {
      MeanFieldSolution sol = evaluate_state(init, graph, spec);
      sol.iterations = 0;
      sol.converged = true;
      return sol;
    }
  }

  // Iterate the mean fields (densities and local gaps) rather than the
  // amplitude itself: the amplitude target diverges on modes far below the
  // Fermi level, the fields stay bounded. Each cycle the candidate amplitude
  // is re-extracted from the same diagonalization for the convergence test.
  const auto g0 = gaussian_correlators(init.amplitude);
  Eigen::VectorXd dens = g0.one_body.diagonal();
  Eigen::VectorXd delta = -spec.U * g0.pair.diagonal();

  Eigen::MatrixXd psi = init.amplitude;
  double res_norm = std::numeric_limits<double>::infinity();
  int cycles = 0;
  bool done = false;

  while (cycles < options.max_iter && !done) {
    ++cycles;
    const Eigen::MatrixXd a = hartree_shifted(h, dens, spec.U);
    const BogoliubovBlocks blk = positive_branch(a, delta);

    psi = amplitude_from_blocks(blk, options.amplitude_cap);
    if (!psi.allFinite())
      throw std::runtime_error("solve_self_consistent: amplitude became non-finite");
    res_norm = stationarity_residual(psi, graph, spec).cwiseAbs().maxCoeff();
    if (!std::isfinite(res_norm))
      throw std::runtime_error("solve_self_consistent: residual became non-finite");

    const Eigen::VectorXd dens_new = (blk.v * blk.v.transpose()).diagonal();
    const Eigen::VectorXd delta_new = spec.U * (blk.v * blk.u.transpose()).diagonal();
    const double change =
        std::max((dens_new - dens).cwiseAbs().maxCoeff(),
                 (delta_new - delta).cwiseAbs().maxCoeff());
    if (options.verbosity >= 2)
      std::cerr << "cycle " << cycles << " residual " << res_norm << " field change "
                << change << "\n";

    if (res_norm <= options.tolerance) {
      done = true;  // keep the amplitude consistent with the tested fields
    } else if (change < 1e-13) {
      done = true;  // fields stationary but the state is outside the family
    } else {
      dens += options.mixing * (dens_new - dens);
      delta += options.mixing * (delta_new - delta);
      if (!dens.allFinite() || !delta.allFinite())
        throw std::runtime_error("solve_self_consistent: fields became non-finite");
    }
  }

  PairingState final_state{psi, init.global_phase};
  MeanFieldSolution sol = evaluate_state(final_state, graph, spec);
  sol.iterations = cycles;
  sol.residual_norm = res_norm;
  sol.converged = res_norm <= options.tolerance;
  return sol;
}

}  // namespace opq
