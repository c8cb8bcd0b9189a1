#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

#include "opq/lattice.hpp"

namespace opq {

enum class Spin { up, down };

// Brute-force many-body reference on up to 4 sites (Fock dimension 4^N <= 256).
// Builds pair-exponential states explicitly and evaluates expectation values by
// applying second-quantized operators with Jordan-Wigner signs. Deliberately
// independent of the Gaussian matrix formulas it certifies.
class FockOracle {
 public:
  explicit FockOracle(const LatticeGraph& graph);  // throws if graph has > 4 sites

  int n_sites() const { return n_; }
  int dimension() const { return dim_; }

  // Normalized exp(sum_ij pairing_ij c+_{i,up} c+_{j,dn})|0>. The exponential
  // series terminates exactly after N pair applications.
  Eigen::VectorXcd pair_state(const Eigen::MatrixXcd& pairing) const;

  std::complex<double> overlap(const Eigen::VectorXcd& bra, const Eigen::VectorXcd& ket) const;

  // <c_{site,dn} c_{site,up}>
  std::complex<double> pair_amplitude(const Eigen::VectorXcd& state, int site) const;

  // Matrix of <c+_{i,s} c_{j,s}>
  Eigen::MatrixXcd one_body(const Eigen::VectorXcd& state, Spin s) const;

  Eigen::VectorXd densities(const Eigen::VectorXcd& state, Spin s) const;

  // <H> for the attractive Hubbard Hamiltonian of the given spec on this graph.
  double energy(const Eigen::VectorXcd& state, const LatticeSpec& spec) const;

  // exp(i sum_i phi_i n_i / 2)|state>, diagonal in the occupation basis.
  Eigen::VectorXcd phase_twist(const Eigen::VectorXcd& state, const Eigen::VectorXd& phases) const;

 private:
  int orbital(int site, Spin s) const { return s == Spin::up ? site : n_ + site; }
  Eigen::VectorXcd apply_creation(const Eigen::VectorXcd& v, int orb) const;
  Eigen::VectorXcd apply_annihilation(const Eigen::VectorXcd& v, int orb) const;
  Eigen::VectorXcd apply_hamiltonian(const Eigen::VectorXcd& v, const LatticeSpec& spec) const;

  LatticeGraph graph_;
  int n_ = 0;
  int dim_ = 0;
};

// Randomized cross-check of every closed-form Gaussian expectation value against
// the brute-force oracle: pair amplitudes, densities, one-body matrices, overlaps
// (with independent phase profiles on both sides) and total energies. Returns the
// worst absolute deviation seen per category.
struct OracleDeviations {
  double pair = 0.0;
  double density = 0.0;
  double one_body = 0.0;
  double overlap = 0.0;
  double energy = 0.0;
  int trials = 0;
  double max() const;
};

OracleDeviations oracle_comparison_suite(int trials, int max_sites, std::uint64_t seed);

}  // namespace opq
