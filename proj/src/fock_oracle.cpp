#include "opq/fock_oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "opq/gaussian.hpp"
#include "opq/meanfield.hpp"

namespace opq {

namespace {
using Cplx = std::complex<double>;

inline int jw_sign(unsigned s, int orb) {
  // parity of occupied orbitals below orb
  const unsigned below = s & ((1u << orb) - 1u);
  return (std::popcount(below) & 1) ? -1 : 1;
}
}  // namespace

FockOracle::FockOracle(const LatticeGraph& graph) : graph_(graph), n_(graph.n_sites()) {
  if (n_ < 1 || n_ > 4)
    throw std::invalid_argument("FockOracle: supports 1 to 4 sites, got " + std::to_string(n_));
  dim_ = 1 << (2 * n_);
}

Eigen::VectorXcd FockOracle::apply_creation(const Eigen::VectorXcd& v, int orb) const {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim_);
  const unsigned bit = 1u << orb;
  for (int s = 0; s < dim_; ++s) {
    if (v(s) == Cplx(0.0, 0.0)) continue;
    if (s & bit) continue;
    out(s | bit) += static_cast<double>(jw_sign(s, orb)) * v(s);
  }
  return out;
}

Eigen::VectorXcd FockOracle::apply_annihilation(const Eigen::VectorXcd& v, int orb) const {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim_);
  const unsigned bit = 1u << orb;
  for (int s = 0; s < dim_; ++s) {
    if (v(s) == Cplx(0.0, 0.0)) continue;
    if (!(s & bit)) continue;
    out(s & ~bit) += static_cast<double>(jw_sign(s, orb)) * v(s);
  }
  return out;
}

Eigen::VectorXcd FockOracle::pair_state(const Eigen::MatrixXcd& pairing) const {
  if (pairing.rows() != n_ || pairing.cols() != n_)
    throw std::invalid_argument("FockOracle::pair_state: pairing matrix dimension mismatch");

  Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(dim_);
  acc(0) = 1.0;  // vacuum
  Eigen::VectorXcd cur = acc;
  for (int m = 1; m <= n_; ++m) {
    Eigen::VectorXcd next = Eigen::VectorXcd::Zero(dim_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        if (pairing(i, j) == Cplx(0.0, 0.0)) continue;
        // c+_{i,up} c+_{j,dn}: rightmost operator acts first
        next += pairing(i, j) *
                apply_creation(apply_creation(cur, orbital(j, Spin::down)), orbital(i, Spin::up));
      }
    cur = next / static_cast<double>(m);
    acc += cur;
  }
  const double nrm = acc.norm();
  if (!(nrm > 0.0) || !std::isfinite(nrm))
    throw std::runtime_error("FockOracle::pair_state: state has zero or non-finite norm");
  return acc / nrm;
}

std::complex<double> FockOracle::overlap(const Eigen::VectorXcd& bra,
                                         const Eigen::VectorXcd& ket) const {
  return bra.dot(ket);  // Eigen conjugates the left argument
}

std::complex<double> FockOracle::pair_amplitude(const Eigen::VectorXcd& state, int site) const {
  // <c_{dn} c_{up}>: apply c_{up} first, then c_{dn}
  const auto w =
      apply_annihilation(apply_annihilation(state, orbital(site, Spin::up)), orbital(site, Spin::down));
  return state.dot(w);
}

Eigen::MatrixXcd FockOracle::one_body(const Eigen::VectorXcd& state, Spin s) const {
  // <c+_i c_j> = (c_i state)^+ (c_j state)
  std::vector<Eigen::VectorXcd> ann(n_);
  for (int i = 0; i < n_; ++i) ann[i] = apply_annihilation(state, orbital(i, s));
  Eigen::MatrixXcd m(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m(i, j) = ann[i].dot(ann[j]);
  return m;
}

Eigen::VectorXd FockOracle::densities(const Eigen::VectorXcd& state, Spin s) const {
  Eigen::VectorXd d(n_);
  for (int i = 0; i < n_; ++i) {
    double acc = 0.0;
    const unsigned bit = 1u << orbital(i, s);
    for (int b = 0; b < dim_; ++b)
      if (b & bit) acc += std::norm(state(b));
    d(i) = acc;
  }
  return d;
}

Eigen::VectorXcd FockOracle::apply_hamiltonian(const Eigen::VectorXcd& v,
                                               const LatticeSpec& spec) const {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim_);
  // hopping, both directions and spins
  for (const Bond& b : graph_.bonds) {
    for (Spin s : {Spin::up, Spin::down}) {
      out -= spec.t * apply_creation(apply_annihilation(v, orbital(b.b, s)), orbital(b.a, s));
      out -= spec.t * apply_creation(apply_annihilation(v, orbital(b.a, s)), orbital(b.b, s));
    }
  }
  // diagonal: potential + interaction
  for (int st = 0; st < dim_; ++st) {
    if (v(st) == Cplx(0.0, 0.0)) continue;
    double diag = 0.0;
    for (int i = 0; i < n_; ++i) {
      const bool up = (st >> orbital(i, Spin::up)) & 1;
      const bool dn = (st >> orbital(i, Spin::down)) & 1;
      const double ev = spec.site_potential.empty() ? 0.0 : spec.site_potential[i];
      diag -= (ev + spec.mu) * (static_cast<int>(up) + static_cast<int>(dn));
      if (up && dn) diag -= spec.U;
    }
    out(st) += diag * v(st);
  }
  return out;
}

double FockOracle::energy(const Eigen::VectorXcd& state, const LatticeSpec& spec) const {
  const Cplx e = state.dot(apply_hamiltonian(state, spec));
  return e.real() / state.squaredNorm();
}

Eigen::VectorXcd FockOracle::phase_twist(const Eigen::VectorXcd& state,
                                         const Eigen::VectorXd& phases) const {
  if (phases.size() != n_)
    throw std::invalid_argument("FockOracle::phase_twist: phase profile length mismatch");
  Eigen::VectorXcd out(dim_);
  for (int s = 0; s < dim_; ++s) {
    double total = 0.0;
    for (int i = 0; i < n_; ++i) {
      const int occ = static_cast<int>((s >> orbital(i, Spin::up)) & 1) +
                      static_cast<int>((s >> orbital(i, Spin::down)) & 1);
      total += phases(i) * occ;
    }
    out(s) = state(s) * std::exp(Cplx(0.0, 0.5 * total));
  }
  return out;
}

double OracleDeviations::max() const {
  double m = pair;
  m = std::max(m, density);
  m = std::max(m, one_body);
  m = std::max(m, overlap);
  m = std::max(m, energy);
  return m;
}

namespace {

struct SplitMix {
  std::uint64_t state;
  explicit SplitMix(std::uint64_t seed) : state(seed ? seed : 0x9e3779b97f4a7c15ull) {}
  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(next() >> 11) * 0x1.0p-53);
  }
};

Eigen::VectorXcd pair_state_from(const FockOracle& fock, const Eigen::MatrixXd& psi_bar,
                                 const Eigen::VectorXd& phases) {
  return fock.pair_state(phased_amplitude(psi_bar, phases));
}

}  // namespace

OracleDeviations oracle_comparison_suite(int trials, int max_sites, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("oracle_comparison_suite: trials must be >= 1");
  if (max_sites < 1 || max_sites > 4)
    throw std::invalid_argument("oracle_comparison_suite: max_sites must be 1..4");

  constexpr double kPi = 3.14159265358979323846;
  SplitMix rng(seed);
  OracleDeviations dev;

  for (int trial = 0; trial < trials; ++trial) {
    const int n = 1 + trial % max_sites;

    LatticeSpec spec;
    spec.dims = {n};
    spec.boundary = {rng.uniform(0.0, 1.0) < 0.5 ? Boundary::periodic : Boundary::open};
    spec.t = rng.uniform(0.5, 1.5);
    spec.U = rng.uniform(0.0, 3.0);
    spec.mu = rng.uniform(-1.0, 1.0);
    spec.site_potential.resize(n);
    for (int i = 0; i < n; ++i) spec.site_potential[i] = rng.uniform(-0.5, 0.5);

    const LatticeGraph graph = build_lattice(spec);
    const FockOracle fock(graph);

    auto random_symmetric = [&]() {
      Eigen::MatrixXd a(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = rng.uniform(-0.8, 0.8);
      return Eigen::MatrixXd(0.5 * (a + a.transpose()));
    };
    const Eigen::MatrixXd psi1 = random_symmetric();
    const Eigen::MatrixXd psi2 = random_symmetric();
    Eigen::VectorXd ph1(n), ph2(n);
    for (int i = 0; i < n; ++i) {
      ph1(i) = rng.uniform(-kPi, kPi);
      ph2(i) = rng.uniform(-kPi, kPi);
    }

    const Eigen::VectorXcd state1 = pair_state_from(fock, psi1, ph1);
    const Eigen::VectorXcd state2 = pair_state_from(fock, psi2, ph2);
    const GaussianCorrelators corr = gaussian_correlators(psi1);

    for (int i = 0; i < n; ++i) {
      const Cplx expect = corr.pair(i, i) * std::exp(Cplx(0.0, ph1(i)));
      dev.pair = std::max(dev.pair, std::abs(fock.pair_amplitude(state1, i) - expect));
    }

    for (Spin s : {Spin::up, Spin::down}) {
      const Eigen::VectorXd d = fock.densities(state1, s);
      for (int i = 0; i < n; ++i)
        dev.density = std::max(dev.density, std::abs(d(i) - corr.one_body(i, i)));
      const Eigen::MatrixXcd m = fock.one_body(state1, s);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const Cplx expect =
              corr.one_body(i, j) * std::exp(Cplx(0.0, 0.5 * (ph1(j) - ph1(i))));
          dev.one_body = std::max(dev.one_body, std::abs(m(i, j) - expect));
        }
    }

    // energy is invariant under a global pair phase; include that in the check
    const double theta = rng.uniform(-kPi, kPi);
    const Eigen::VectorXcd state_u =
        pair_state_from(fock, psi1, Eigen::VectorXd::Constant(n, theta));
    dev.energy = std::max(
        dev.energy, std::abs(fock.energy(state_u, spec) - free_energy(psi1, graph, spec)));

    const Cplx o_closed = gaussian_overlap(psi1, ph1, psi2, ph2);
    const Cplx o_fock = fock.overlap(state1, state2);
    dev.overlap = std::max(dev.overlap, std::abs(o_closed - o_fock));
  }

  dev.trials = trials;
  return dev;
}

}  // namespace opq
