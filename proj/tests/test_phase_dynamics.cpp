#include <doctest.h>

#include <cmath>
#include <complex>

#include "opq/fock_oracle.hpp"
#include "opq/meanfield.hpp"
#include "opq/phase_dynamics.hpp"

using namespace opq;

namespace {

LatticeSpec ring(int n, double U = 2.0, double mu = -1.0) {
  LatticeSpec s;
  s.dims = {n};
  s.boundary = {Boundary::periodic};
  s.t = 1.0;
  s.U = U;
  s.mu = mu;
  return s;
}

}  // namespace

TEST_CASE("profiles have the advertised shapes") {
  auto tri = triangle_profile(6, 0.2);
  CHECK(tri.values(0) == 0.0);
  CHECK(tri.values(3) == doctest::Approx(0.6));
  CHECK(tri.values(5) == doctest::Approx(0.2));
  CHECK_THROWS_AS(triangle_profile(5, 0.1), std::invalid_argument);

  auto lin = linear_profile(4, 0.3);
  CHECK(lin.values(3) == doctest::Approx(0.9));
  auto sin1 = sine_profile(8, 0.5, 1);
  CHECK(sin1.values(0) == 0.0);
  CHECK(sin1.values(2) == doctest::Approx(0.5));
  CHECK(uniform_profile(3, 1.1).values.minCoeff() == 1.1);
}

TEST_CASE("every triangle bond difference has the same magnitude on a ring") {
  const int nx = 12;
  auto g = build_lattice(ring(nx));
  auto p = triangle_profile(nx, 0.17);
  for (const auto& b : g.bonds) {
    const double d = p.values(g.x_of(b.b)) - p.values(g.x_of(b.a));
    CHECK(std::abs(d) == doctest::Approx(0.17).epsilon(1e-14));
  }
}

TEST_CASE("twist energy matches the brute-force oracle on an interacting ring") {
  auto spec = ring(4);
  auto graph = build_lattice(spec);
  auto sol = solve_self_consistent(spec, uniform_seed(4));
  REQUIRE(sol.converged);

  FockOracle fock(graph);
  const Eigen::VectorXcd base =
      fock.pair_state(sol.pairing.amplitude.cast<std::complex<double>>());

  for (double amp : {0.4, 0.1}) {
    PhaseProfile prof = triangle_profile(4, amp);
    const Eigen::VectorXcd twisted =
        fock.pair_state(phased_amplitude(sol.pairing.amplitude, prof.values));

    // the twist operator and the dressed amplitude build the same state
    const Eigen::VectorXcd via_twist = fock.phase_twist(base, prof.values);
    CHECK(std::abs(std::abs(fock.overlap(via_twist, twisted)) - 1.0) < 1e-12);

    const double de_fock = fock.energy(twisted, spec) - fock.energy(base, spec);
    const double de_formula = twist_energy_exact(sol, graph, spec.t, prof);
    CHECK(de_formula == doctest::Approx(de_fock).epsilon(1e-10));
  }
}

TEST_CASE("uniform twist costs nothing") {
  auto spec = ring(8);
  auto graph = build_lattice(spec);
  auto sol = solve_self_consistent(spec, uniform_seed(8));
  REQUIRE(sol.converged);
  CHECK(std::abs(twist_energy_exact(sol, graph, spec.t, uniform_profile(8, 2.31))) < 1e-12);
  CHECK(twist_energy_quadratic(sol, graph, spec.t, uniform_profile(8, 2.31)) == 0.0);
}

TEST_CASE("quadratic form agrees with the stiffness matrix") {
  auto spec = ring(8);
  auto graph = build_lattice(spec);
  auto sol = solve_self_consistent(spec, uniform_seed(8));
  REQUIRE(sol.converged);

  const Eigen::MatrixXd s = stiffness_matrix(sol, graph, spec.t);
  CHECK((s - s.transpose()).cwiseAbs().maxCoeff() == 0.0);

  // uniform vector spans the kernel, spectrum otherwise positive
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  CHECK(std::abs((s * Eigen::VectorXd::Ones(8)).cwiseAbs().maxCoeff()) < 1e-14);
  CHECK(es.eigenvalues()(0) > -1e-13);
  CHECK(es.eigenvalues()(1) > 1e-3);

  Eigen::VectorXd phi(8);
  phi << 0.1, -0.3, 0.2, 0.05, -0.15, 0.4, 0.0, -0.2;
  const double quad = twist_energy_quadratic(sol, graph, spec.t, {phi});
  CHECK(0.5 * phi.dot(s * phi) == doctest::Approx(quad).epsilon(1e-13));
}

TEST_CASE("quartic scaling of the quadratic-approximation error") {
  auto spec = ring(16);
  auto graph = build_lattice(spec);
  auto sol = solve_self_consistent(spec, uniform_seed(16));
  REQUIRE(sol.converged);

  double prev = 0.0;
  for (int h = 0; h < 3; ++h) {
    const double amp = 0.2 * std::pow(0.5, h);
    auto p = triangle_profile(16, amp);
    const double diff = std::abs(twist_energy_exact(sol, graph, spec.t, p) -
                                 twist_energy_quadratic(sol, graph, spec.t, p));
    if (h > 0) CHECK(prev / diff == doctest::Approx(16.0).epsilon(0.05));
    prev = diff;
  }
}

TEST_CASE("overlap decay for identical modes is an exact power law") {
  Eigen::MatrixXd psi = 0.5 * Eigen::MatrixXd::Identity(16, 16);
  auto a = uniform_profile(16, 0.0);
  auto b = uniform_profile(16, 0.4);
  auto curve = overlap_decay({psi}, a, b, 500);

  const double lg1 = curve.log10_abs(0);
  CHECK(lg1 < 0.0);
  CHECK(curve.per_mode_abs(0) < 1.0);
  for (int m = 0; m < 500; ++m)
    CHECK(curve.log10_abs(m) == (m + 1) * lg1);  // bitwise linear by construction
  CHECK(curve.log10_slope == doctest::Approx(lg1).epsilon(1e-15));
  CHECK(curve.m_star == static_cast<long>(std::ceil(-10.0 / lg1)));
  CHECK(curve.log10_abs(static_cast<int>(curve.m_star) - 1) < -10.0);
}

TEST_CASE("inhomogeneous stacks multiply per-mode overlaps") {
  Eigen::MatrixXd p1 = 0.5 * Eigen::MatrixXd::Identity(4, 4);
  Eigen::MatrixXd p2 = 0.8 * Eigen::MatrixXd::Identity(4, 4);
  auto a = uniform_profile(4, 0.0);
  auto b = uniform_profile(4, 0.7);
  auto c1 = overlap_decay({p1}, a, b, 1);
  auto c2 = overlap_decay({p2}, a, b, 1);
  auto both = overlap_decay({p1, p2}, a, b, 2);
  CHECK(both.abs_overlap(1) ==
        doctest::Approx(c1.abs_overlap(0) * c2.abs_overlap(0)).epsilon(1e-13));
  CHECK_THROWS_AS(overlap_decay({p1, p2}, a, b, 3), std::invalid_argument);
  CHECK_THROWS_AS(overlap_decay({}, a, b, 2), std::invalid_argument);
}
