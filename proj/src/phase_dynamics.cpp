#include "opq/phase_dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "opq/gaussian.hpp"

namespace opq {

namespace {

void check_profile(const LatticeGraph& graph, const PhaseProfile& p) {
  if (p.values.size() != graph.dims[0])
    throw std::invalid_argument("phase profile length must equal the wire-axis extent");
  if (!p.values.allFinite())
    throw std::invalid_argument("phase profile has non-finite entries");
}

void check_solution(const MeanFieldSolution& sol, const LatticeGraph& graph) {
  if (sol.rho.rows() != graph.n_sites())
    throw std::invalid_argument("solution/graph size mismatch");
}

}  // namespace

PhaseProfile uniform_profile(int nx, double value) {
  return {Eigen::VectorXd::Constant(nx, value)};
}

PhaseProfile triangle_profile(int nx, double per_bond) {
  if (nx < 2 || nx % 2 != 0)
    throw std::invalid_argument("triangle_profile: wire length must be even and >= 2");
  Eigen::VectorXd v(nx);
  for (int i = 0; i < nx; ++i) {
    const int up = std::min(i, nx - i);  // rises for half the ring, falls back
    v(i) = per_bond * up;
  }
  return {v};
}

PhaseProfile linear_profile(int nx, double per_bond) {
  Eigen::VectorXd v(nx);
  for (int i = 0; i < nx; ++i) v(i) = per_bond * i;
  return {v};
}

PhaseProfile sine_profile(int nx, double amplitude, int wavenumber) {
  Eigen::VectorXd v(nx);
  for (int i = 0; i < nx; ++i) v(i) = amplitude * std::sin(2.0 * M_PI * wavenumber * i / nx);
  return {v};
}

double twist_energy_exact(const MeanFieldSolution& sol, const LatticeGraph& graph, double t,
                          const PhaseProfile& profile) {
  check_solution(sol, graph);
  check_profile(graph, profile);
  double e = 0.0;
  for (const Bond& b : graph.bonds) {
    const double d = profile.values(graph.x_of(b.b)) - profile.values(graph.x_of(b.a));
    e += 2.0 * t * sol.rho(b.a, b.b) * (1.0 - std::cos(0.5 * d));
  }
  return e;
}

double twist_energy_quadratic(const MeanFieldSolution& sol, const LatticeGraph& graph, double t,
                              const PhaseProfile& profile) {
  check_solution(sol, graph);
  check_profile(graph, profile);
  double e = 0.0;
  for (const Bond& b : graph.bonds) {
    const double d = profile.values(graph.x_of(b.b)) - profile.values(graph.x_of(b.a));
    e += 0.25 * t * sol.rho(b.a, b.b) * d * d;
  }
  return e;
}

StiffnessReport stiffness_report(const MeanFieldSolution& sol, const LatticeGraph& graph,
                                 double t, const PhaseProfile& profile) {
  check_solution(sol, graph);
  check_profile(graph, profile);
  StiffnessReport r;
  for (const Bond& b : graph.bonds) {
    BondTwist bt;
    bt.site_a = b.a;
    bt.site_b = b.b;
    bt.rho = sol.rho(b.a, b.b);
    bt.dphi = profile.values(graph.x_of(b.b)) - profile.values(graph.x_of(b.a));
    bt.energy = 2.0 * t * bt.rho * (1.0 - std::cos(0.5 * bt.dphi));
    r.exact += bt.energy;
    r.quadratic += 0.25 * t * bt.rho * bt.dphi * bt.dphi;
    r.bonds.push_back(bt);
  }
  r.ratio = r.quadratic != 0.0 ? r.exact / r.quadratic : 0.0;
  return r;
}

Eigen::MatrixXd stiffness_matrix(const MeanFieldSolution& sol, const LatticeGraph& graph,
                                 double t) {
  check_solution(sol, graph);
  const int nx = graph.dims[0];
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(nx, nx);
  for (const Bond& b : graph.bonds) {
    const int ia = graph.x_of(b.a), ib = graph.x_of(b.b);
    if (ia == ib) continue;  // transverse bond
    const double w = 0.5 * t * sol.rho(b.a, b.b);
    s(ia, ia) += w;
    s(ib, ib) += w;
    s(ia, ib) -= w;
    s(ib, ia) -= w;
  }
  return s;
}

OrthogonalityCurve overlap_decay(const std::vector<Eigen::MatrixXd>& mode_amplitudes,
                                 const PhaseProfile& a, const PhaseProfile& b, int modes) {
  if (modes < 1) throw std::invalid_argument("overlap_decay: modes must be >= 1");
  if (mode_amplitudes.empty() ||
      (mode_amplitudes.size() != 1 && static_cast<int>(mode_amplitudes.size()) != modes))
    throw std::invalid_argument(
        "overlap_decay: pass one amplitude (identical modes) or exactly `modes` amplitudes");

  OrthogonalityCurve c;
  c.per_mode_abs.resize(modes);
  c.abs_overlap.resize(modes);
  c.log10_abs.resize(modes);

  const bool identical = mode_amplitudes.size() == 1;
  double log10_o1 = 0.0;
  double acc = 0.0;
  for (int m = 0; m < modes; ++m) {
    double lg;
    if (identical && m > 0) {
      lg = log10_o1;
    } else {
      const auto& psi = mode_amplitudes[identical ? 0 : m];
      if (a.values.size() != psi.rows() || b.values.size() != psi.rows())
        throw std::invalid_argument("overlap_decay: profile length must match mode dimension");
      const auto o = gaussian_overlap(psi, a.values, psi, b.values);
      lg = std::log10(std::abs(o));
      if (m == 0) log10_o1 = lg;
    }
    c.per_mode_abs(m) = std::pow(10.0, lg);
    // identical modes: |O(M)| = |o_1|^M exactly, so the log curve is a product,
    // not an accumulated sum
    if (identical) {
      c.log10_abs(m) = (m + 1) * log10_o1;
    } else {
      acc += lg;
      c.log10_abs(m) = acc;
    }
    c.abs_overlap(m) = std::pow(10.0, c.log10_abs(m));
    if (c.m_star < 0 && c.log10_abs(m) < -10.0) c.m_star = m + 1;
  }
  if (c.m_star < 0 && log10_o1 < 0.0 && identical)
    c.m_star = static_cast<long>(std::ceil(-10.0 / log10_o1));
  c.log10_slope = modes > 1 ? (c.log10_abs(modes - 1) - c.log10_abs(0)) / (modes - 1) : 0.0;
  return c;
}

}  // namespace opq
