#include "opq/circuit.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace opq {

namespace {
using Cplx = std::complex<double>;

Eigen::VectorXd finite_difference(const Eigen::VectorXd& f, double dx) {
  const int n = static_cast<int>(f.size());
  Eigen::VectorXd g(n);
  g(0) = (f(1) - f(0)) / dx;
  for (int i = 1; i + 1 < n; ++i) g(i) = (f(i + 1) - f(i - 1)) / (2.0 * dx);
  g(n - 1) = (f(n - 1) - f(n - 2)) / dx;
  return g;
}
}  // namespace

void ResonatorGeometry::validate() const {
  if (!(L_x > 0.0) || !(L_y > 0.0) || !(L_z_eff > 0.0) || !(d > 0.0) || !(epsilon > 0.0) ||
      !(n_volume > 0.0))
    throw std::invalid_argument("ResonatorGeometry: all parameters must be strictly positive");
}

double LineProfile::dx() const {
  return periodic ? length / samples() : length / (samples() - 1);
}

void LineProfile::validate() const {
  if (!(length > 0.0)) throw std::invalid_argument("LineProfile: length must be > 0");
  if (samples() < 2) throw std::invalid_argument("LineProfile: need at least 2 samples");
  if (!values.allFinite()) throw std::invalid_argument("LineProfile: non-finite samples");
}

double inductance_per_length(const PhysicalConstants& pc, double n_x) {
  pc.validate();
  if (!(n_x > 0.0)) throw std::invalid_argument("inductance_per_length: n_x must be > 0");
  return pc.m / (n_x * pc.e * pc.e);
}

double capacitance_per_length(const ResonatorGeometry& g) {
  g.validate();
  return g.L_y * g.epsilon / (2.0 * g.d);
}

double greens_fourier(double k_x, double d, double epsilon) {
  if (!(d > 0.0) || !(epsilon > 0.0))
    throw std::invalid_argument("greens_fourier: d and epsilon must be > 0");
  const double ak = std::abs(k_x);
  // series switch-over keeps full precision through the k -> 0 limit
  const double u = 2.0 * ak * d;
  if (u < 1e-6) return (d / epsilon) * (1.0 - 0.5 * u + u * u / 6.0);
  return (1.0 - std::exp(-u)) / (2.0 * epsilon * ak);
}

double capacitive_energy_exact(const LineProfile& n, const ResonatorGeometry& g,
                               const PhysicalConstants& pc) {
  n.validate();
  g.validate();
  pc.validate();
  if (!n.periodic)
    throw std::invalid_argument("capacitive_energy_exact: requires a periodic profile");

  const int ns = n.samples();
  const double dx = n.dx();
  const double lx = n.length;

  // n(k_m) = sum_j exp(-i k_m x_j) n_j dx on k_m = 2 pi m / L_x, m in (-ns/2, ns/2]
  double total = 0.0;
  for (int m = -(ns / 2); m <= (ns - 1) / 2; ++m) {
    const double k = 2.0 * M_PI * m / lx;
    Cplx nk(0.0, 0.0);
    for (int j = 0; j < ns; ++j) nk += n.values(j) * std::exp(Cplx(0.0, -k * j * dx));
    nk *= dx;
    total += std::norm(nk) * greens_fourier(k, g.d, g.epsilon);
  }
  return pc.e * pc.e * total / (g.L_y * lx);
}

double capacitive_energy_local(const LineProfile& n, double c, const PhysicalConstants& pc) {
  n.validate();
  pc.validate();
  if (!(c > 0.0)) throw std::invalid_argument("capacitive_energy_local: c must be > 0");
  const double dx = n.dx();
  double acc = 0.0;
  if (n.periodic) {
    for (int j = 0; j < n.samples(); ++j) acc += n.values(j) * n.values(j) * dx;
  } else {
    for (int j = 0; j + 1 < n.samples(); ++j)
      acc += 0.5 * (n.values(j) * n.values(j) + n.values(j + 1) * n.values(j + 1)) * dx;
  }
  return pc.e * pc.e * acc / (2.0 * c);
}

Eigen::VectorXd current_profile(const LineProfile& phi, const PhysicalConstants& pc, double n_x) {
  phi.validate();
  pc.validate();
  if (!(n_x > 0.0)) throw std::invalid_argument("current_profile: n_x must be > 0");
  return (pc.e * pc.hbar * n_x / (2.0 * pc.m)) * finite_difference(phi.values, phi.dx());
}

Eigen::VectorXd voltage_profile(const LineProfile& n, double c, const PhysicalConstants& pc) {
  n.validate();
  pc.validate();
  if (!(c > 0.0)) throw std::invalid_argument("voltage_profile: c must be > 0");
  return -pc.e / c * n.values;
}

Eigen::VectorXd gauge_invariant_phase(const LineProfile& phi, const LineProfile& a_integral,
                                      const PhysicalConstants& pc) {
  phi.validate();
  a_integral.validate();
  pc.validate();
  if (phi.samples() != a_integral.samples())
    throw std::invalid_argument("gauge_invariant_phase: sample-count mismatch");
  return phi.values - (2.0 * pc.e / pc.hbar) * a_integral.values;
}

Eigen::VectorXd macroscopic_charge(const LineProfile& n, const PhysicalConstants& pc) {
  n.validate();
  pc.validate();
  const double dx = n.dx();
  Eigen::VectorXd q(n.samples());
  q(0) = 0.0;
  for (int j = 1; j < n.samples(); ++j)
    q(j) = q(j - 1) - pc.e * 0.5 * (n.values(j - 1) + n.values(j)) * dx;
  return q;
}

double density_fluctuation_ratio(const LineProfile& n, const LineProfile& phi) {
  n.validate();
  phi.validate();
  if (n.samples() != phi.samples())
    throw std::invalid_argument("density_fluctuation_ratio: sample-count mismatch");
  const Eigen::VectorXd grad = finite_difference(phi.values, phi.dx());
  const double n_mean = n.values.mean();
  double num = 0.0, den = 0.0;
  for (int j = 0; j < n.samples(); ++j) {
    const double g2 = grad(j) * grad(j);
    num += (n.values(j) - n_mean) * g2;
    den += g2;
  }
  if (den == 0.0) return 0.0;
  return num / (n_mean * den);
}

double fundamental_from_lc(const ResonatorGeometry& g, const PhysicalConstants& pc) {
  const double l = inductance_per_length(pc, g.line_density());
  const double c = capacitance_per_length(g);
  return M_PI / (g.L_x * std::sqrt(l * c));
}

double fundamental_microscopic(const ResonatorGeometry& g, const PhysicalConstants& pc) {
  g.validate();
  pc.validate();
  return (pc.e * M_PI / g.L_x) *
         std::sqrt(2.0 * g.d * g.line_density() / (g.L_y * g.epsilon * pc.m));
}

CircuitParams mode_frequencies(const ResonatorGeometry& g, const PhysicalConstants& pc,
                               int j_max) {
  if (j_max < 1) throw std::invalid_argument("mode_frequencies: j_max must be >= 1");
  CircuitParams p;
  p.n_x = g.line_density();
  p.l = inductance_per_length(pc, p.n_x);
  p.c = capacitance_per_length(g);
  p.v = 1.0 / std::sqrt(p.l * p.c);
  p.omega1 = fundamental_from_lc(g, pc);
  p.omega1_microscopic = fundamental_microscopic(g, pc);
  for (int j = 1; j <= j_max; ++j) p.omega.push_back(j * p.omega1);
  return p;
}

std::vector<double> lc_chain_normal_modes(double l, double c, double L_x, int n_segments,
                                          ChainBoundary bc) {
  if (!(l > 0.0) || !(c > 0.0) || !(L_x > 0.0))
    throw std::invalid_argument("lc_chain_normal_modes: l, c, L_x must be > 0");
  if (n_segments < 2) throw std::invalid_argument("lc_chain_normal_modes: need >= 2 segments");

  const int n = n_segments;
  const double dx = L_x / n;
  // omega^2 = eigenvalues of T / (l c dx^2); T the second-difference matrix with
  // zero-current (Neumann) or grounded (Dirichlet) ends
  Eigen::VectorXd diag = Eigen::VectorXd::Constant(n, 2.0);
  if (bc == ChainBoundary::open) {
    diag(0) = 1.0;
    diag(n - 1) = 1.0;
  }
  const Eigen::VectorXd sub = Eigen::VectorXd::Constant(n - 1, -1.0);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("lc_chain_normal_modes: tridiagonal eigensolve failed");

  std::vector<double> out;
  const double scale = 1.0 / (std::sqrt(l * c) * dx);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = es.eigenvalues()(i);
    if (lam < 1e-12) continue;  // drop the uniform zero mode of the open chain
    out.push_back(std::sqrt(lam) * scale);
  }
  return out;
}

}  // namespace opq
