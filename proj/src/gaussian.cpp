#include "opq/gaussian.hpp"

#include <cmath>
#include <stdexcept>

namespace opq {

namespace {

using Cplx = std::complex<double>;

// log det of a general complex matrix via LU (diagonal of U plus permutation sign)
Cplx log_det(const Eigen::MatrixXcd& a) {
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  Cplx ld(0.0, 0.0);
  const auto& m = lu.matrixLU();
  for (Eigen::Index i = 0; i < m.rows(); ++i) ld += std::log(m(i, i));
  if (lu.permutationP().determinant() < 0) ld += Cplx(0.0, M_PI);
  return ld;
}

}  // namespace

void validate_amplitude(const Eigen::MatrixXd& psi_bar) {
  if (psi_bar.rows() != psi_bar.cols())
    throw std::invalid_argument("pairing amplitude must be square");
  if (!psi_bar.allFinite())
    throw std::invalid_argument("pairing amplitude has non-finite entries");
  const double scale = std::max(1.0, psi_bar.cwiseAbs().maxCoeff());
  if ((psi_bar - psi_bar.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("pairing amplitude must be symmetric");
}

GaussianCorrelators gaussian_correlators(const Eigen::MatrixXd& psi_bar) {
  validate_amplitude(psi_bar);
  const int n = static_cast<int>(psi_bar.rows());
  const Eigen::MatrixXd p2 = psi_bar * psi_bar;
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) + p2;  // SPD, eigenvalues >= 1

  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("gaussian_correlators: (1+Psibar^2) factorization failed");

  GaussianCorrelators g;
  g.pair = llt.solve(psi_bar);
  g.one_body = llt.solve(p2);
  // Psibar commutes with (1+Psibar^2)^-1, so both are symmetric; restore exactly.
  g.pair = 0.5 * (g.pair + g.pair.transpose()).eval();
  g.one_body = 0.5 * (g.one_body + g.one_body.transpose()).eval();

  // backward error of the two solves; stays near machine epsilon even for the
  // near-singular clamped amplitudes of the normal branch
  const double na = a.cwiseAbs().maxCoeff();
  const double r1 = (a * g.pair - psi_bar).cwiseAbs().maxCoeff() /
                    std::max(1.0, na * g.pair.cwiseAbs().maxCoeff() +
                                      psi_bar.cwiseAbs().maxCoeff());
  const double r2 = (a * g.one_body - p2).cwiseAbs().maxCoeff() /
                    std::max(1.0, na * g.one_body.cwiseAbs().maxCoeff() +
                                      p2.cwiseAbs().maxCoeff());
  g.inversion_residual = std::max(r1, r2);
  if (g.inversion_residual > 1e-8)
    throw std::runtime_error("gaussian_correlators: inversion residual " +
                             std::to_string(g.inversion_residual) + " exceeds 1e-8");
  return g;
}

Eigen::VectorXd gaussian_density(const Eigen::MatrixXd& psi_bar) {
  return gaussian_correlators(psi_bar).one_body.diagonal();
}

Eigen::VectorXcd pairing_gap(const PairingState& state, double U) {
  const auto g = gaussian_correlators(state.amplitude);
  const Cplx phase = std::exp(Cplx(0.0, state.global_phase));
  return (-U * g.pair.diagonal()).cast<Cplx>() * phase;
}

Eigen::MatrixXcd phased_amplitude(const Eigen::MatrixXd& psi_bar, const Eigen::VectorXd& phases) {
  if (phases.size() != psi_bar.rows())
    throw std::invalid_argument("phase profile length must equal amplitude dimension");
  Eigen::VectorXcd d(phases.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) d(i) = std::exp(Cplx(0.0, 0.5 * phases(i)));
  return d.asDiagonal() * psi_bar.cast<Cplx>() * d.asDiagonal();
}

std::complex<double> gaussian_overlap(const Eigen::MatrixXd& psi1, const Eigen::VectorXd& phases1,
                                      const Eigen::MatrixXd& psi2, const Eigen::VectorXd& phases2) {
  validate_amplitude(psi1);
  validate_amplitude(psi2);
  if (psi1.rows() != psi2.rows())
    throw std::invalid_argument("gaussian_overlap: dimension mismatch");

  const Eigen::MatrixXcd a = phased_amplitude(psi1, phases1);
  const Eigen::MatrixXcd b = phased_amplitude(psi2, phases2);
  const int n = static_cast<int>(a.rows());
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);

  const Cplx ld12 = log_det(id + a.adjoint() * b);
  const Cplx ld11 = log_det(id + a.adjoint() * a);  // real positive up to roundoff
  const Cplx ld22 = log_det(id + b.adjoint() * b);
  return std::exp(ld12 - 0.5 * (ld11.real() + ld22.real()));
}

}  // namespace opq
