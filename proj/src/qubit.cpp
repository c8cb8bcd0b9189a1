#include "opq/qubit.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace opq {

namespace {

// Number of eigenvalues of the symmetric tridiagonal (diag, sub) strictly
// below x, by the Sturm sequence of leading-minor pivots.
int sturm_count(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub, double x) {
  int count = 0;
  double q = 1.0;
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    const double off = i > 0 ? sub(i - 1) * sub(i - 1) : 0.0;
    q = (diag(i) - x) - off / q;
    if (q <= 0.0) {
      ++count;
      if (q == 0.0) q = -1e-300;  // keep the next pivot finite
    }
  }
  return count;
}

// k-th (ascending, 0-based) eigenvalue by bisection on the Sturm count.
// Unconditionally convergent, which the shifted-QL iteration is not for the
// strongly graded charge matrices produced by large n_cut.
double kth_eigenvalue(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub, int k,
                      double lo, double hi) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket is one ulp wide
    if (sturm_count(diag, sub, mid) > k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> charge_basis_levels(const JunctionSpec& s, int n_cut, int n_levels) {
  const int dim = 2 * n_cut + 1;
  Eigen::VectorXd diag(dim);
  for (int i = 0; i < dim; ++i) {
    const double n = static_cast<double>(i - n_cut) - s.n_offset;
    diag(i) = s.E_C * n * n;
  }
  const Eigen::VectorXd sub = Eigen::VectorXd::Constant(dim - 1, 0.5 * s.E_J);

  // Gershgorin bracket for the whole spectrum
  double lo = diag(0), hi = diag(0);
  for (int i = 0; i < dim; ++i) {
    const double r = (i > 0 ? std::abs(sub(i - 1)) : 0.0) +
                     (i + 1 < dim ? std::abs(sub(i)) : 0.0);
    lo = std::min(lo, diag(i) - r);
    hi = std::max(hi, diag(i) + r);
  }

  std::vector<double> out(n_levels);
  for (int k = 0; k < n_levels; ++k) out[k] = kth_eigenvalue(diag, sub, k, lo, hi);
  return out;
}

}  // namespace

CpbSpectrum cpb_spectrum(const JunctionSpec& spec, int n_levels) {
  if (!(spec.E_C > 0.0)) throw std::invalid_argument("cpb_spectrum: E_C must be > 0");
  if (spec.n_cut < 5) throw std::invalid_argument("cpb_spectrum: n_cut must be >= 5");
  if (n_levels < 1) throw std::invalid_argument("cpb_spectrum: n_levels must be >= 1");
  if (n_levels > 2 * spec.n_cut + 1)
    throw std::invalid_argument("cpb_spectrum: n_levels exceeds basis dimension");
  if (!std::isfinite(spec.E_J) || !std::isfinite(spec.n_offset))
    throw std::invalid_argument("cpb_spectrum: E_J and n_offset must be finite");

  CpbSpectrum r;
  r.levels = charge_basis_levels(spec, spec.n_cut, n_levels);
  const auto doubled = charge_basis_levels(spec, 2 * spec.n_cut, n_levels);
  for (int i = 0; i < n_levels; ++i)
    r.truncation_shift = std::max(r.truncation_shift, std::abs(r.levels[i] - doubled[i]));
  r.truncation_converged = r.truncation_shift < 1e-10 * spec.E_C;
  return r;
}

}  // namespace opq
