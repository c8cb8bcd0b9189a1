#pragma once

#include <cmath>

namespace opq_test {

// Momentum-space gap equation for the uniform 1D ring,
//   1 = (U/N) sum_k 1 / (2 sqrt(xi_k^2 + Delta^2)),  xi_k = -2 t cos k - mu_eff,
// solved by bisection. mu_eff absorbs the Hartree shift (mu + U n_sigma).
// Deliberately independent of the real-space solver it cross-checks.
inline double bcs_gap_bisection(int n_sites, double t, double U, double mu_eff) {
  const double pi = 3.14159265358979323846;
  auto rhs = [&](double delta) {
    double s = 0.0;
    for (int m = 0; m < n_sites; ++m) {
      const double k = 2.0 * pi * m / n_sites;
      const double xi = -2.0 * t * std::cos(k) - mu_eff;
      s += 1.0 / (2.0 * std::sqrt(xi * xi + delta * delta));
    }
    return U / n_sites * s;
  };

  double lo = 1e-14, hi = U + 4.0 * t;
  if (rhs(lo) < 1.0) return 0.0;  // no nontrivial root
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (rhs(mid) > 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace opq_test
