#pragma once

#include <vector>

namespace opq {

// Charge-basis junction Hamiltonian: diagonal E_C (n - n_offset)^2 for integer
// charge-transfer number n in [-n_cut, n_cut], off-diagonal E_J/2 (the cosine
// coupling taken with its bare positive sign; the spectrum is invariant under
// E_J -> -E_J). Energies in the units of E_C and E_J supplied.
struct JunctionSpec {
  double E_C = 1.0;
  double E_J = 0.0;
  int n_cut = 30;        // >= 5
  double n_offset = 0.0;
};

struct CpbSpectrum {
  std::vector<double> levels;        // ascending
  bool truncation_converged = false; // doubling n_cut moves levels < 1e-10 E_C
  double truncation_shift = 0.0;     // max level change under doubling
};

// Lowest n_levels eigenvalues with a truncation-convergence check.
CpbSpectrum cpb_spectrum(const JunctionSpec& spec, int n_levels);

}  // namespace opq
