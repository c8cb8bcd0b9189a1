#pragma once

#include <stdexcept>

namespace opq {

// SI values (CODATA 2018). Configs may override, e.g. to match rounded
// literature parameter sets. Treated as immutable after construction.
struct PhysicalConstants {
  double e = 1.602176634e-19;     // elementary charge [C]
  double hbar = 1.054571817e-34;  // reduced Planck constant [J s]
  double m = 9.1093837015e-31;    // carrier mass [kg]

  void validate() const {
    if (!(e > 0.0) || !(hbar > 0.0) || !(m > 0.0))
      throw std::invalid_argument("PhysicalConstants: e, hbar, m must be strictly positive");
  }
};

}  // namespace opq
