#pragma once

#include <Eigen/Dense>
#include <vector>

#include "opq/constants.hpp"

namespace opq {

// Everything in this module is strict SI. Model units never leak in here;
// conversions from lattice quantities happen at the call site.
struct ResonatorGeometry {
  double L_x = 0.0;      // wire length [m]
  double L_y = 0.0;      // transverse width [m]
  double L_z_eff = 0.0;  // effective thickness [m]
  double d = 0.0;        // distance to the ground plane [m]
  double epsilon = 0.0;  // dielectric permittivity [F/m]
  double n_volume = 0.0; // carrier density [1/m^3]

  double line_density() const { return n_volume * L_y * L_z_eff; }  // n_x [1/m]
  void validate() const;  // throws std::invalid_argument
};

// Samples on a uniform grid over [0, length): periodic convention (no repeated
// endpoint), or [0, length] inclusive when periodic = false.
struct LineProfile {
  double length = 0.0;
  Eigen::VectorXd values;
  bool periodic = false;

  int samples() const { return static_cast<int>(values.size()); }
  double dx() const;
  void validate() const;
};

// Kinetic inductance per length, l = m / (n_x e^2). No paramagnetic correction;
// density-fluctuation effects are reported separately as a diagnostic ratio.
double inductance_per_length(const PhysicalConstants& pc, double n_x);

// Ground-plane capacitance per length, c = L_y epsilon / (2 d).
double capacitance_per_length(const ResonatorGeometry& g);

// Screened interaction kernel in transverse Fourier space,
// G(k) = (1 - exp(-2|k|d)) / (2 epsilon |k|), with the analytic k -> 0 limit d/epsilon.
double greens_fourier(double k_x, double d, double epsilon);

// Charging energy sum_k |n(k)|^2 G(k) e^2 / (L_y L_x) on the discrete k grid
// k_m = 2 pi m / L_x (periodic extension of the profile; m = 0 handled
// analytically through greens_fourier). Requires a periodic profile.
double capacitive_energy_exact(const LineProfile& n, const ResonatorGeometry& g,
                               const PhysicalConstants& pc);

// Local approximation integral (e n)^2 / (2c) dx by trapezoid on the grid.
double capacitive_energy_local(const LineProfile& n, double c, const PhysicalConstants& pc);

// I(x) = (e hbar n_x / 2m) d(phi)/dx, central differences inside, one-sided ends.
Eigen::VectorXd current_profile(const LineProfile& phi, const PhysicalConstants& pc, double n_x);

// V(x) = -e n(x) / c.
Eigen::VectorXd voltage_profile(const LineProfile& n, double c, const PhysicalConstants& pc);

// phi_tilde(x) = phi(x) - (2e/hbar) * A_int(x), A_int the line integral of the
// vector potential from 0 to x.
Eigen::VectorXd gauge_invariant_phase(const LineProfile& phi, const LineProfile& a_integral,
                                      const PhysicalConstants& pc);

// Q(x) = -e * integral_0^x n dx' (cumulative trapezoid).
Eigen::VectorXd macroscopic_charge(const LineProfile& n, const PhysicalConstants& pc);

// Diagnostic: integral dn (dphi/dx)^2 / (n_mean integral (dphi/dx)^2), the
// relative weight of density fluctuations in the kinetic energy.
double density_fluctuation_ratio(const LineProfile& n, const LineProfile& phi);

struct CircuitParams {
  double n_x = 0.0;
  double l = 0.0;            // [H/m]
  double c = 0.0;            // [F/m]
  double v = 0.0;            // 1/sqrt(l c) [m/s]
  double omega1 = 0.0;       // fundamental [1/s]
  double omega1_microscopic = 0.0;  // same value from the carrier-parameter form
  std::vector<double> omega; // j * omega1, j = 1..j_max
};

// Fundamental from transmission-line parameters, pi / (L_x sqrt(l c)).
double fundamental_from_lc(const ResonatorGeometry& g, const PhysicalConstants& pc);
// Algebraically identical closed form (e pi / L_x) sqrt(2 d n_x / (L_y epsilon m)).
double fundamental_microscopic(const ResonatorGeometry& g, const PhysicalConstants& pc);

CircuitParams mode_frequencies(const ResonatorGeometry& g, const PhysicalConstants& pc, int j_max);

enum class ChainBoundary { open, fixed };  // open = zero-current ends (default)

// Lumped LC ladder reference: n_segments cells of inductance l*dx and node
// capacitance c*dx, ends per boundary choice. Returns the positive mode
// frequencies ascending; converges to j pi / (L_x sqrt(lc)) at order 1/N^2.
std::vector<double> lc_chain_normal_modes(double l, double c, double L_x, int n_segments,
                                          ChainBoundary bc = ChainBoundary::open);

}  // namespace opq
