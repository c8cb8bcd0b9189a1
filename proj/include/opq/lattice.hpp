#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

namespace opq {

enum class Boundary { periodic, open };

// Attractive Hubbard wire on a 1-3 dimensional cuboid.
// site_potential stores the product e*V_i directly (energy units of t).
struct LatticeSpec {
  std::vector<int> dims;               // extent per axis, axis 0 = wire axis
  double t = 1.0;                      // hopping
  double U = 0.0;                      // on-site attraction strength (U > 0 attractive)
  double mu = 0.0;                     // chemical potential
  std::vector<double> site_potential;  // e*V_i per site; empty means zero
  double lattice_constant = 1e-9;      // [m], only used by circuit conversions
  std::vector<Boundary> boundary;      // per axis; empty means periodic

  int n_sites() const;
  void validate() const;  // throws std::invalid_argument
};

// One hopping link. Length-2 periodic axes genuinely carry two links between
// the same site pair (hopping accumulates); all longer axes are simple graphs.
struct Bond {
  int a = 0;
  int b = 0;
  int axis = 0;
};

struct LatticeGraph {
  std::vector<int> dims;
  std::vector<Boundary> boundary;
  std::vector<Bond> bonds;

  int n_sites() const;
  int site_index(const std::array<int, 3>& c) const;  // row-major, axis 0 fastest
  std::array<int, 3> site_coords(int site) const;
  int x_of(int site) const { return site_coords(site)[0]; }
};

inline constexpr int kMaxSites = 4096;

LatticeGraph build_lattice(const LatticeSpec& spec);

// Single-particle matrix: h_ij = -t per bond (accumulated), h_ii = -(eV_i + mu).
// Built from symmetric assignments, so bitwise symmetric.
Eigen::MatrixXd hamiltonian_matrix_elements(const LatticeGraph& graph, const LatticeSpec& spec);

std::string boundary_name(Boundary b);

}  // namespace opq
