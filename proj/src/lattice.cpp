#include "opq/lattice.hpp"

#include <stdexcept>

namespace opq {

int LatticeSpec::n_sites() const {
  int n = 1;
  for (int d : dims) n *= d;
  return dims.empty() ? 0 : n;
}

void LatticeSpec::validate() const {
  if (dims.empty() || dims.size() > 3)
    throw std::invalid_argument("LatticeSpec: dims must have 1 to 3 axes");
  for (int d : dims)
    if (d < 1) throw std::invalid_argument("LatticeSpec: every axis extent must be >= 1");
  const int n = n_sites();
  if (n > kMaxSites)
    throw std::invalid_argument("LatticeSpec: site count " + std::to_string(n) +
                                " exceeds cap " + std::to_string(kMaxSites));
  if (!(t > 0.0)) throw std::invalid_argument("LatticeSpec: t must be > 0");
  if (U < 0.0) throw std::invalid_argument("LatticeSpec: U must be >= 0 (attractive convention)");
  if (!(lattice_constant > 0.0))
    throw std::invalid_argument("LatticeSpec: lattice_constant must be > 0");
  if (!site_potential.empty() && static_cast<int>(site_potential.size()) != n)
    throw std::invalid_argument("LatticeSpec: site_potential length must equal site count");
  if (!boundary.empty() && boundary.size() != dims.size())
    throw std::invalid_argument("LatticeSpec: boundary needs one entry per axis");
}

int LatticeGraph::n_sites() const {
  int n = 1;
  for (int d : dims) n *= d;
  return dims.empty() ? 0 : n;
}

int LatticeGraph::site_index(const std::array<int, 3>& c) const {
  int idx = 0, stride = 1;
  for (size_t a = 0; a < dims.size(); ++a) {
    idx += c[a] * stride;
    stride *= dims[a];
  }
  return idx;
}

std::array<int, 3> LatticeGraph::site_coords(int site) const {
  std::array<int, 3> c{0, 0, 0};
  for (size_t a = 0; a < dims.size(); ++a) {
    c[a] = site % dims[a];
    site /= dims[a];
  }
  return c;
}

LatticeGraph build_lattice(const LatticeSpec& spec) {
  spec.validate();
  LatticeGraph g;
  g.dims = spec.dims;
  g.boundary = spec.boundary.empty()
                   ? std::vector<Boundary>(spec.dims.size(), Boundary::periodic)
                   : spec.boundary;

  const int n = g.n_sites();
  for (int s = 0; s < n; ++s) {
    const auto c = g.site_coords(s);
    for (size_t a = 0; a < g.dims.size(); ++a) {
      const int len = g.dims[a];
      if (len < 2) continue;  // no self-loops from length-1 periodic axes
      auto cn = c;
      cn[a] = c[a] + 1;
      if (cn[a] == len) {
        if (g.boundary[a] == Boundary::open) continue;
        cn[a] = 0;
      }
      g.bonds.push_back(Bond{s, g.site_index(cn), static_cast<int>(a)});
    }
  }
  return g;
}

Eigen::MatrixXd hamiltonian_matrix_elements(const LatticeGraph& graph, const LatticeSpec& spec) {
  spec.validate();
  const int n = graph.n_sites();
  if (n != spec.n_sites())
    throw std::invalid_argument("hamiltonian_matrix_elements: graph/spec size mismatch");

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (const Bond& b : graph.bonds) {
    const double v = h(b.a, b.b) - spec.t;  // accumulate double links
    h(b.a, b.b) = v;
    h(b.b, b.a) = v;
  }
  for (int i = 0; i < n; ++i) {
    const double ev = spec.site_potential.empty() ? 0.0 : spec.site_potential[i];
    h(i, i) = -(ev + spec.mu);
  }
  return h;
}

std::string boundary_name(Boundary b) {
  return b == Boundary::periodic ? "periodic" : "open";
}

}  // namespace opq
