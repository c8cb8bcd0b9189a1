#include <doctest.h>

#include <algorithm>
#include <set>

#include "opq/lattice.hpp"

using namespace opq;

namespace {

LatticeSpec make_spec(std::vector<int> dims, std::vector<Boundary> bnd) {
  LatticeSpec s;
  s.dims = std::move(dims);
  s.boundary = std::move(bnd);
  s.t = 1.0;
  s.U = 2.0;
  s.mu = -1.0;
  return s;
}

// independent neighbor enumeration: two sites are linked once per coordinate
// pair at unit distance along one axis, with periodic wrap when enabled
int brute_force_bond_count(const LatticeGraph& g) {
  int count = 0;
  const int nd = static_cast<int>(g.dims.size());
  for (int s = 0; s < g.n_sites(); ++s) {
    const auto c = g.site_coords(s);
    for (int ax = 0; ax < nd; ++ax) {
      if (g.dims[ax] < 2) continue;
      auto c2 = c;
      c2[ax] = c[ax] + 1;
      if (c2[ax] == g.dims[ax]) {
        if (g.boundary[ax] != Boundary::periodic) continue;
        c2[ax] = 0;
      }
      ++count;
    }
  }
  return count;
}

}  // namespace

TEST_CASE("bond enumeration on rings and chains") {
  auto ring = build_lattice(make_spec({4}, {Boundary::periodic}));
  CHECK(ring.bonds.size() == 4);
  auto chain = build_lattice(make_spec({4}, {Boundary::open}));
  CHECK(chain.bonds.size() == 3);
  auto single = build_lattice(make_spec({1}, {Boundary::periodic}));
  CHECK(single.bonds.empty());
}

TEST_CASE("length-2 periodic axis keeps both links") {
  auto g = build_lattice(make_spec({2, 2}, {Boundary::periodic, Boundary::periodic}));
  CHECK(g.bonds.size() == 8);

  LatticeSpec spec = make_spec({2, 2}, {Boundary::periodic, Boundary::periodic});
  auto h = hamiltonian_matrix_elements(g, spec);
  CHECK(h(0, 1) == doctest::Approx(-2.0));  // doubled link accumulates
  CHECK(h(0, 3) == doctest::Approx(0.0));   // diagonal neighbors not linked

  auto open2 = build_lattice(make_spec({2}, {Boundary::open}));
  CHECK(open2.bonds.size() == 1);
}

TEST_CASE("bond counts match brute-force neighbor enumeration") {
  const std::vector<std::vector<int>> shapes = {{6}, {5, 3}, {4, 4}, {3, 3, 3}, {4, 1, 3}};
  for (const auto& dims : shapes) {
    for (int mask = 0; mask < (1 << dims.size()); ++mask) {
      std::vector<Boundary> bnd;
      for (size_t ax = 0; ax < dims.size(); ++ax)
        bnd.push_back((mask >> ax) & 1 ? Boundary::periodic : Boundary::open);
      auto g = build_lattice(make_spec(dims, bnd));
      CHECK(static_cast<int>(g.bonds.size()) == brute_force_bond_count(g));
    }
  }
}

TEST_CASE("no duplicate links on axes longer than two") {
  auto g = build_lattice(make_spec({5}, {Boundary::periodic}));
  std::set<std::pair<int, int>> seen;
  for (const auto& b : g.bonds) {
    auto key = std::minmax(b.a, b.b);
    CHECK(!seen.count({key.first, key.second}));
    seen.insert({key.first, key.second});
  }
}

TEST_CASE("site indexing round-trips and is row-major with axis 0 fastest") {
  auto g = build_lattice(make_spec({3, 4}, {Boundary::open, Boundary::open}));
  CHECK(g.site_index({1, 0, 0}) == 1);
  CHECK(g.site_index({0, 1, 0}) == 3);
  for (int s = 0; s < g.n_sites(); ++s) CHECK(g.site_index(g.site_coords(s)) == s);
  CHECK(g.x_of(7) == g.site_coords(7)[0]);
}

TEST_CASE("single-particle matrix carries potential and chemical shift") {
  LatticeSpec spec = make_spec({3}, {Boundary::open});
  spec.site_potential = {0.2, -0.1, 0.4};
  auto g = build_lattice(spec);
  auto h = hamiltonian_matrix_elements(g, spec);
  CHECK(h(0, 0) == doctest::Approx(-(0.2 + spec.mu)));
  CHECK(h(1, 1) == doctest::Approx(-(-0.1 + spec.mu)));
  CHECK(h(0, 1) == doctest::Approx(-spec.t));
  CHECK(h(0, 2) == doctest::Approx(0.0));
  CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);  // bitwise symmetric
}

TEST_CASE("LatticeSpec validation rejects malformed input") {
  CHECK_THROWS_AS(make_spec({}, {}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(make_spec({0}, {Boundary::open}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(make_spec({70, 70}, {Boundary::open, Boundary::open}).validate(),
                  std::invalid_argument);  // above the site cap

  auto s = make_spec({4}, {Boundary::open});
  s.t = 0.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = make_spec({4}, {Boundary::open});
  s.U = -1.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = make_spec({4}, {Boundary::open});
  s.site_potential = {1.0, 2.0};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = make_spec({4}, {Boundary::open, Boundary::open});
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);  // boundary arity
}

TEST_CASE("boundary names") {
  CHECK(boundary_name(Boundary::periodic) == "periodic");
  CHECK(boundary_name(Boundary::open) == "open");
}
