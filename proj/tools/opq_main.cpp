// Command-line front end: strict-schema JSON configs in, JSON + CSV reports out.
// Exit codes: 0 success, 2 config error, 3 solver non-convergence, 4 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "opq/circuit.hpp"
#include "opq/constants.hpp"
#include "opq/fock_oracle.hpp"
#include "opq/gaussian.hpp"
#include "opq/io.hpp"
#include "opq/lattice.hpp"
#include "opq/meanfield.hpp"
#include "opq/phase_dynamics.hpp"
#include "opq/qubit.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- strict schema helpers -------------------------------------------------

void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(path + ": expected an object");
  for (const auto& item : obj.items()) {
    if (item.key() == "_note") continue;  // ignored everywhere by contract
    if (!allowed.count(item.key()))
      throw ConfigError(path + ": unknown key '" + item.key() + "'");
  }
}

const json& require(const json& obj, const std::string& path, const std::string& key) {
  if (!obj.contains(key)) throw ConfigError(path + ": missing required key '" + key + "'");
  return obj.at(key);
}

double get_num(const json& obj, const std::string& path, const std::string& key) {
  const json& v = require(obj, path, key);
  if (!v.is_number()) throw ConfigError(path + "/" + key + ": expected a number");
  return v.get<double>();
}

double get_num_or(const json& obj, const std::string& path, const std::string& key, double dflt) {
  if (!obj.contains(key)) return dflt;
  return get_num(obj, path, key);
}

long get_int(const json& obj, const std::string& path, const std::string& key) {
  const json& v = require(obj, path, key);
  if (!v.is_number_integer()) throw ConfigError(path + "/" + key + ": expected an integer");
  return v.get<long>();
}

long get_int_or(const json& obj, const std::string& path, const std::string& key, long dflt) {
  if (!obj.contains(key)) return dflt;
  return get_int(obj, path, key);
}

std::string get_str(const json& obj, const std::string& path, const std::string& key) {
  const json& v = require(obj, path, key);
  if (!v.is_string()) throw ConfigError(path + "/" + key + ": expected a string");
  return v.get<std::string>();
}

// ---- config blocks ----------------------------------------------------------

opq::LatticeSpec parse_lattice(const json& j, const std::string& path) {
  check_keys(j, path, {"dims", "t", "U", "mu", "V", "lattice_constant", "boundary"});
  opq::LatticeSpec spec;

  const json& dims = require(j, path, "dims");
  if (!dims.is_array() || dims.empty()) throw ConfigError(path + "/dims: expected an array");
  for (const auto& d : dims) {
    if (!d.is_number_integer()) throw ConfigError(path + "/dims: entries must be integers");
    spec.dims.push_back(d.get<int>());
  }
  spec.t = get_num(j, path, "t");
  spec.U = get_num(j, path, "U");
  spec.mu = get_num(j, path, "mu");
  spec.lattice_constant = get_num_or(j, path, "lattice_constant", 1e-9);
  if (j.contains("V")) {
    const json& v = j.at("V");
    if (!v.is_array()) throw ConfigError(path + "/V: expected an array (e*V_i per site)");
    for (const auto& x : v) {
      if (!x.is_number()) throw ConfigError(path + "/V: entries must be numbers");
      spec.site_potential.push_back(x.get<double>());
    }
  }
  const json& bnd = require(j, path, "boundary");  // always explicit by contract
  if (!bnd.is_array()) throw ConfigError(path + "/boundary: expected an array");
  for (const auto& b : bnd) {
    const std::string s = b.is_string() ? b.get<std::string>() : "";
    if (s == "periodic")
      spec.boundary.push_back(opq::Boundary::periodic);
    else if (s == "open")
      spec.boundary.push_back(opq::Boundary::open);
    else
      throw ConfigError(path + "/boundary: entries must be \"periodic\" or \"open\"");
  }
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return spec;
}

struct SeedSpec {
  double amplitude = 0.1;
  double phase = 0.0;
};

opq::SolverOptions parse_solver(const json& params, const std::string& path, SeedSpec* seed) {
  opq::SolverOptions opt;
  if (!params.contains("solver")) return opt;
  const json& j = params.at("solver");
  check_keys(j, path, {"tolerance", "max_iter", "mixing", "init_amplitude", "init_phase",
                       "amplitude_cap", "verbosity"});
  opt.tolerance = get_num_or(j, path, "tolerance", opt.tolerance);
  opt.max_iter = static_cast<int>(get_int_or(j, path, "max_iter", opt.max_iter));
  opt.mixing = get_num_or(j, path, "mixing", opt.mixing);
  opt.amplitude_cap = get_num_or(j, path, "amplitude_cap", opt.amplitude_cap);
  opt.verbosity = static_cast<int>(get_int_or(j, path, "verbosity", 0));
  if (seed) {
    seed->amplitude = get_num_or(j, path, "init_amplitude", seed->amplitude);
    seed->phase = get_num_or(j, path, "init_phase", seed->phase);
  }
  return opt;
}

opq::ResonatorGeometry parse_geometry(const json& j, const std::string& path) {
  check_keys(j, path, {"L_x", "L_y", "L_z_eff", "d", "epsilon", "n_volume"});
  opq::ResonatorGeometry g;
  g.L_x = get_num(j, path, "L_x");
  g.L_y = get_num(j, path, "L_y");
  g.L_z_eff = get_num(j, path, "L_z_eff");
  g.d = get_num(j, path, "d");
  g.epsilon = get_num(j, path, "epsilon");
  g.n_volume = get_num(j, path, "n_volume");
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return g;
}

opq::PhysicalConstants parse_constants(const json& params, const std::string& path) {
  opq::PhysicalConstants pc;
  if (!params.contains("constants")) return pc;
  const json& j = params.at("constants");
  check_keys(j, path, {"e", "hbar", "m"});
  pc.e = get_num_or(j, path, "e", pc.e);
  pc.hbar = get_num_or(j, path, "hbar", pc.hbar);
  pc.m = get_num_or(j, path, "m", pc.m);
  try {
    pc.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return pc;
}

opq::PhaseProfile parse_phase_profile(const json& j, const std::string& path, int nx) {
  check_keys(j, path, {"type", "value", "per_bond", "amplitude", "wavenumber", "values"});
  const std::string type = get_str(j, path, "type");
  if (type == "uniform") return opq::uniform_profile(nx, get_num(j, path, "value"));
  if (type == "triangle") return opq::triangle_profile(nx, get_num(j, path, "per_bond"));
  if (type == "linear") return opq::linear_profile(nx, get_num(j, path, "per_bond"));
  if (type == "sine")
    return opq::sine_profile(nx, get_num(j, path, "amplitude"),
                             static_cast<int>(get_int(j, path, "wavenumber")));
  if (type == "values") {
    const json& v = require(j, path, "values");
    if (!v.is_array() || static_cast<int>(v.size()) != nx)
      throw ConfigError(path + "/values: expected an array of wire-axis length");
    Eigen::VectorXd vals(nx);
    for (int i = 0; i < nx; ++i) {
      if (!v[i].is_number()) throw ConfigError(path + "/values: entries must be numbers");
      vals(i) = v[i].get<double>();
    }
    return {vals};
  }
  throw ConfigError(path + "/type: expected uniform|triangle|linear|sine|values");
}

Eigen::VectorXd sample_line_shape(const json& j, const std::string& path, int samples,
                                  double length, bool periodic) {
  check_keys(j, path, {"type", "value", "offset", "gradient", "baseline", "amplitude", "center",
                       "sigma", "values"});
  const std::string type = get_str(j, path, "type");
  Eigen::VectorXd v(samples);
  const double dx = periodic ? length / samples : length / (samples - 1);
  for (int i = 0; i < samples; ++i) {
    const double x = i * dx;
    if (type == "constant") {
      v(i) = get_num(j, path, "value");
    } else if (type == "linear") {
      v(i) = get_num_or(j, path, "offset", 0.0) + get_num(j, path, "gradient") * x;
    } else if (type == "gaussian") {
      const double s = get_num(j, path, "sigma");
      if (!(s > 0.0)) throw ConfigError(path + "/sigma: must be > 0");
      const double u = (x - get_num(j, path, "center")) / s;
      v(i) = get_num_or(j, path, "baseline", 0.0) +
             get_num(j, path, "amplitude") * std::exp(-0.5 * u * u);
    } else if (type == "values") {
      const json& raw = require(j, path, "values");
      if (!raw.is_array() || static_cast<int>(raw.size()) != samples)
        throw ConfigError(path + "/values: expected an array of length 'samples'");
      for (int k = 0; k < samples; ++k) {
        if (!raw[k].is_number()) throw ConfigError(path + "/values: entries must be numbers");
        v(k) = raw[k].get<double>();
      }
      return v;
    } else {
      throw ConfigError(path + "/type: expected constant|linear|gaussian|values");
    }
  }
  return v;
}

// ---- deterministic RNG (platform-stable uniforms) ---------------------------

struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed ? seed : 0x9e3779b97f4a7c15ull) {}
  std::uint64_t next() {  // splitmix64
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform(double lo, double hi) {
    const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
};

// ---- command context ---------------------------------------------------------

struct RunContext {
  json config;
  json params;
  std::string command;
  std::string hash;
  fs::path out_dir;
  std::uint64_t seed = 0;

  fs::path out(const std::string& name) const { return out_dir / name; }
  json header() const {
    json h = opq::io::report_header(command, hash);
    h["seed"] = seed;
    return h;
  }
};

void merge_header(json& target, const RunContext& ctx) {
  target.update(ctx.header());
}

// ---- commands ----------------------------------------------------------------

int cmd_solve_groundstate(const RunContext& ctx) {
  check_keys(ctx.params, "params", {"lattice", "solver"});
  const auto spec = parse_lattice(require(ctx.params, "params", "lattice"), "params/lattice");
  SeedSpec seed;
  const auto opt = parse_solver(ctx.params, "params/solver", &seed);

  const auto sol = opq::solve_self_consistent(
      spec, opq::uniform_seed(spec.n_sites(), seed.amplitude, seed.phase), opt);

  json j = opq::io::to_json(sol);
  merge_header(j, ctx);
  opq::io::write_json(ctx.out("solution.json").string(), j);

  opq::io::CsvWriter csv(ctx.command, ctx.hash,
                         {"site", "gap_abs", "gap_arg", "density_up", "density_down"});
  for (int i = 0; i < spec.n_sites(); ++i)
    csv.add_row({static_cast<double>(i), std::abs(sol.gap(i)), std::arg(sol.gap(i)),
                 sol.n_up(i), sol.n_down(i)});
  csv.write(ctx.out("gap.csv").string());

  if (!sol.converged) {
    std::cerr << "solver did not converge: residual " << sol.residual_norm << " after "
              << sol.iterations << " iterations (diagnostics written)\n";
    return 3;
  }
  return 0;
}

int cmd_phase_stiffness(const RunContext& ctx) {
  check_keys(ctx.params, "params", {"lattice", "solver", "profile", "halvings"});
  const auto spec = parse_lattice(require(ctx.params, "params", "lattice"), "params/lattice");
  SeedSpec seed;
  const auto opt = parse_solver(ctx.params, "params/solver", &seed);
  const long halvings = get_int_or(ctx.params, "params", "halvings", 3);
  if (halvings < 0 || halvings > 20) throw ConfigError("params/halvings: expected 0..20");

  const auto graph = opq::build_lattice(spec);
  const auto sol = opq::solve_self_consistent(
      spec, opq::uniform_seed(spec.n_sites(), seed.amplitude, seed.phase), opt);
  if (!sol.converged) {
    std::cerr << "solver did not converge: residual " << sol.residual_norm << "\n";
    return 3;
  }

  const auto base =
      parse_phase_profile(require(ctx.params, "params", "profile"), "params/profile",
                          graph.dims[0]);
  const auto report = opq::stiffness_report(sol, graph, spec.t, base);

  json j = opq::io::to_json(report);
  json table = json::array();
  for (long h = 0; h <= halvings; ++h) {
    const double scale = std::pow(0.5, static_cast<double>(h));
    opq::PhaseProfile p{base.values * scale};
    const double ex = opq::twist_energy_exact(sol, graph, spec.t, p);
    const double qd = opq::twist_energy_quadratic(sol, graph, spec.t, p);
    table.push_back({{"scale", scale},
                     {"exact", ex},
                     {"quadratic", qd},
                     {"quartic_residual", ex - qd}});
  }
  j["halving_table"] = table;
  j["solver_iterations"] = sol.iterations;
  merge_header(j, ctx);
  opq::io::write_json(ctx.out("stiffness.json").string(), j);

  opq::io::CsvWriter csv(ctx.command, ctx.hash,
                         {"site_a", "site_b", "rho", "dphi", "energy"});
  for (const auto& b : report.bonds)
    csv.add_row({static_cast<double>(b.site_a), static_cast<double>(b.site_b), b.rho, b.dphi,
                 b.energy});
  csv.write(ctx.out("bonds.csv").string());
  return 0;
}

int cmd_overlap_decay(const RunContext& ctx) {
  check_keys(ctx.params, "params",
             {"lattice", "solver", "delta_phi", "profile_a", "profile_b", "modes"});
  const auto spec = parse_lattice(require(ctx.params, "params", "lattice"), "params/lattice");
  SeedSpec seed;
  const auto opt = parse_solver(ctx.params, "params/solver", &seed);
  const int modes = static_cast<int>(get_int(ctx.params, "params", "modes"));

  const auto graph = opq::build_lattice(spec);
  const int nx = graph.dims[0];

  opq::PhaseProfile pa = opq::uniform_profile(nx, 0.0);
  opq::PhaseProfile pb = opq::uniform_profile(nx, 0.0);
  const bool has_offset = ctx.params.contains("delta_phi");
  const bool has_pair = ctx.params.contains("profile_a") || ctx.params.contains("profile_b");
  if (has_offset == has_pair)
    throw ConfigError("params: provide either delta_phi or profile_a/profile_b");
  if (has_offset) {
    pb = opq::uniform_profile(nx, get_num(ctx.params, "params", "delta_phi"));
  } else {
    pa = parse_phase_profile(require(ctx.params, "params", "profile_a"), "params/profile_a", nx);
    pb = parse_phase_profile(require(ctx.params, "params", "profile_b"), "params/profile_b", nx);
  }

  const auto sol = opq::solve_self_consistent(
      spec, opq::uniform_seed(spec.n_sites(), seed.amplitude, seed.phase), opt);
  if (!sol.converged) {
    std::cerr << "solver did not converge: residual " << sol.residual_norm << "\n";
    return 3;
  }

  const auto curve = opq::overlap_decay({sol.pairing.amplitude}, pa, pb, modes);

  json j = opq::io::to_json(curve);
  j["solver_iterations"] = sol.iterations;
  merge_header(j, ctx);
  opq::io::write_json(ctx.out("overlap.json").string(), j);

  opq::io::CsvWriter csv(ctx.command, ctx.hash, {"M", "abs_overlap", "log10_abs_overlap"});
  for (int m = 0; m < modes; ++m)
    csv.add_row({static_cast<double>(m + 1), curve.abs_overlap(m), curve.log10_abs(m)});
  csv.write(ctx.out("overlap.csv").string());
  return 0;
}

int cmd_circuit_params(const RunContext& ctx) {
  check_keys(ctx.params, "params", {"geometry", "constants", "j_max", "profiles"});
  const auto geom = parse_geometry(require(ctx.params, "params", "geometry"), "params/geometry");
  const auto pc = parse_constants(ctx.params, "params/constants");
  const int j_max = static_cast<int>(get_int_or(ctx.params, "params", "j_max", 5));

  const auto cp = opq::mode_frequencies(geom, pc, j_max);
  json j = opq::io::to_json(cp);

  if (ctx.params.contains("profiles")) {
    const json& pj = ctx.params.at("profiles");
    check_keys(pj, "params/profiles", {"samples", "periodic", "phi", "n", "a_integral"});
    const int samples = static_cast<int>(get_int(pj, "params/profiles", "samples"));
    if (samples < 2 || samples > 1 << 20)
      throw ConfigError("params/profiles/samples: expected 2..1048576");
    const bool periodic = pj.contains("periodic") && pj.at("periodic").is_boolean()
                              ? pj.at("periodic").get<bool>()
                              : false;

    opq::LineProfile phi{geom.L_x,
                         sample_line_shape(require(pj, "params/profiles", "phi"),
                                           "params/profiles/phi", samples, geom.L_x, periodic),
                         periodic};
    opq::LineProfile den{geom.L_x,
                         sample_line_shape(require(pj, "params/profiles", "n"),
                                           "params/profiles/n", samples, geom.L_x, periodic),
                         periodic};

    const auto current = opq::current_profile(phi, pc, cp.n_x);
    const auto voltage = opq::voltage_profile(den, cp.c, pc);
    const auto charge = opq::macroscopic_charge(den, pc);
    j["density_fluctuation_ratio"] = opq::density_fluctuation_ratio(den, phi);

    std::vector<std::string> cols = {"x", "phi", "n", "current", "voltage", "charge"};
    Eigen::VectorXd gauge;
    if (pj.contains("a_integral")) {
      opq::LineProfile ai{geom.L_x,
                          sample_line_shape(pj.at("a_integral"), "params/profiles/a_integral",
                                            samples, geom.L_x, periodic),
                          periodic};
      gauge = opq::gauge_invariant_phase(phi, ai, pc);
      cols.push_back("phi_gauge_invariant");
    }
    opq::io::CsvWriter csv(ctx.command, ctx.hash, cols);
    const double dx = phi.dx();
    for (int i = 0; i < samples; ++i) {
      std::vector<double> row = {i * dx,      phi.values(i), den.values(i),
                                 current(i),  voltage(i),    charge(i)};
      if (gauge.size()) row.push_back(gauge(i));
      csv.add_row(row);
    }
    csv.write(ctx.out("profiles.csv").string());
  }

  merge_header(j, ctx);
  opq::io::write_json(ctx.out("circuit.json").string(), j);
  return 0;
}

int cmd_capacitance_check(const RunContext& ctx) {
  check_keys(ctx.params, "params",
             {"geometry", "constants", "sigma_over_d", "samples", "domain_sigmas", "amplitude"});
  const auto geom = parse_geometry(require(ctx.params, "params", "geometry"), "params/geometry");
  const auto pc = parse_constants(ctx.params, "params/constants");
  const int samples = static_cast<int>(get_int_or(ctx.params, "params", "samples", 4096));
  if (samples < 16 || samples > 65536) throw ConfigError("params/samples: expected 16..65536");
  const double span = get_num_or(ctx.params, "params", "domain_sigmas", 12.0);
  if (!(span >= 6.0)) throw ConfigError("params/domain_sigmas: expected >= 6");
  const double amp = get_num_or(ctx.params, "params", "amplitude", 1.0);

  const json& sweep = require(ctx.params, "params", "sigma_over_d");
  if (!sweep.is_array() || sweep.empty())
    throw ConfigError("params/sigma_over_d: expected a non-empty array");

  const double c = opq::capacitance_per_length(geom);

  opq::io::CsvWriter csv(ctx.command, ctx.hash,
                         {"sigma_over_d", "exact", "local", "rel_error"});
  std::vector<double> log_x, log_err;
  for (const auto& sv : sweep) {
    if (!sv.is_number()) throw ConfigError("params/sigma_over_d: entries must be numbers");
    const double sod = sv.get<double>();
    if (!(sod > 0.0)) throw ConfigError("params/sigma_over_d: entries must be > 0");
    const double sigma = sod * geom.d;
    const double lx = span * sigma;

    Eigen::VectorXd v(samples);
    const double dx = lx / samples;
    for (int i = 0; i < samples; ++i) {
      const double u = (i * dx - 0.5 * lx) / sigma;
      v(i) = amp * std::exp(-0.5 * u * u);
    }
    opq::ResonatorGeometry g = geom;
    g.L_x = lx;
    const opq::LineProfile prof{lx, v, true};
    const double exact = opq::capacitive_energy_exact(prof, g, pc);
    const double local = opq::capacitive_energy_local(prof, c, pc);
    const double rel = std::abs(exact - local) / local;
    csv.add_row({sod, exact, local, rel});
    log_x.push_back(std::log(1.0 / sod));
    log_err.push_back(std::log(rel));
  }
  csv.write(ctx.out("capacitance.csv").string());

  // least-squares slope of log(err) vs log(d/sigma)
  double slope = 0.0;
  if (log_x.size() > 1) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(log_x.size());
    for (size_t i = 0; i < log_x.size(); ++i) {
      sx += log_x[i];
      sy += log_err[i];
      sxx += log_x[i] * log_x[i];
      sxy += log_x[i] * log_err[i];
    }
    slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }

  // constant profile: the local form is exact
  opq::ResonatorGeometry gc = geom;
  const opq::LineProfile flat{geom.L_x, Eigen::VectorXd::Constant(256, amp), true};
  const double e1 = opq::capacitive_energy_exact(flat, gc, pc);
  const double e2 = opq::capacitive_energy_local(flat, c, pc);

  json j;
  j["loglog_slope"] = slope;
  j["constant_profile_rel_deviation"] = std::abs(e1 - e2) / e2;
  j["capacitance_per_length"] = c;
  merge_header(j, ctx);
  opq::io::write_json(ctx.out("capacitance.json").string(), j);
  return 0;
}

int cmd_modes(const RunContext& ctx) {
  check_keys(ctx.params, "params",
             {"geometry", "constants", "j_max", "chain_segments", "chain_boundary"});
  const auto geom = parse_geometry(require(ctx.params, "params", "geometry"), "params/geometry");
  const auto pc = parse_constants(ctx.params, "params/constants");
  const int j_max = static_cast<int>(get_int_or(ctx.params, "params", "j_max", 5));

  const auto cp = opq::mode_frequencies(geom, pc, j_max);
  json j = opq::io::to_json(cp);

  opq::ChainBoundary bc = opq::ChainBoundary::open;
  if (ctx.params.contains("chain_boundary")) {
    const std::string s = get_str(ctx.params, "params", "chain_boundary");
    if (s == "open")
      bc = opq::ChainBoundary::open;
    else if (s == "fixed")
      bc = opq::ChainBoundary::fixed;  // experimental
    else
      throw ConfigError("params/chain_boundary: expected \"open\" or \"fixed\"");
  }

  if (ctx.params.contains("chain_segments")) {
    const json& segs = ctx.params.at("chain_segments");
    if (!segs.is_array() || segs.empty())
      throw ConfigError("params/chain_segments: expected a non-empty array of integers");
    json chain = json::array();
    std::vector<std::vector<double>> firsts;
    std::vector<long> sizes;
    for (const auto& s : segs) {
      if (!s.is_number_integer())
        throw ConfigError("params/chain_segments: entries must be integers");
      const long n = s.get<long>();
      if (n < 2 || n > 16384) throw ConfigError("params/chain_segments: expected 2..16384");
      const auto w = opq::lc_chain_normal_modes(cp.l, cp.c, geom.L_x, static_cast<int>(n), bc);
      const int keep = std::min<std::size_t>(4, w.size());
      std::vector<double> head(w.begin(), w.begin() + keep);
      chain.push_back({{"segments", n}, {"omega", head}});
      firsts.push_back(head);
      sizes.push_back(n);
    }
    json orders = json::array();
    for (size_t i = 0; i + 1 < firsts.size(); ++i) {
      json row = json::array();
      for (size_t k = 0; k < std::min(firsts[i].size(), firsts[i + 1].size()); ++k) {
        const double e0 = std::abs(firsts[i][k] - (k + 1) * cp.omega1);
        const double e1 = std::abs(firsts[i + 1][k] - (k + 1) * cp.omega1);
        const double ratio = std::log(static_cast<double>(sizes[i + 1]) / sizes[i]);
        row.push_back(e1 > 0.0 ? std::log(e0 / e1) / ratio : 0.0);
      }
      orders.push_back(row);
    }
    j["chain"] = chain;
    j["chain_convergence_order"] = orders;
  }

  merge_header(j, ctx);
  opq::io::write_json(ctx.out("modes.json").string(), j);

  opq::io::CsvWriter csv(ctx.command, ctx.hash, {"j", "omega"});
  for (size_t k = 0; k < cp.omega.size(); ++k)
    csv.add_row({static_cast<double>(k + 1), cp.omega[k]});
  csv.write(ctx.out("modes.csv").string());
  return 0;
}

int cmd_qubit_spectrum(const RunContext& ctx) {
  check_keys(ctx.params, "params", {"E_C", "E_J", "n_cut", "n_offset", "n_levels"});
  opq::JunctionSpec spec;
  spec.E_C = get_num(ctx.params, "params", "E_C");
  spec.E_J = get_num(ctx.params, "params", "E_J");
  spec.n_cut = static_cast<int>(get_int(ctx.params, "params", "n_cut"));
  spec.n_offset = get_num_or(ctx.params, "params", "n_offset", 0.0);
  const int n_levels = static_cast<int>(get_int_or(ctx.params, "params", "n_levels", 6));

  const auto sp = opq::cpb_spectrum(spec, n_levels);
  json j = opq::io::to_json(sp);
  merge_header(j, ctx);
  opq::io::write_json(ctx.out("qubit.json").string(), j);

  opq::io::CsvWriter csv(ctx.command, ctx.hash, {"level", "energy"});
  for (size_t k = 0; k < sp.levels.size(); ++k)
    csv.add_row({static_cast<double>(k), sp.levels[k]});
  csv.write(ctx.out("qubit.csv").string());
  return 0;
}

int cmd_verify_oracles(const RunContext& ctx) {
  check_keys(ctx.params, "params", {"trials", "max_sites", "tolerance"});
  const long trials = get_int_or(ctx.params, "params", "trials", 200);
  const long max_sites = get_int_or(ctx.params, "params", "max_sites", 3);
  const double tol = get_num_or(ctx.params, "params", "tolerance", 1e-10);
  if (trials < 1 || trials > 100000) throw ConfigError("params/trials: expected 1..100000");
  if (max_sites < 1 || max_sites > 4) throw ConfigError("params/max_sites: expected 1..4");

  const auto dev = opq::oracle_comparison_suite(static_cast<int>(trials),
                                                static_cast<int>(max_sites), ctx.seed);
  json j;
  j["trials"] = trials;
  j["max_sites"] = max_sites;
  j["tolerance"] = tol;
  j["max_deviation_pair"] = dev.pair;
  j["max_deviation_density"] = dev.density;
  j["max_deviation_one_body"] = dev.one_body;
  j["max_deviation_overlap"] = dev.overlap;
  j["max_deviation_energy"] = dev.energy;
  j["max_deviation"] = dev.max();
  j["pass"] = dev.max() <= tol;
  merge_header(j, ctx);
  opq::io::write_json(ctx.out("oracles.json").string(), j);

  if (dev.max() > tol) {
    std::cerr << "oracle comparison failed: max deviation " << dev.max() << " > " << tol << "\n";
    return 4;
  }
  return 0;
}

// ---- schema ------------------------------------------------------------------

const std::set<std::string> kCommands = {
    "solve-groundstate", "phase-stiffness", "overlap-decay",    "circuit-params",
    "capacitance-check", "modes",           "qubit-spectrum",   "verify-oracles"};

json schema_for(const std::string& command) {
  json lattice = {
      {"dims", "array of 1-3 integers, axis 0 is the wire axis (required)"},
      {"t", "number > 0, hopping; sets the energy unit (required)"},
      {"U", "number >= 0, on-site attraction (required)"},
      {"mu", "number, chemical potential (required)"},
      {"V", "optional array of e*V_i site energies, default all zero"},
      {"lattice_constant", "optional number [m], default 1e-9; circuit conversions only"},
      {"boundary", "array of \"periodic\"|\"open\", one per axis (required, always explicit)"}};
  json solver = {
      {"tolerance", "optional number, default 1e-8 (units of t)"},
      {"max_iter", "optional integer, default 2000"},
      {"mixing", "optional number in (0,1], default 0.5"},
      {"init_amplitude", "optional number, default 0.1 (diagonal seed)"},
      {"init_phase", "optional number, default 0.0 (global pair phase)"},
      {"amplitude_cap", "optional number, default 1e4 (normal-branch clamp)"},
      {"verbosity", "optional integer, default 0; >= 2 logs every iteration"}};
  json geometry = {{"L_x", "wire length [m] (required)"},
                   {"L_y", "transverse width [m] (required)"},
                   {"L_z_eff", "effective thickness [m] (required)"},
                   {"d", "ground-plane distance [m] (required)"},
                   {"epsilon", "dielectric permittivity [F/m] (required)"},
                   {"n_volume", "carrier density [1/m^3] (required)"}};
  json constants = {{"e", "optional, default 1.602176634e-19 C"},
                    {"hbar", "optional, default 1.054571817e-34 J s"},
                    {"m", "optional, default 9.1093837015e-31 kg"}};
  json phase_profile = {
      {"type", "uniform|triangle|linear|sine|values (required)"},
      {"value", "uniform only: the constant phase"},
      {"per_bond", "triangle/linear: phase step per bond [rad]"},
      {"amplitude", "sine only"},
      {"wavenumber", "sine only: integer harmonics of the ring"},
      {"values", "values only: explicit array of wire-axis length"}};

  json s;
  s["command"] = command;
  json top = {{"command", "\"" + command + "\" (required)"},
              {"params", "object, see params below (required)"},
              {"seed", "optional integer >= 0, default 0; --seed overrides"},
              {"output_dir", "optional string, default '.'; --output-dir overrides"},
              {"_note", "ignored everywhere; any other unknown key is rejected"}};
  s["config"] = top;

  if (command == "solve-groundstate") {
    s["params"] = {{"lattice", lattice}, {"solver", solver}};
    s["outputs"] = {"solution.json", "gap.csv"};
  } else if (command == "phase-stiffness") {
    s["params"] = {{"lattice", lattice},
                   {"solver", solver},
                   {"profile", phase_profile},
                   {"halvings", "optional integer 0..20, default 3 (quartic-scaling table)"}};
    s["outputs"] = {"stiffness.json", "bonds.csv"};
  } else if (command == "overlap-decay") {
    s["params"] = {{"lattice", lattice},
                   {"solver", solver},
                   {"delta_phi", "uniform pair-phase offset [rad]; mutually exclusive with profiles"},
                   {"profile_a", phase_profile},
                   {"profile_b", phase_profile},
                   {"modes", "integer >= 1: number of transverse modes M (required)"}};
    s["outputs"] = {"overlap.json", "overlap.csv"};
  } else if (command == "circuit-params") {
    s["params"] = {{"geometry", geometry},
                   {"constants", constants},
                   {"j_max", "optional integer >= 1, default 5"},
                   {"profiles",
                    {{"samples", "integer >= 2 (required inside profiles)"},
                     {"periodic", "optional bool, default false"},
                     {"phi", "line shape: constant|linear|gaussian|values"},
                     {"n", "line shape: constant|linear|gaussian|values"},
                     {"a_integral", "optional line shape, enables the gauge-invariant column"}}}};
    s["outputs"] = {"circuit.json", "profiles.csv (when profiles given)"};
  } else if (command == "capacitance-check") {
    s["params"] = {{"geometry", geometry},
                   {"constants", constants},
                   {"sigma_over_d", "array of numbers > 0 (required)"},
                   {"samples", "optional integer 16..65536, default 4096"},
                   {"domain_sigmas", "optional number >= 6, default 12 (periodic domain size)"},
                   {"amplitude", "optional number, default 1.0 (line-density scale)"}};
    s["outputs"] = {"capacitance.json", "capacitance.csv"};
  } else if (command == "modes") {
    s["params"] = {{"geometry", geometry},
                   {"constants", constants},
                   {"j_max", "optional integer >= 1, default 5"},
                   {"chain_segments", "optional array of integers 2..16384 (LC-ladder reference)"},
                   {"chain_boundary",
                    "optional \"open\" (zero-current ends, default) or \"fixed\" (experimental)"}};
    s["outputs"] = {"modes.json", "modes.csv"};
  } else if (command == "qubit-spectrum") {
    s["params"] = {
        {"E_C", "charging energy for integer charge transfers (required); "
                "for a per-Cooper-pair convention rescale E_C -> 4 E_C"},
        {"E_J", "junction coupling (required); spectrum invariant under sign flip"},
        {"n_cut", "integer >= 5: charge basis spans [-n_cut, n_cut] (required)"},
        {"n_offset", "optional number, default 0.0"},
        {"n_levels", "optional integer >= 1, default 6"}};
    s["outputs"] = {"qubit.json", "qubit.csv"};
  } else if (command == "verify-oracles") {
    s["params"] = {{"trials", "optional integer 1..100000, default 200"},
                   {"max_sites", "optional integer 1..4, default 3"},
                   {"tolerance", "optional number, default 1e-10"}};
    s["outputs"] = {"oracles.json"};
  } else {
    throw ConfigError("unknown command '" + command + "'");
  }
  return s;
}

// ---- run dispatcher -----------------------------------------------------------

int run_config(const std::string& config_path, const std::string& cli_out_dir, long cli_seed) {
  std::ifstream f(config_path);
  if (!f) throw ConfigError("cannot open config file: " + config_path);
  json config;
  try {
    config = json::parse(f);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  check_keys(config, "config", {"command", "params", "seed", "output_dir"});
  RunContext ctx;
  ctx.command = get_str(config, "config", "command");
  if (!kCommands.count(ctx.command))
    throw ConfigError("config/command: unknown command '" + ctx.command + "'");
  ctx.params = require(config, "config", "params");
  if (!ctx.params.is_object()) throw ConfigError("config/params: expected an object");
  ctx.config = config;
  ctx.hash = opq::io::config_hash(config);

  long seed = get_int_or(config, "config", "seed", 0);
  if (cli_seed >= 0) seed = cli_seed;
  if (seed < 0) throw ConfigError("config/seed: expected >= 0");
  ctx.seed = static_cast<std::uint64_t>(seed);

  std::string out_dir = ".";
  if (config.contains("output_dir")) out_dir = get_str(config, "config", "output_dir");
  if (!cli_out_dir.empty()) out_dir = cli_out_dir;
  ctx.out_dir = out_dir;
  std::error_code ec;
  fs::create_directories(ctx.out_dir, ec);
  if (ec) throw ConfigError("cannot create output dir '" + out_dir + "': " + ec.message());
  {  // writability probe; removed immediately
    const auto probe = ctx.out_dir / ".opq_write_probe";
    std::ofstream p(probe);
    if (!p) throw ConfigError("output dir not writable: " + out_dir);
    p.close();
    fs::remove(probe, ec);
  }

  if (ctx.command == "solve-groundstate") return cmd_solve_groundstate(ctx);
  if (ctx.command == "phase-stiffness") return cmd_phase_stiffness(ctx);
  if (ctx.command == "overlap-decay") return cmd_overlap_decay(ctx);
  if (ctx.command == "circuit-params") return cmd_circuit_params(ctx);
  if (ctx.command == "capacitance-check") return cmd_capacitance_check(ctx);
  if (ctx.command == "modes") return cmd_modes(ctx);
  if (ctx.command == "qubit-spectrum") return cmd_qubit_spectrum(ctx);
  return cmd_verify_oracles(ctx);
}

}  // namespace

int main(int argc, char** argv) {
  // OPQ_THREADS caps Eigen's internal parallelism; 0 or unset = automatic.
  if (const char* env = std::getenv("OPQ_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || n < 0) {
      std::cerr << "config error: OPQ_THREADS must be a non-negative integer\n";
      return 2;
    }
    if (n > 0) Eigen::setNbThreads(static_cast<int>(n));
  }

  CLI::App app{"attractive-Hubbard wire toolkit: mean-field ground states, phase "
               "stiffness, overlap decay, circuit extraction, junction spectra"};
  app.require_subcommand(1);

  std::string config_path, out_dir, schema_cmd;
  long seed = -1;

  auto* run = app.add_subcommand("run", "execute a JSON config");
  run->add_option("config", config_path, "path to the config file")->required();
  run->add_option("--output-dir", out_dir, "override the config's output directory");
  run->add_option("--seed", seed, "override the config's seed");

  auto* schema = app.add_subcommand("schema", "print the config schema for a command");
  schema->add_option("command", schema_cmd, "command name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (schema->parsed()) {
      std::cout << schema_for(schema_cmd).dump(2) << "\n";
      return 0;
    }
    return run_config(config_path, out_dir, seed);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  }
}
