// End-to-end acceptance gate. Each numbered check prints exactly one
// [PASS]/[FAIL] line; the process exits nonzero if any check fails.
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "opq/circuit.hpp"
#include "opq/fock_oracle.hpp"
#include "opq/io.hpp"
#include "opq/lattice.hpp"
#include "opq/meanfield.hpp"
#include "opq/phase_dynamics.hpp"
#include "opq/qubit.hpp"
#include "support/bcs_gap_oracle.hpp"

namespace fs = std::filesystem;

namespace {

struct Check {
  bool ok = true;
  std::string why;
  std::string note;
  void expect(bool cond, const std::string& msg) {
    if (!cond && ok) {
      ok = false;
      why = msg;
    }
  }
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

int g_failures = 0;

void run_check(const std::string& label, double time_limit_s,
               const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (time_limit_s > 0.0 && secs >= time_limit_s)
    c.expect(false, "took " + sci(secs) + " s, limit " + sci(time_limit_s) + " s");
  if (!c.ok) ++g_failures;
  std::printf("[%s] %s: %s [%.2f s]\n", c.ok ? "PASS" : "FAIL", label.c_str(),
              c.ok ? c.note.c_str() : c.why.c_str(), secs);
  std::fflush(stdout);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string line =
      std::string("\"") + OPQ_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(line.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

opq::LatticeSpec ring64() {
  opq::LatticeSpec spec;
  spec.dims = {64};
  spec.boundary = {opq::Boundary::periodic};
  spec.t = 1.0;
  spec.U = 2.0;
  spec.mu = -1.0;
  return spec;
}

}  // namespace

int main() {
  std::optional<opq::MeanFieldSolution> sol64;
  const auto spec64 = ring64();
  const auto graph64 = opq::build_lattice(spec64);

  run_check("1 closed-form correlators vs brute force", 10.0, [&](Check& c) {
    const auto dev = opq::oracle_comparison_suite(200, 3, 42u);
    c.expect(dev.trials == 200, "trial count mismatch");
    c.expect(dev.max() <= 1e-10, "max deviation " + sci(dev.max()) + " > 1e-10");
    c.note = "200 random states on 1..3 sites, max deviation " + sci(dev.max());
  });

  run_check("2 self-consistent gap vs momentum-space bisection", 60.0, [&](Check& c) {
    auto sol = opq::solve_self_consistent(spec64, opq::uniform_seed(64));
    c.expect(sol.converged, "solver did not converge");
    c.expect(sol.residual_norm <= 1e-8,
             "residual " + sci(sol.residual_norm) + " > 1e-8");

    const double mu_eff = spec64.mu + spec64.U * sol.n_up.mean();
    const double ref = opq_test::bcs_gap_bisection(64, spec64.t, spec64.U, mu_eff);
    const Eigen::VectorXd gap_abs = sol.gap.cwiseAbs();
    const double rel = std::abs(gap_abs.maxCoeff() - ref) / ref;
    c.expect(rel <= 1e-6, "gap off by " + sci(rel) + " relative (> 1e-6)");

    const double mag_spread = gap_abs.maxCoeff() - gap_abs.minCoeff();
    c.expect(mag_spread <= 1e-10, "gap magnitude spread " + sci(mag_spread));
    double arg_spread = 0.0;
    for (int i = 0; i < 64; ++i)
      arg_spread = std::max(arg_spread, std::abs(std::arg(sol.gap(i)) - std::arg(sol.gap(0))));
    c.expect(arg_spread <= 1e-10, "gap phase spread " + sci(arg_spread));

    c.note = "|gap| = " + sci(gap_abs.maxCoeff()) + " vs bisection " + sci(ref) +
             ", rel " + sci(rel);
    if (c.ok) sol64 = std::move(sol);
  });

  run_check("3 phase stiffness quadratic response", 0.0, [&](Check& c) {
    c.expect(sol64.has_value(), "no converged reference solution");
    if (!sol64) return;
    const auto base = opq::triangle_profile(64, 0.01);
    const auto rep = opq::stiffness_report(*sol64, graph64, spec64.t, base);
    c.expect(rep.ratio >= 0.999 && rep.ratio <= 1.001,
             "exact/quadratic ratio " + sci(rep.ratio) + " outside [0.999, 1.001]");

    double prev = 0.0;
    for (int h = 0; h < 3; ++h) {
      const opq::PhaseProfile p{base.values * std::pow(0.5, h)};
      const double diff = std::abs(opq::twist_energy_exact(*sol64, graph64, spec64.t, p) -
                                   opq::twist_energy_quadratic(*sol64, graph64, spec64.t, p));
      if (h > 0) {
        const double factor = prev / diff;
        c.expect(factor >= 12.8 && factor <= 19.2,
                 "halving shrank the quartic residual by " + sci(factor) + ", want 16 +/- 20%");
      }
      prev = diff;
    }

    const double flat =
        std::abs(opq::twist_energy_exact(*sol64, graph64, spec64.t, opq::uniform_profile(64, 1.7)));
    c.expect(flat <= 1e-12, "uniform profile cost " + sci(flat) + " > 1e-12");
    c.note = "ratio " + sci(rep.ratio) + ", quartic scaling verified over 3 halvings";
  });

  run_check("4 phase-slip overlap decay", 10.0, [&](Check& c) {
    c.expect(sol64.has_value(), "no converged reference solution");
    if (!sol64) return;
    const int modes = 2000;
    const auto curve =
        opq::overlap_decay({sol64->pairing.amplitude}, opq::uniform_profile(64, 0.0),
                           opq::uniform_profile(64, 0.1), modes);
    c.expect(curve.per_mode_abs(0) < 1.0,
             "per-mode overlap " + sci(curve.per_mode_abs(0)) + " not < 1");
    const double lg1 = curve.log10_abs(0);
    double worst = 0.0;
    for (int m = 0; m < modes; ++m)
      worst = std::max(worst, std::abs(curve.log10_abs(m) - (m + 1) * lg1));
    c.expect(worst <= 1e-12, "log-linearity deviation " + sci(worst) + " > 1e-12");
    c.expect(curve.m_star > 0 && curve.m_star <= modes,
             "decay did not cross 1e-10 within " + std::to_string(modes) + " modes");
    if (curve.m_star > 0 && curve.m_star <= modes)
      c.expect(curve.log10_abs(curve.m_star - 1) < -10.0, "crossing point not below 1e-10");
    c.note = "per-mode overlap " + sci(curve.per_mode_abs(0)) + ", crossing at M = " +
             std::to_string(curve.m_star);
  });

  run_check("5 capacitance locality sweep", 0.0, [&](Check& c) {
    opq::PhysicalConstants pc;
    opq::ResonatorGeometry g;
    g.L_x = 1e-2;
    g.L_y = 1e-7;
    g.L_z_eff = 1e-8;
    g.d = 1e-6;
    g.epsilon = 8e-11;
    g.n_volume = 1e28;
    const double cpl = opq::capacitance_per_length(g);

    const std::vector<double> sweep = {10.0, 30.0, 100.0, 300.0};
    const int ns = 2048;
    std::vector<double> errs;
    for (double sod : sweep) {
      const double sigma = sod * g.d;
      const double lx = 12.0 * sigma;
      Eigen::VectorXd v(ns);
      for (int i = 0; i < ns; ++i) {
        const double u = (i * lx / ns - 0.5 * lx) / sigma;
        v(i) = std::exp(-0.5 * u * u);
      }
      opq::ResonatorGeometry gw = g;
      gw.L_x = lx;
      const opq::LineProfile prof{lx, v, true};
      const double exact = opq::capacitive_energy_exact(prof, gw, pc);
      const double local = opq::capacitive_energy_local(prof, cpl, pc);
      errs.push_back(std::abs(local - exact) / exact);
    }
    for (size_t i = 0; i + 1 < errs.size(); ++i)
      c.expect(errs[i + 1] < errs[i], "error not monotone decreasing in sigma/d");
    c.expect(errs[2] <= 0.02, "error at sigma/d = 100 is " + sci(errs[2]) + " > 2%");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < sweep.size(); ++i) {
      const double x = std::log(sweep[i]), y = std::log(errs[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double n = static_cast<double>(sweep.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    c.expect(slope <= -0.5 && slope >= -2.0,
             "log-log slope " + sci(slope) + " outside [-2, -0.5]");

    const opq::LineProfile flat{g.L_x, Eigen::VectorXd::Constant(256, 1.0), true};
    const double e1 = opq::capacitive_energy_exact(flat, g, pc);
    const double e2 = opq::capacitive_energy_local(flat, cpl, pc);
    const double dev = std::abs(e1 - e2) / e2;
    c.expect(dev <= 1e-12, "constant profile deviation " + sci(dev) + " > 1e-12");
    c.note = "error at sigma/d = 100: " + sci(errs[2]) + ", log-log slope " + sci(slope);
  });

  run_check("6 resonator frequency identities and ladder convergence", 30.0, [&](Check& c) {
    opq::PhysicalConstants pc;
    std::uint64_t state = 2024;
    auto uniform = [&state]() {
      state += 0x9e3779b97f4a7c15ull;
      std::uint64_t z = state;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
      z = z ^ (z >> 31);
      return static_cast<double>(z >> 11) * 0x1.0p-53;
    };
    auto log_range = [&](double lo, double hi) { return lo * std::pow(hi / lo, uniform()); };

    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      opq::ResonatorGeometry g;
      g.L_x = log_range(1e-4, 1e-1);
      g.L_y = log_range(1e-8, 1e-6);
      g.L_z_eff = log_range(1e-9, 1e-7);
      g.d = log_range(1e-7, 1e-5);
      g.epsilon = log_range(1e-11, 1e-9);
      g.n_volume = log_range(1e26, 1e29);
      const double a = opq::fundamental_from_lc(g, pc);
      const double b = opq::fundamental_microscopic(g, pc);
      worst = std::max(worst, std::abs(a - b) / b);
    }
    c.expect(worst <= 1e-12,
             "frequency forms disagree by " + sci(worst) + " on random geometries");

    opq::PhysicalConstants rounded;
    rounded.e = 1.6e-19;
    rounded.m = 9e-31;
    opq::ResonatorGeometry ref;
    ref.L_x = 1e-2;
    ref.L_y = 1e-7;
    ref.L_z_eff = 1e-8;
    ref.d = 1e-6;
    ref.epsilon = 8e-11;
    ref.n_volume = 1e28;
    const double w1 = opq::fundamental_microscopic(ref, rounded);
    c.expect(w1 > 4.5e9 && w1 < 4.5e11,
             "reference fundamental " + sci(w1) + " outside [4.5e9, 4.5e11]");
    c.expect(std::abs(w1 / 8.37758e10 - 1.0) < 1e-4,
             "reference fundamental drifted to " + sci(w1));

    const double l = opq::inductance_per_length(rounded, ref.line_density());
    const double cap = opq::capacitance_per_length(ref);
    const double target = M_PI / (ref.L_x * std::sqrt(l * cap));
    std::vector<double> err;
    for (int nseg : {64, 128, 256}) {
      const auto modes = opq::lc_chain_normal_modes(l, cap, ref.L_x, nseg);
      err.push_back(std::abs(modes[0] - target) / target);
    }
    for (size_t i = 0; i + 1 < err.size(); ++i) {
      const double order = std::log2(err[i] / err[i + 1]);
      c.expect(order >= 1.8, "ladder convergence order " + sci(order) + " < 1.8");
    }
    c.note = "identity to " + sci(worst) + " over 100 geometries, reference w1 = " + sci(w1) +
             " 1/s, ladder order ~2";
  });

  run_check("7 junction spectrum conventions", 5.0, [&](Check& c) {
    opq::JunctionSpec free_spec;
    free_spec.E_C = 0.7;
    free_spec.E_J = 0.0;
    free_spec.n_cut = 12;
    const auto r0 = opq::cpb_spectrum(free_spec, 7);
    const double expect[7] = {0.0, 0.7, 0.7, 2.8, 2.8, 6.3, 6.3};
    for (int i = 0; i < 7; ++i)
      c.expect(std::abs(r0.levels[i] - expect[i]) <= 1e-12, "decoupled spectrum wrong");

    opq::JunctionSpec plus, minus;
    plus.E_J = 3.7;
    minus.E_J = -3.7;
    plus.n_cut = minus.n_cut = 25;
    const auto rp = opq::cpb_spectrum(plus, 6);
    const auto rm = opq::cpb_spectrum(minus, 6);
    for (int i = 0; i < 6; ++i)
      c.expect(std::abs(rp.levels[i] - rm.levels[i]) <= 1e-12 * (1.0 + std::abs(rp.levels[i])),
               "spectrum not even in the coupling sign");

    // per-Cooper-pair charging convention: E_C = 4 in the n^2 charging term
    opq::JunctionSpec transmon;
    transmon.E_C = 4.0;
    transmon.E_J = 50.0;
    transmon.n_cut = 40;
    const auto rt = opq::cpb_spectrum(transmon, 2);
    c.expect(rt.truncation_converged, "transmon basis not converged");
    const double gap = rt.levels[1] - rt.levels[0];
    const double asym = std::sqrt(8.0 * 1.0 * 50.0) - 1.0;
    const double rel = std::abs(gap / asym - 1.0);
    c.expect(rel <= 0.02, "transmon gap off the oscillator value by " + sci(rel));
    c.note = "E1 - E0 = " + sci(gap) + " vs " + sci(asym) + " (rel " + sci(rel) + ")";
  });

  run_check("8 byte-identical reruns and goldens", 0.0, [&](Check& c) {
    const fs::path config_dir = OPQ_CONFIG_DIR;
    const fs::path golden_dir = OPQ_GOLDEN_DIR;
    const fs::path work =
        fs::temp_directory_path() / ("opq_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(work);

    std::vector<fs::path> configs;
    for (const auto& e : fs::directory_iterator(config_dir))
      if (e.path().extension() == ".json") configs.push_back(e.path());
    std::sort(configs.begin(), configs.end());
    c.expect(!configs.empty(), "no configs found in " + config_dir.string());

    int files_compared = 0;
    for (const auto& cfg : configs) {
      const std::string stem = cfg.stem().string();
      const fs::path r1 = work / stem / "r1";
      const fs::path r2 = work / stem / "r2";
      for (const auto& out : {r1, r2}) {
        const int rc = run_cli("run " + cfg.string() + " --output-dir " + out.string());
        c.expect(rc == 0, stem + ": exit code " + std::to_string(rc));
      }
      if (!c.ok) break;

      for (const auto& e : fs::directory_iterator(r1)) {
        const auto name = e.path().filename();
        c.expect(fs::exists(r2 / name), stem + ": rerun missing " + name.string());
        if (fs::exists(r2 / name))
          c.expect(slurp(e.path()) == slurp(r2 / name),
                   stem + ": rerun differs in " + name.string());
        ++files_compared;
      }

      const fs::path gold = golden_dir / stem;
      c.expect(fs::is_directory(gold), stem + ": no golden directory");
      if (!fs::is_directory(gold)) continue;
      for (const auto& e : fs::directory_iterator(gold)) {
        const auto name = e.path().filename();
        c.expect(fs::exists(r1 / name), stem + ": run missing golden file " + name.string());
        if (fs::exists(r1 / name))
          c.expect(slurp(e.path()) == slurp(r1 / name),
                   stem + ": output differs from golden " + name.string());
        ++files_compared;
      }
    }
    fs::remove_all(work);
    c.note = std::to_string(configs.size()) + " configs run twice, " +
             std::to_string(files_compared) + " file comparisons";
  });

  std::printf("acceptance: %d/8 passed\n", 8 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
