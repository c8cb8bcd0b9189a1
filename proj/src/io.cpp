#include "opq/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace opq::io {

namespace {

nlohmann::json matrix_rows(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json vector_values(const Eigen::VectorXd& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

}  // namespace

std::string format_sci(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

std::string config_hash(const nlohmann::json& config) {
  const std::string dump = config.dump();  // nlohmann objects are key-sorted
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::json report_header(const std::string& command, const std::string& hash) {
  return {{"toolkit_version", kToolkitVersion}, {"command", command}, {"config_hash", hash}};
}

nlohmann::json to_json(const MeanFieldSolution& sol) {
  nlohmann::json j;
  j["converged"] = sol.converged;
  j["superconducting"] = sol.superconducting;
  j["iterations"] = sol.iterations;
  j["residual_norm"] = sol.residual_norm;
  j["energy"] = sol.energy;
  j["global_phase"] = sol.pairing.global_phase;
  j["gap_abs"] = vector_values(sol.gap.cwiseAbs());
  nlohmann::json args = nlohmann::json::array();
  for (Eigen::Index i = 0; i < sol.gap.size(); ++i) args.push_back(std::arg(sol.gap(i)));
  j["gap_arg"] = args;
  j["density_up"] = vector_values(sol.n_up);
  j["density_down"] = vector_values(sol.n_down);
  j["one_body_rho"] = matrix_rows(sol.rho);           // row-major rows
  j["pair_amplitude"] = matrix_rows(sol.pairing.amplitude);
  return j;
}

nlohmann::json to_json(const StiffnessReport& report) {
  nlohmann::json j;
  j["twist_energy_exact"] = report.exact;
  j["twist_energy_quadratic"] = report.quadratic;
  j["ratio"] = report.ratio;
  j["bond_count"] = report.bonds.size();
  return j;
}

nlohmann::json to_json(const OrthogonalityCurve& curve) {
  nlohmann::json j;
  j["per_mode_abs_first"] = curve.per_mode_abs.size() ? curve.per_mode_abs(0) : 0.0;
  j["log10_slope"] = curve.log10_slope;
  j["m_star"] = curve.m_star;
  j["modes"] = curve.abs_overlap.size();
  j["log10_abs_overlap"] = vector_values(curve.log10_abs);
  return j;
}

nlohmann::json to_json(const CircuitParams& params) {
  nlohmann::json j;
  j["n_x"] = params.n_x;
  j["inductance_per_length"] = params.l;
  j["capacitance_per_length"] = params.c;
  j["velocity"] = params.v;
  j["omega1"] = params.omega1;
  j["omega1_microscopic"] = params.omega1_microscopic;
  j["omega"] = params.omega;
  return j;
}

nlohmann::json to_json(const CpbSpectrum& spectrum) {
  nlohmann::json j;
  j["levels"] = spectrum.levels;
  j["truncation_converged"] = spectrum.truncation_converged;
  j["truncation_shift"] = spectrum.truncation_shift;
  return j;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path);
}

void write_json(const std::string& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

CsvWriter::CsvWriter(std::string command, std::string hash, std::vector<std::string> columns)
    : columns_(std::move(columns)) {
  preamble_ = "# toolkit_version: " + std::string(kToolkitVersion) + "\n# command: " + command +
              "\n# config_hash: " + hash + "\n";
}

void CsvWriter::add_row(const std::vector<double>& values) {
  if (values.size() != columns_.size())
    throw std::invalid_argument("CsvWriter: cell count mismatch");
  std::string row;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) row += ",";
    row += format_sci(values[i]);
  }
  rows_.push_back(row);
}

void CsvWriter::add_row_raw(const std::vector<std::string>& cells) {
  if (cells.size() != columns_.size())
    throw std::invalid_argument("CsvWriter: cell count mismatch");
  std::string row;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) row += ",";
    row += cells[i];
  }
  rows_.push_back(row);
}

void CsvWriter::write(const std::string& path) const {
  std::string out = preamble_;
  for (size_t i = 0; i < columns_.size(); ++i) {
    if (i) out += ",";
    out += columns_[i];
  }
  out += "\n";
  for (const auto& r : rows_) out += r + "\n";
  write_text(path, out);
}

}  // namespace opq::io
