#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "opq/circuit.hpp"
#include "opq/meanfield.hpp"
#include "opq/phase_dynamics.hpp"
#include "opq/qubit.hpp"

namespace opq::io {

inline constexpr const char* kToolkitVersion = "0.1.0";

// Scientific notation with 17 significant digits; round-trips any double.
std::string format_sci(double x);

// FNV-1a 64 over the canonical (sorted-key) JSON dump, rendered as 16 hex chars.
std::string config_hash(const nlohmann::json& config);

// Shared header fields every output file carries.
nlohmann::json report_header(const std::string& command, const std::string& hash);

nlohmann::json to_json(const MeanFieldSolution& sol);
nlohmann::json to_json(const StiffnessReport& report);
nlohmann::json to_json(const OrthogonalityCurve& curve);
nlohmann::json to_json(const CircuitParams& params);
nlohmann::json to_json(const CpbSpectrum& spectrum);

void write_text(const std::string& path, const std::string& content);
void write_json(const std::string& path, const nlohmann::json& j);

// CSV with '#'-prefixed header lines (version, config hash, command), then a
// column-name row and '.'-decimal data rows.
class CsvWriter {
 public:
  CsvWriter(std::string command, std::string hash, std::vector<std::string> columns);
  void add_row(const std::vector<double>& values);
  void add_row_raw(const std::vector<std::string>& cells);
  void write(const std::string& path) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::string> rows_;
  std::string preamble_;
};

}  // namespace opq::io
