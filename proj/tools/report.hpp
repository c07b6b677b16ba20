#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

// Output plumbing for the vtxlab tool: CSV tables with full precision,
// minimal standalone SVG plots and the report.json envelope.

namespace vtxlab {

struct OutputOptions {
  std::filesystem::path out_dir = "out";
  bool csv = true;
  bool json = true;
  bool svg = false;
};

/// One CSV table; every number is rendered with 15 significant digits.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(const std::vector<double>& values);
  void write(const std::filesystem::path& path) const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

/// Polyline plot of y against x (one series), log-friendly: the caller
/// passes already-transformed values.
void write_svg_curve(const std::filesystem::path& path, const std::vector<double>& x,
                     const std::vector<double>& y, const std::string& x_label,
                     const std::string& y_label);

/// Bar plot of a histogram over [lo, hi].
void write_svg_histogram(const std::filesystem::path& path, const std::vector<int>& bins,
                         double lo, double hi, const std::string& x_label);

/// report.json envelope: config echo, tool version, per-command results.
void write_report(const OutputOptions& opt, const std::string& command,
                  const nlohmann::json& config_echo, const nlohmann::json& results, bool pass);

}  // namespace vtxlab
