#include "report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace vtxlab {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

void must_open(std::ofstream& os, const std::filesystem::path& path) {
  os.open(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(const std::vector<double>& values) {
  if (values.size() != header_.size()) throw std::invalid_argument("CsvTable: row width mismatch");
  rows_.push_back(values);
}

void CsvTable::write(const std::filesystem::path& path) const {
  std::ofstream os;
  must_open(os, path);
  for (std::size_t i = 0; i < header_.size(); ++i)
    os << header_[i] << (i + 1 < header_.size() ? "," : "\n");
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << fmt(row[i]) << (i + 1 < row.size() ? "," : "\n");
  }
}

void write_svg_curve(const std::filesystem::path& path, const std::vector<double>& x,
                     const std::vector<double>& y, const std::string& x_label,
                     const std::string& y_label) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("svg curve: bad series");
  const double W = 640, H = 420, m = 50;
  const double xmin = *std::min_element(x.begin(), x.end());
  const double xmax = *std::max_element(x.begin(), x.end());
  const double ymin = *std::min_element(y.begin(), y.end());
  const double ymax = *std::max_element(y.begin(), y.end());
  const double xs = (W - 2 * m) / std::max(xmax - xmin, 1e-300);
  const double ys = (H - 2 * m) / std::max(ymax - ymin, 1e-300);

  std::ofstream os;
  must_open(os, path);
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
  os << "<rect width='100%' height='100%' fill='white'/>\n";
  os << "<polyline fill='none' stroke='black' points='" << fmt(m) << "," << fmt(m) << " "
     << fmt(m) << "," << fmt(H - m) << " " << fmt(W - m) << "," << fmt(H - m) << "'/>\n";
  os << "<polyline fill='none' stroke='#1f77b4' stroke-width='1.5' points='";
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double px = m + (x[i] - xmin) * xs;
    const double py = H - m - (y[i] - ymin) * ys;
    os << fmt(px) << "," << fmt(py) << " ";
  }
  os << "'/>\n";
  os << "<text x='" << fmt(W / 2) << "' y='" << fmt(H - 12) << "' font-size='13'>" << x_label
     << "</text>\n";
  os << "<text x='14' y='" << fmt(m - 14) << "' font-size='13'>" << y_label << "</text>\n";
  os << "<text x='" << fmt(m) << "' y='" << fmt(H - m + 16) << "' font-size='11'>" << fmt(xmin)
     << "</text>\n";
  os << "<text x='" << fmt(W - m - 40) << "' y='" << fmt(H - m + 16) << "' font-size='11'>"
     << fmt(xmax) << "</text>\n";
  os << "<text x='6' y='" << fmt(H - m) << "' font-size='11'>" << fmt(ymin) << "</text>\n";
  os << "<text x='6' y='" << fmt(m) << "' font-size='11'>" << fmt(ymax) << "</text>\n";
  os << "</svg>\n";
}

void write_svg_histogram(const std::filesystem::path& path, const std::vector<int>& bins,
                         double lo, double hi, const std::string& x_label) {
  if (bins.empty()) throw std::invalid_argument("svg histogram: no bins");
  const double W = 640, H = 420, m = 50;
  const int peak = std::max(1, *std::max_element(bins.begin(), bins.end()));
  const double bw = (W - 2 * m) / static_cast<double>(bins.size());

  std::ofstream os;
  must_open(os, path);
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
  os << "<rect width='100%' height='100%' fill='white'/>\n";
  for (std::size_t i = 0; i < bins.size(); ++i) {
    const double h = (H - 2 * m) * bins[i] / static_cast<double>(peak);
    os << "<rect x='" << fmt(m + bw * static_cast<double>(i)) << "' y='" << fmt(H - m - h)
       << "' width='" << fmt(bw * 0.9) << "' height='" << fmt(h) << "' fill='#1f77b4'/>\n";
  }
  os << "<polyline fill='none' stroke='black' points='" << fmt(m) << "," << fmt(m) << " "
     << fmt(m) << "," << fmt(H - m) << " " << fmt(W - m) << "," << fmt(H - m) << "'/>\n";
  os << "<text x='" << fmt(W / 2) << "' y='" << fmt(H - 12) << "' font-size='13'>" << x_label
     << "</text>\n";
  os << "<text x='" << fmt(m) << "' y='" << fmt(H - m + 16) << "' font-size='11'>" << fmt(lo)
     << "</text>\n";
  os << "<text x='" << fmt(W - m - 40) << "' y='" << fmt(H - m + 16) << "' font-size='11'>"
     << fmt(hi) << "</text>\n";
  os << "</svg>\n";
}

void write_report(const OutputOptions& opt, const std::string& command,
                  const nlohmann::json& config_echo, const nlohmann::json& results, bool pass) {
  nlohmann::json rep;
  rep["command"] = command;
  rep["version"] = "vortexlab 0.1.0";
  rep["config"] = config_echo;
  rep["results"] = results;
  rep["pass"] = pass;
  std::ofstream os;
  must_open(os, opt.out_dir / "report.json");
  os << rep.dump(2) << "\n";
}

}  // namespace vtxlab
