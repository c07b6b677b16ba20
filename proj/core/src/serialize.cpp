#include "vortexlab/serialize.hpp"

#include <stdexcept>

namespace {

using nlohmann::json;

json complex_to_json(const std::complex<double>& z) { return json::array({z.real(), z.imag()}); }

std::complex<double> complex_from_json(const json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(std::move(r));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const auto rows = j.size();
  if (rows == 0) return {};
  const auto cols = j.at(0).size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t c = 0; c < cols; ++c) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = j.at(i).at(c).get<double>();
  return m;
}

json cmatrix_to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(r));
  }
  return rows;
}

Eigen::MatrixXcd cmatrix_from_json(const json& j) {
  const auto rows = j.size();
  if (rows == 0) return {};
  const auto cols = j.at(0).size();
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = complex_from_json(j.at(i).at(c));
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j.at(i).get<double>();
  return v;
}

}  // namespace

namespace vortexlab::geom {

void to_json(json& j, const TorusAction& a) {
  j = json{{"n", a.n}, {"k", a.k}, {"W", matrix_to_json(a.W)}, {"c", vector_to_json(a.c)}};
}

void from_json(const json& j, TorusAction& a) {
  a.n = j.at("n").get<int>();
  a.k = j.at("k").get<int>();
  a.W = matrix_from_json(j.at("W"));
  a.c = vector_from_json(j.at("c"));
  a.validate();
}

}  // namespace vortexlab::geom

namespace vortexlab::loops {

void to_json(json& j, const DiscreteLoop& x) { j = json{{"samples", cmatrix_to_json(x.samples)}}; }

void from_json(const json& j, DiscreteLoop& x) {
  x.samples = cmatrix_from_json(j.at("samples"));
  x.validate();
}

void to_json(json& j, const PairLoop& p) {
  j = json{{"x", p.x}, {"xi", matrix_to_json(p.xi)}};
}

void from_json(const json& j, PairLoop& p) {
  j.at("x").get_to(p.x);
  p.xi = matrix_from_json(j.at("xi"));
  p.validate();
}

void to_json(json& j, const GaugeLoop& g) {
  j = json{{"eta", matrix_to_json(g.eta)}, {"winding", vector_to_json(g.winding)}};
}

void from_json(const json& j, GaugeLoop& g) {
  g.eta = matrix_from_json(j.at("eta"));
  g.winding = vector_from_json(j.at("winding"));
}

}  // namespace vortexlab::loops

namespace vortexlab::holonomy {

namespace {

// components flattened row-major, one array per Lie-algebra component
json flatten(const std::vector<Eigen::MatrixXd>& comps) {
  json out = json::array();
  for (const auto& m : comps) {
    json flat = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index c = 0; c < m.cols(); ++c) flat.push_back(m(i, c));
    out.push_back(std::move(flat));
  }
  return out;
}

std::vector<Eigen::MatrixXd> unflatten(const json& j, int nx, int ny) {
  std::vector<Eigen::MatrixXd> out;
  for (const auto& flat : j) {
    if (static_cast<int>(flat.size()) != nx * ny)
      throw std::invalid_argument("ConnectionChart: component length != nx * ny");
    Eigen::MatrixXd m(nx, ny);
    for (int i = 0; i < nx; ++i)
      for (int c = 0; c < ny; ++c) m(i, c) = flat.at(static_cast<std::size_t>(i * ny + c)).get<double>();
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace

void to_json(json& j, const ConnectionChart& c) {
  j = json{{"group", c.group == Group::torus ? "torus" : "quaternion"},
           {"dim", c.dim},
           {"x0", c.x0},
           {"x1", c.x1},
           {"y0", c.y0},
           {"y1", c.y1},
           {"nx", c.nx},
           {"ny", c.ny},
           {"A1", flatten(c.A1)},
           {"A2", flatten(c.A2)}};
}

void from_json(const json& j, ConnectionChart& c) {
  const auto g = j.at("group").get<std::string>();
  if (g == "torus")
    c.group = Group::torus;
  else if (g == "quaternion")
    c.group = Group::quaternion;
  else
    throw std::invalid_argument("ConnectionChart: unknown group " + g);
  c.dim = j.at("dim").get<int>();
  c.x0 = j.at("x0").get<double>();
  c.x1 = j.at("x1").get<double>();
  c.y0 = j.at("y0").get<double>();
  c.y1 = j.at("y1").get<double>();
  c.nx = j.at("nx").get<int>();
  c.ny = j.at("ny").get<int>();
  c.A1 = unflatten(j.at("A1"), c.nx, c.ny);
  c.A2 = unflatten(j.at("A2"), c.nx, c.ny);
  c.validate();
}

}  // namespace vortexlab::holonomy

namespace vortexlab::vortex {

void to_json(json& j, const CylinderGrid& g) {
  j = json{{"s0", g.s0}, {"s1", g.s1}, {"ns", g.ns}, {"nt", g.nt}};
}

void from_json(const json& j, CylinderGrid& g) {
  g.s0 = j.at("s0").get<double>();
  g.s1 = j.at("s1").get<double>();
  g.ns = j.at("ns").get<int>();
  g.nt = j.at("nt").get<int>();
  g.validate();
}

void to_json(json& j, const VortexFields& w) {
  json u = json::array(), phi = json::array(), psi = json::array();
  for (const auto& m : w.u) u.push_back(cmatrix_to_json(m));
  for (const auto& m : w.Phi) phi.push_back(matrix_to_json(m));
  for (const auto& m : w.Psi) psi.push_back(matrix_to_json(m));
  j = json{{"grid", w.grid}, {"n", w.n},     {"k", w.k},
           {"u", std::move(u)}, {"Phi", std::move(phi)}, {"Psi", std::move(psi)},
           {"lam", matrix_to_json(w.lam)}};
}

void from_json(const json& j, VortexFields& w) {
  j.at("grid").get_to(w.grid);
  w.n = j.at("n").get<int>();
  w.k = j.at("k").get<int>();
  w.u.clear();
  w.Phi.clear();
  w.Psi.clear();
  for (const auto& m : j.at("u")) w.u.push_back(cmatrix_from_json(m));
  for (const auto& m : j.at("Phi")) w.Phi.push_back(matrix_from_json(m));
  for (const auto& m : j.at("Psi")) w.Psi.push_back(matrix_from_json(m));
  w.lam = matrix_from_json(j.at("lam"));
  w.validate();
}

void to_json(json& j, const RadialProfile& p) {
  j = json{{"k", p.k_deg},
           {"lam0", p.lam0},
           {"s0", p.s0},
           {"ds", p.ds},
           {"rho", p.rho},
           {"psi", p.psi},
           {"splice_s", p.splice_s},
           {"terminal_distance", p.terminal_distance}};
}

void from_json(const json& j, RadialProfile& p) {
  p.k_deg = j.at("k").get<int>();
  p.lam0 = j.at("lam0").get<double>();
  p.s0 = j.at("s0").get<double>();
  p.ds = j.at("ds").get<double>();
  p.rho = j.at("rho").get<std::vector<double>>();
  p.psi = j.at("psi").get<std::vector<double>>();
  p.splice_s = j.value("splice_s", p.s_max());
  p.terminal_distance = j.value("terminal_distance", 0.0);
}

}  // namespace vortexlab::vortex

namespace vortexlab::isoperi {

void to_json(json& j, const VerifierConfig& c) {
  json region = json::array();
  for (const auto& z : c.region) {
    json pt = json::array();
    for (Eigen::Index i = 0; i < z.size(); ++i) pt.push_back(complex_to_json(z(i)));
    region.push_back(std::move(pt));
  }
  j = json{{"action", c.action},   {"region", std::move(region)},
           {"c", c.c},             {"delta", c.delta},
           {"p_grid", c.p_grid},   {"trials", c.trials},
           {"seed", c.seed},       {"N", c.N},
           {"xi_amp", c.xi_amp},   {"deg_min", c.deg_min},
           {"deg_max", c.deg_max}};
}

void from_json(const json& j, VerifierConfig& c) {
  if (j.contains("action")) j.at("action").get_to(c.action);
  c.region.clear();
  if (j.contains("region")) {
    for (const auto& pt : j.at("region")) {
      geom::PointC z(static_cast<Eigen::Index>(pt.size()));
      for (std::size_t i = 0; i < pt.size(); ++i)
        z(static_cast<Eigen::Index>(i)) = complex_from_json(pt.at(i));
      c.region.push_back(std::move(z));
    }
  }
  c.c = j.value("c", c.c);
  c.delta = j.value("delta", c.delta);
  if (j.contains("p_grid")) c.p_grid = j.at("p_grid").get<std::vector<double>>();
  c.trials = j.value("trials", c.trials);
  c.seed = j.value("seed", c.seed);
  c.N = j.value("N", c.N);
  c.xi_amp = j.value("xi_amp", c.xi_amp);
  c.deg_min = j.value("deg_min", c.deg_min);
  c.deg_max = j.value("deg_max", c.deg_max);
}

}  // namespace vortexlab::isoperi
