#include "vortexlab/holonomy.hpp"

#include <cmath>
#include <stdexcept>

#include "vortexlab/fourier.hpp"

namespace vortexlab::holonomy {

double GroupElement::dist_to_identity() const {
  if (group == Group::torus) return geom::torus_dist(lift);
  return geom::quat_dist(geom::Quat::identity(), quat);
}

GroupElement GroupElement::compose(const GroupElement& other) const {
  if (other.group != group) throw std::invalid_argument("GroupElement: mixed groups");
  GroupElement out = *this;
  if (group == Group::torus)
    out.lift = lift + other.lift;
  else
    out.quat = quat * other.quat;
  return out;
}

GroupElement GroupElement::inverse() const {
  GroupElement out = *this;
  if (group == Group::torus)
    out.lift = -lift;
  else
    out.quat = quat.inverse();
  return out;
}

GroupElement GroupElement::torus(geom::AlgVec lift) {
  GroupElement e;
  e.group = Group::torus;
  e.lift = std::move(lift);
  return e;
}

GroupElement GroupElement::quaternion(geom::Quat q) {
  GroupElement e;
  e.group = Group::quaternion;
  e.quat = q.normalized();
  return e;
}

bool ConnectionChart::contains(double x, double y) const {
  return x >= x0 && x <= x1 && y >= y0 && y <= y1;
}

namespace {

Eigen::VectorXd bilinear(const std::vector<Eigen::MatrixXd>& field, double x, double y,
                         double x0, double y0, double hx, double hy, int nx, int ny) {
  double fx = (x - x0) / hx;
  double fy = (y - y0) / hy;
  int ix = static_cast<int>(std::floor(fx));
  int iy = static_cast<int>(std::floor(fy));
  ix = std::clamp(ix, 0, nx - 2);
  iy = std::clamp(iy, 0, ny - 2);
  const double ux = fx - ix;
  const double uy = fy - iy;
  Eigen::VectorXd out(static_cast<Eigen::Index>(field.size()));
  for (std::size_t c = 0; c < field.size(); ++c) {
    const auto& m = field[c];
    out(static_cast<Eigen::Index>(c)) = (1 - ux) * (1 - uy) * m(ix, iy) + ux * (1 - uy) * m(ix + 1, iy) +
                                        (1 - ux) * uy * m(ix, iy + 1) + ux * uy * m(ix + 1, iy + 1);
  }
  return out;
}

}  // namespace

Eigen::VectorXd ConnectionChart::eval1(double x, double y) const {
  return bilinear(A1, x, y, x0, y0, hx(), hy(), nx, ny);
}

Eigen::VectorXd ConnectionChart::eval2(double x, double y) const {
  return bilinear(A2, x, y, x0, y0, hx(), hy(), nx, ny);
}

void ConnectionChart::validate() const {
  if (nx < 2 || ny < 2) throw std::invalid_argument("ConnectionChart: need at least 2x2 nodes");
  if (x1 <= x0 || y1 <= y0) throw std::invalid_argument("ConnectionChart: empty rectangle");
  const int want = (group == Group::quaternion) ? 3 : dim;
  if (dim != want) throw std::invalid_argument("ConnectionChart: quaternion charts carry dim 3");
  if (static_cast<int>(A1.size()) != dim || static_cast<int>(A2.size()) != dim)
    throw std::invalid_argument("ConnectionChart: component count mismatch");
  for (const auto& m : A1)
    if (m.rows() != nx || m.cols() != ny) throw std::invalid_argument("ConnectionChart: bad field shape");
  for (const auto& m : A2)
    if (m.rows() != nx || m.cols() != ny) throw std::invalid_argument("ConnectionChart: bad field shape");
  for (const auto* fields : {&A1, &A2})
    for (const auto& m : *fields)
      if (!m.allFinite()) throw std::invalid_argument("ConnectionChart: non-finite field values");
}

ConnectionChart ConnectionChart::from_function(
    Group group, int dim, double x0, double x1, double y0, double y1, int nx, int ny,
    const std::function<void(double, double, Eigen::VectorXd&, Eigen::VectorXd&)>& f) {
  ConnectionChart c;
  c.group = group;
  c.dim = dim;
  c.x0 = x0;
  c.x1 = x1;
  c.y0 = y0;
  c.y1 = y1;
  c.nx = nx;
  c.ny = ny;
  c.A1.assign(dim, Eigen::MatrixXd(nx, ny));
  c.A2.assign(dim, Eigen::MatrixXd(nx, ny));
  Eigen::VectorXd a1(dim), a2(dim);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      f(x0 + i * c.hx(), y0 + j * c.hy(), a1, a2);
      for (int cdx = 0; cdx < dim; ++cdx) {
        c.A1[cdx](i, j) = a1(cdx);
        c.A2[cdx](i, j) = a2(cdx);
      }
    }
  c.validate();
  return c;
}

CurvatureResult curvature(const ConnectionChart& conn) {
  conn.validate();
  const int nx = conn.nx, ny = conn.ny;
  const double hx = conn.hx(), hy = conn.hy();

  auto d1 = [&](const Eigen::MatrixXd& f, int i, int j) {
    if (i == 0) return (-3.0 * f(0, j) + 4.0 * f(1, j) - f(2, j)) / (2 * hx);
    if (i == nx - 1) return (3.0 * f(nx - 1, j) - 4.0 * f(nx - 2, j) + f(nx - 3, j)) / (2 * hx);
    return (f(i + 1, j) - f(i - 1, j)) / (2 * hx);
  };
  auto d2 = [&](const Eigen::MatrixXd& f, int i, int j) {
    if (j == 0) return (-3.0 * f(i, 0) + 4.0 * f(i, 1) - f(i, 2)) / (2 * hy);
    if (j == ny - 1) return (3.0 * f(i, ny - 1) - 4.0 * f(i, ny - 2) + f(i, ny - 3)) / (2 * hy);
    return (f(i, j + 1) - f(i, j - 1)) / (2 * hy);
  };

  CurvatureResult res;
  res.F12.assign(conn.dim, Eigen::MatrixXd(nx, ny));
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      Eigen::VectorXd f(conn.dim);
      for (int c = 0; c < conn.dim; ++c) f(c) = d1(conn.A2[c], i, j) - d2(conn.A1[c], i, j);
      if (conn.group == Group::quaternion) {
        Eigen::Vector3d u, v;
        for (int c = 0; c < 3; ++c) {
          u(c) = conn.A1[c](i, j);
          v(c) = conn.A2[c](i, j);
        }
        f += geom::quat_bracket(u, v);
      }
      for (int c = 0; c < conn.dim; ++c) res.F12[c](i, j) = f(c);
      res.sup_norm = std::max(res.sup_norm, f.norm());
    }
  return res;
}

namespace {

// Local cubic through samples at u = -1, 0, 1, 2 and its derivative.
void lagrange_cubic(double u, double w[4], double dw[4]) {
  w[0] = -u * (u - 1) * (u - 2) / 6.0;
  w[1] = (u + 1) * (u - 1) * (u - 2) / 2.0;
  w[2] = -u * (u + 1) * (u - 2) / 2.0;
  w[3] = u * (u + 1) * (u - 1) / 6.0;
  dw[0] = -(3 * u * u - 6 * u + 2) / 6.0;
  dw[1] = (3 * u * u - 4 * u - 1) / 2.0;
  dw[2] = -(3 * u * u - 2 * u - 2) / 2.0;
  dw[3] = (3 * u * u - 1) / 6.0;
}

struct LoopEval {
  const Eigen::MatrixXcd* samples;
  int n;

  // position and velocity at parameter t = (i + u)/n
  void at(int i, double u, double& x, double& y, double& vx, double& vy) const {
    double w[4], dw[4];
    lagrange_cubic(u, w, dw);
    std::complex<double> p(0, 0), d(0, 0);
    for (int m = -1; m <= 2; ++m) {
      const std::complex<double> s = (*samples)((i + m + 2 * n) % n, 0);
      p += w[m + 1] * s;
      d += dw[m + 1] * s;
    }
    x = p.real();
    y = p.imag();
    vx = d.real() * n;  // d/dt = n d/du
    vy = d.imag() * n;
  }
};

}  // namespace

GroupElement holonomy(Group group, int dim, const ConnectionEval& eval,
                      const loops::DiscreteLoop& loop, const HolonomyOptions& opt) {
  if (loop.dim() != 1) throw std::invalid_argument("holonomy: loops must be planar (n = 1)");
  loop.validate();
  const int n = loop.N();
  const double h = 1.0 / n;
  LoopEval le{&loop.samples, n};

  Eigen::VectorXd a1(dim), a2(dim);
  auto psi = [&](int i, double u) {
    double x, y, vx, vy;
    le.at(i, u, x, y, vx, vy);
    eval(x, y, a1, a2);
    return Eigen::VectorXd(a1 * vx + a2 * vy);
  };

  if (group == Group::torus) {
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd k1 = -psi(i, 0.0);
      const Eigen::VectorXd k2 = -psi(i, 0.5);
      const Eigen::VectorXd k4 = -psi(i, 1.0);
      if (h * k1.norm() > opt.max_increment)
        throw std::runtime_error("holonomy: step increment above 0.1, refine the loop");
      theta += (h / 6.0) * (k1 + 4.0 * k2 + k4);  // RK4 collapses to Simpson here
    }
    return GroupElement::torus(theta);
  }

  geom::Quat q = geom::Quat::identity();
  auto mul = [](const Eigen::Vector3d& xi, const geom::Quat& p) {
    // pure quaternion times quaternion, without renormalization
    geom::Quat r;
    r.w = -xi(0) * p.x - xi(1) * p.y - xi(2) * p.z;
    r.x = xi(0) * p.w + xi(1) * p.z - xi(2) * p.y;
    r.y = -xi(0) * p.z + xi(1) * p.w + xi(2) * p.x;
    r.z = xi(0) * p.y - xi(1) * p.x + xi(2) * p.w;
    return r;
  };
  auto axpy = [](const geom::Quat& a, double s, const geom::Quat& b) {
    return geom::Quat{a.w + s * b.w, a.x + s * b.x, a.y + s * b.y, a.z + s * b.z};
  };
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d p1 = -psi(i, 0.0);
    if (h * p1.norm() > opt.max_increment)
      throw std::runtime_error("holonomy: step increment above 0.1, refine the loop");
    const geom::Quat k1 = mul(p1, q);
    const Eigen::Vector3d pm = -psi(i, 0.5);
    const geom::Quat k2 = mul(pm, axpy(q, 0.5 * h, k1));
    const geom::Quat k3 = mul(pm, axpy(q, 0.5 * h, k2));
    const Eigen::Vector3d p4 = -psi(i, 1.0);
    const geom::Quat k4 = mul(p4, axpy(q, h, k3));
    geom::Quat sum = axpy(axpy(k1, 2.0, k2), 2.0, k3);
    sum = axpy(sum, 1.0, k4);
    q = axpy(q, h / 6.0, sum).normalized();
  }
  return GroupElement::quaternion(q);
}

GroupElement holonomy(const ConnectionChart& conn, const loops::DiscreteLoop& loop,
                      const HolonomyOptions& opt) {
  conn.validate();
  for (int i = 0; i < loop.N(); ++i) {
    const auto z = loop.samples(i, 0);
    if (!conn.contains(z.real(), z.imag()))
      throw std::invalid_argument("holonomy: loop leaves the chart");
  }
  ConnectionEval eval = [&conn](double x, double y, Eigen::VectorXd& a1, Eigen::VectorXd& a2) {
    a1 = conn.eval1(x, y);
    a2 = conn.eval2(x, y);
  };
  return holonomy(conn.group, conn.dim, eval, loop, opt);
}

double loop_length(const loops::DiscreteLoop& loop) {
  const Eigen::MatrixXcd xdot = loop.derivative();
  Eigen::VectorXd speed(loop.N());
  for (int i = 0; i < loop.N(); ++i) speed(i) = xdot.row(i).norm();
  return quad::periodic_mean(speed);
}

ScalingReport holonomy_bound_scaling(const ConnectionChart& conn,
                                     const std::vector<loops::DiscreteLoop>& family,
                                     const HolonomyOptions& opt) {
  ScalingReport rep;
  rep.sup_curvature = curvature(conn).sup_norm;
  // rounding floor of the finite-difference curvature
  double amax = 0;
  for (const auto& m : conn.A1) amax = std::max(amax, m.cwiseAbs().maxCoeff());
  for (const auto& m : conn.A2) amax = std::max(amax, m.cwiseAbs().maxCoeff());
  const double floor = 1e-12 * std::max(1.0, amax) / std::min(conn.hx(), conn.hy());
  const bool flat = rep.sup_curvature <= floor;
  std::vector<double> le, ld;
  for (const auto& loop : family) {
    ScalingRow row;
    row.ell = loop_length(loop);
    row.dist = holonomy(conn, loop, opt).dist_to_identity();
    // a flat connection leaves the ratio 0 by convention
    row.ratio = flat ? 0.0 : row.dist / (rep.sup_curvature * row.ell * row.ell);
    rep.max_ratio = std::max(rep.max_ratio, row.ratio);
    if (row.dist > 1e-14 && row.ell > 0) {
      le.push_back(std::log(row.ell));
      ld.push_back(std::log(row.dist));
    }
    rep.rows.push_back(row);
  }
  if (le.size() >= 2) {
    Eigen::VectorXd x = Eigen::Map<Eigen::VectorXd>(le.data(), static_cast<Eigen::Index>(le.size()));
    Eigen::VectorXd y = Eigen::Map<Eigen::VectorXd>(ld.data(), static_cast<Eigen::Index>(ld.size()));
    rep.fitted_exponent = quad::fit_slope(x, y);
  }
  return rep;
}

}  // namespace vortexlab::holonomy
