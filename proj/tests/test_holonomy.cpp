#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "vortexlab/holonomy.hpp"
#include "vortexlab/rng.hpp"
#include "vortexlab/serialize.hpp"

using namespace vortexlab;
using holonomy::ConnectionChart;
using holonomy::Group;
using loops::DiscreteLoop;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2 * std::numbers::pi;

// A = (B/2)(x dy - y dx): constant curvature B, linear components so the
// bilinear chart reproduces it exactly.
ConnectionChart field_chart(double B, int nodes = 65) {
  return ConnectionChart::from_function(
      Group::torus, 1, -1, 1, -1, 1, nodes, nodes,
      [B](double x, double y, Eigen::VectorXd& a1, Eigen::VectorXd& a2) {
        a1.resize(1);
        a2.resize(1);
        a1(0) = -0.5 * B * y;
        a2(0) = 0.5 * B * x;
      });
}

DiscreteLoop circle_loop(double r, int N, std::complex<double> center = {0, 0}, int deg = 1) {
  return DiscreteLoop::circle(r, deg, N, center);
}

// quintic ramp with vanishing first and second derivatives at the ends
double smoother(double u) { return u * u * u * (6 * u * u - 15 * u + 10); }

Eigen::Vector3d rodrigues(const Eigen::Vector3d& v, const Eigen::Vector3d& axis, double angle) {
  const Eigen::Vector3d n = axis.normalized();
  return v * std::cos(angle) + n.cross(v) * std::sin(angle) +
         n * (n.dot(v)) * (1 - std::cos(angle));
}
}  // namespace

TEST_CASE("curvature of the rotational field and of pure gauges") {
  const auto chart = field_chart(0.7);
  const auto curv = holonomy::curvature(chart);
  CHECK(curv.sup_norm == doctest::Approx(0.7).epsilon(1e-12));
  for (int i = 0; i < chart.nx; i += 13)
    for (int j = 0; j < chart.ny; j += 13)
      CHECK(curv.F12[0](i, j) == doctest::Approx(0.7).epsilon(1e-12));

  // abelian pure gauge: d^2 = 0 at second order
  auto gauge_chart = [&](int nodes) {
    return ConnectionChart::from_function(
        Group::torus, 1, -1, 1, -1, 1, nodes, nodes,
        [](double x, double y, Eigen::VectorXd& a1, Eigen::VectorXd& a2) {
          a1.resize(1);
          a2.resize(1);
          a1(0) = std::cos(x) * std::cos(y);
          a2(0) = -std::sin(x) * std::sin(y);  // both are d of sin(x)cos(y)
        });
  };
  const double f1 = holonomy::curvature(gauge_chart(65)).sup_norm;
  const double f2 = holonomy::curvature(gauge_chart(129)).sup_norm;
  CHECK(f1 < 1e-3);
  CHECK(f1 / f2 == doctest::Approx(4.0).epsilon(0.3));

  // constant noncommuting quaternion fields: curvature is the bracket
  const auto qchart = ConnectionChart::from_function(
      Group::quaternion, 3, -1, 1, -1, 1, 17, 17,
      [](double, double, Eigen::VectorXd& a1, Eigen::VectorXd& a2) {
        a1 = Eigen::Vector3d(0.3, 0, 0);
        a2 = Eigen::Vector3d(0, 0.5, 0);
      });
  const auto qcurv = holonomy::curvature(qchart);
  const Eigen::Vector3d expect = geom::quat_bracket({0.3, 0, 0}, {0, 0.5, 0});
  CHECK(qcurv.F12[2](8, 8) == doctest::Approx(expect(2)).epsilon(1e-12));
  CHECK(qcurv.sup_norm == doctest::Approx(0.3).epsilon(1e-12));  // 2 * 0.3 * 0.5
}

TEST_CASE("holonomy of flat and constant-curvature abelian connections") {
  // flat: gradient of a bilinear potential, reproduced exactly by the chart
  const auto flat = ConnectionChart::from_function(
      Group::torus, 1, -1, 1, -1, 1, 33, 33,
      [](double x, double y, Eigen::VectorXd& a1, Eigen::VectorXd& a2) {
        a1.resize(1);
        a2.resize(1);
        a1(0) = 0.8 * y + 0.2;  // d(0.8 x y + 0.2 x - 0.5 y)
        a2(0) = 0.8 * x - 0.5;
      });
  const auto h0 = holonomy::holonomy(flat, circle_loop(0.6, 512));
  CHECK(h0.dist_to_identity() < 1e-10);

  // B-field circles: class of -B pi r^2
  const double B = 0.5;
  const auto chart = field_chart(B);
  for (double r : {0.5, 0.25, 0.1}) {
    const auto h = holonomy::holonomy(chart, circle_loop(r, 1024));
    CHECK(h.lift(0) == doctest::Approx(-B * kPi * r * r).epsilon(1e-9));
    CHECK(h.dist_to_identity() == doctest::Approx(B * kPi * r * r).epsilon(1e-9));
  }

  // reversal inverts
  const auto loop = circle_loop(0.4, 1024, {0.2, 0.1});
  const auto h = holonomy::holonomy(chart, loop);
  const auto hr = holonomy::holonomy(chart, loop.reversed());
  CHECK(std::abs(h.lift(0) + hr.lift(0)) < 1e-10);
}

TEST_CASE("abelian ODE holonomy agrees with the circulation exponential") {
  // smooth non-linear abelian field
  const auto chart = ConnectionChart::from_function(
      Group::torus, 1, -1.2, 1.2, -1.2, 1.2, 257, 257,
      [](double x, double y, Eigen::VectorXd& a1, Eigen::VectorXd& a2) {
        a1.resize(1);
        a2.resize(1);
        a1(0) = 0.4 * std::sin(2 * x) * y + 0.1 * y * y;
        a2(0) = 0.3 * std::cos(x + y) + 0.2 * x;
      });
  for (int N : {256, 512}) {
    const auto loop = circle_loop(0.7, N, {0.1, -0.2});
    const auto h = holonomy::holonomy(chart, loop);
    // circulation along the same bilinear field, dense midpoint quadrature
    const int M = 1 << 15;
    double circ = 0;
    for (int i = 0; i < M; ++i) {
      const double t = (i + 0.5) / M;
      const double x = 0.1 + 0.7 * std::cos(kTwoPi * t);
      const double y = -0.2 + 0.7 * std::sin(kTwoPi * t);
      const double vx = -0.7 * kTwoPi * std::sin(kTwoPi * t);
      const double vy = 0.7 * kTwoPi * std::cos(kTwoPi * t);
      circ += (chart.eval1(x, y)(0) * vx + chart.eval2(x, y)(0) * vy) / M;
    }
    CHECK(h.lift(0) == doctest::Approx(-circ).epsilon(1e-8));
  }
}

TEST_CASE("holonomy of a concatenation is the ordered product") {
  // noncommuting quaternion connection, bilinear components
  rng::Rng gen(314);
  Eigen::Matrix<double, 3, 4> c1, c2;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) {
      c1(i, j) = 0.6 * gen.normal();
      c2(i, j) = 0.6 * gen.normal();
    }
  const auto chart = ConnectionChart::from_function(
      Group::quaternion, 3, -1.5, 1.5, -1.5, 1.5, 65, 65,
      [&](double x, double y, Eigen::VectorXd& a1, Eigen::VectorXd& a2) {
        a1.resize(3);
        a2.resize(3);
        for (int i = 0; i < 3; ++i) {
          a1(i) = c1(i, 0) + c1(i, 1) * x + c1(i, 2) * y + c1(i, 3) * x * y;
          a2(i) = c2(i, 0) + c2(i, 1) * x + c2(i, 2) * y + c2(i, 3) * x * y;
        }
      });

  // two circles sharing the basepoint (0,0), C^2 reparameterized so the
  // concatenation stays smooth at the junction
  const int N = 1024;
  auto alpha = [&](double t) { return std::complex<double>(0.5, 0) * (std::polar(1.0, kTwoPi * t) - 1.0); };
  auto beta = [&](double t) { return std::complex<double>(-0.3, 0) * (std::polar(1.0, kTwoPi * t) - 1.0); };
  const auto la = DiscreteLoop::from_function(N, 1, [&](double t) {
    Eigen::VectorXcd p(1);
    p(0) = alpha(smoother(t));
    return p;
  });
  const auto lb = DiscreteLoop::from_function(N, 1, [&](double t) {
    Eigen::VectorXcd p(1);
    p(0) = beta(smoother(t));
    return p;
  });
  const auto lcat = DiscreteLoop::from_function(2 * N, 1, [&](double t) {
    Eigen::VectorXcd p(1);
    p(0) = t < 0.5 ? alpha(smoother(2 * t)) : beta(smoother(2 * t - 1));
    return p;
  });

  const auto ha = holonomy::holonomy(chart, la);
  const auto hb = holonomy::holonomy(chart, lb);
  const auto hcat = holonomy::holonomy(chart, lcat);
  const auto product = hb.compose(ha);  // later path multiplies on the left
  CHECK(geom::quat_dist(hcat.quat, product.quat) < 1e-8);
  // the opposite order differs for a noncommuting connection
  CHECK(geom::quat_dist(hcat.quat, ha.compose(hb).quat) > 1e-4);
}

TEST_CASE("gauge covariance of holonomy and curvature") {
  // abelian chart route: subtracting a bilinear gradient changes nothing
  {
    const auto chart = field_chart(0.8, 129);
    auto gauged = chart;
    for (int i = 0; i < chart.nx; ++i)
      for (int j = 0; j < chart.ny; ++j) {
        const double x = chart.x0 + i * chart.hx();
        const double y = chart.y0 + j * chart.hy();
        gauged.A1[0](i, j) -= 0.7 * y + 0.3;  // d(0.7 x y + 0.3 x - 0.1 y)
        gauged.A2[0](i, j) -= 0.7 * x - 0.1;
      }
    const auto loop = circle_loop(0.5, 1024, {0.1, 0.2});
    const auto h = holonomy::holonomy(chart, loop);
    const auto hg = holonomy::holonomy(gauged, loop);
    CHECK(std::abs(h.dist_to_identity() - hg.dist_to_identity()) < 1e-10);
  }

  // quaternion analytic route: A' = g A g^{-1} - (dg) g^{-1} with
  // g = exp(phi(x,y) n), fixed axis n
  const Eigen::Vector3d axis = Eigen::Vector3d(0.2, -1.0, 0.5).normalized();
  auto phi = [](double x, double y) { return 0.4 * x - 0.3 * y + 0.25 * x * y; };
  auto dphi = [](double x, double y) { return Eigen::Vector2d(0.4 + 0.25 * y, -0.3 + 0.25 * x); };
  auto baseA = [](double x, double y, Eigen::VectorXd& a1, Eigen::VectorXd& a2) {
    a1 = Eigen::Vector3d(0.5 + 0.2 * x, 0.3 * y, -0.2 + 0.1 * x * y);
    a2 = Eigen::Vector3d(0.1 * y, -0.4 + 0.25 * x, 0.3);
  };
  holonomy::ConnectionEval evalA = [&](double x, double y, Eigen::VectorXd& a1, Eigen::VectorXd& a2) {
    baseA(x, y, a1, a2);
  };
  holonomy::ConnectionEval evalAg = [&](double x, double y, Eigen::VectorXd& a1, Eigen::VectorXd& a2) {
    Eigen::VectorXd b1, b2;
    baseA(x, y, b1, b2);
    // conjugation by exp(phi n) rotates the algebra by angle 2 phi about n
    const Eigen::Vector3d r1 = rodrigues(b1, axis, 2 * phi(x, y));
    const Eigen::Vector3d r2 = rodrigues(b2, axis, 2 * phi(x, y));
    const Eigen::Vector2d grad = dphi(x, y);
    a1 = r1 - grad(0) * axis;
    a2 = r2 - grad(1) * axis;
  };

  const auto loop = circle_loop(0.6, 2048, {0.1, 0.0});
  const auto h = holonomy::holonomy(Group::quaternion, 3, evalA, loop);
  const auto hg = holonomy::holonomy(Group::quaternion, 3, evalAg, loop);
  // base point of the loop
  const double x0 = 0.1 + 0.6, y0 = 0.0;
  const auto g0 = geom::quat_exp(phi(x0, y0) * axis);
  const auto conj = (g0 * h.quat) * g0.inverse();
  CHECK(geom::quat_dist(hg.quat, conj) < 1e-8);
  CHECK(std::abs(hg.dist_to_identity() - h.dist_to_identity()) < 1e-8);

  // the transformed curvature has the same pointwise norm (checks the
  // bracket normalization through the nonabelian term)
  const auto chartA = ConnectionChart::from_function(Group::quaternion, 3, -1, 1, -1, 1, 257, 257,
                                                     evalA);
  const auto chartAg = ConnectionChart::from_function(Group::quaternion, 3, -1, 1, -1, 1, 257, 257,
                                                      evalAg);
  const auto cA = holonomy::curvature(chartA);
  const auto cAg = holonomy::curvature(chartAg);
  double worst = 0;
  for (int i = 2; i < 255; i += 9)
    for (int j = 2; j < 255; j += 9) {
      Eigen::Vector3d f, fg;
      for (int c = 0; c < 3; ++c) {
        f(c) = cA.F12[c](i, j);
        fg(c) = cAg.F12[c](i, j);
      }
      worst = std::max(worst, std::abs(f.norm() - fg.norm()));
    }
  CHECK(worst < 5e-3 * cA.sup_norm);
}

TEST_CASE("holonomy bound scaling") {
  // constant curvature: the ratio is exactly 1/(4 pi)
  const auto chart = field_chart(0.5, 129);
  std::vector<DiscreteLoop> fam;
  for (double r : {0.5, 0.25, 0.1}) fam.push_back(circle_loop(r, 1024));
  const auto rep = holonomy::holonomy_bound_scaling(chart, fam);
  for (const auto& row : rep.rows)
    CHECK(row.ratio == doctest::Approx(1.0 / (4 * kPi)).epsilon(1e-7));
  CHECK(rep.fitted_exponent == doctest::Approx(2.0).epsilon(1e-6));

  // flat connections leave zero distances and zero ratios
  const auto flat = ConnectionChart::from_function(
      Group::torus, 1, -1, 1, -1, 1, 33, 33,
      [](double, double, Eigen::VectorXd& a1, Eigen::VectorXd& a2) {
        a1 = Eigen::VectorXd::Constant(1, 0.3);
        a2 = Eigen::VectorXd::Constant(1, -0.2);
      });
  const auto frep = holonomy::holonomy_bound_scaling(flat, fam);
  for (const auto& row : frep.rows) {
    CHECK(row.dist < 1e-10);
    CHECK(row.ratio == 0.0);
  }

  // random quaternion connection: exponent 2 over dyadic radii. The constant
  // parts dominate, so the curvature at the loop centers stays well away
  // from zero and the quadratic regime is clean.
  rng::Rng gen(2718);
  Eigen::Matrix<double, 3, 4> c1, c2;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) {
      c1(i, j) = (j == 0 ? 0.4 : 0.15) * gen.normal();
      c2(i, j) = (j == 0 ? 0.4 : 0.15) * gen.normal();
    }
  const auto qchart = ConnectionChart::from_function(
      Group::quaternion, 3, -1, 1, -1, 1, 129, 129,
      [&](double x, double y, Eigen::VectorXd& a1, Eigen::VectorXd& a2) {
        a1.resize(3);
        a2.resize(3);
        for (int i = 0; i < 3; ++i) {
          a1(i) = c1(i, 0) + c1(i, 1) * x + c1(i, 2) * y + c1(i, 3) * x * y;
          a2(i) = c2(i, 0) + c2(i, 1) * x + c2(i, 2) * y + c2(i, 3) * x * y;
        }
      });
  std::vector<DiscreteLoop> qfam;
  for (double r : {0.2, 0.1, 0.05, 0.025}) qfam.push_back(circle_loop(r, 1024));
  const auto qrep = holonomy::holonomy_bound_scaling(qchart, qfam);
  CHECK(qrep.fitted_exponent == doctest::Approx(2.0).epsilon(0.05));
  CHECK(qrep.max_ratio < 10.0);
}

TEST_CASE("connection chart JSON round trip") {
  const auto chart = field_chart(0.7, 17);
  nlohmann::json j = chart;
  CHECK(j.at("A1").at(0).size() == 17 * 17);  // flattened components
  const auto back = j.get<ConnectionChart>();
  CHECK(back.nx == chart.nx);
  CHECK((back.A1[0] - chart.A1[0]).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.A2[0] - chart.A2[0]).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.group == Group::torus);
}

TEST_CASE("holonomy rejects bad input") {
  const auto chart = field_chart(0.5, 33);
  CHECK_THROWS_AS(holonomy::holonomy(chart, circle_loop(2.0, 256)), std::invalid_argument);
  // coarse loop against a strong field: step increment rejection
  const auto strong = field_chart(400.0, 33);
  CHECK_THROWS_AS(holonomy::holonomy(strong, circle_loop(0.9, 16)), std::runtime_error);
}
