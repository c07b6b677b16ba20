#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "vortexlab/lie_geom.hpp"
#include "vortexlab/rng.hpp"

using namespace vortexlab;
using geom::AlgVec;
using geom::PointC;

namespace {
constexpr double kPi = std::numbers::pi;

PointC point1(std::complex<double> z) {
  PointC p(1);
  p(0) = z;
  return p;
}

AlgVec alg1(double x) {
  AlgVec v(1);
  v(0) = x;
  return v;
}

PointC random_point(int n, rng::Rng& gen) {
  PointC z(n);
  for (int j = 0; j < n; ++j) z(j) = std::complex<double>(gen.normal(), gen.normal());
  return z;
}
}  // namespace

TEST_CASE("infinitesimal action of the rotation model") {
  const auto act = geom::TorusAction::standard_rotation();
  const PointC z = point1({2.0, 0.0});

  const PointC v = act.infinitesimal(z, alg1(1.0));
  CHECK(v(0).real() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(v(0).imag() == doctest::Approx(4 * kPi));
  CHECK(v.norm() == doctest::Approx(4 * kPi));

  CHECK(act.infinitesimal(z, alg1(0.0)).norm() == 0.0);
  CHECK(act.infinitesimal(point1({0.0, 0.0}), alg1(2.7)).norm() == 0.0);

  // linearity in xi
  rng::Rng gen(7);
  const double a = gen.uniform(-2, 2), b = gen.uniform(-2, 2);
  const PointC lhs = act.infinitesimal(z, alg1(a + b));
  const PointC rhs = act.infinitesimal(z, alg1(a)) + act.infinitesimal(z, alg1(b));
  CHECK((lhs - rhs).norm() < 1e-14);
}

TEST_CASE("moment map values") {
  const auto act = geom::TorusAction::standard_rotation();
  CHECK(act.moment(point1({2.0, 0.0}))(0) == doctest::Approx(-3 * kPi));
  CHECK(act.moment(point1(std::polar(1.0, 0.81)))(0) == doctest::Approx(0.0).epsilon(1e-13));

  Eigen::MatrixXd W(1, 2);
  W << 1, 1;
  Eigen::VectorXd c(2);
  c << 1, 0;
  const geom::TorusAction two(2, 1, W, c);
  PointC z(2);
  z << std::complex<double>(1, 0), std::complex<double>(0, 1);
  CHECK(two.moment(z)(0) == doctest::Approx(-kPi));
}

TEST_CASE("moment map is equivariant and Hamiltonian") {
  Eigen::MatrixXd W(2, 3);
  W << 1, -2, 0, 0, 1, 3;
  Eigen::VectorXd c(3);
  c << 1.0, -0.5, 2.0;
  const geom::TorusAction act(3, 2, W, c);
  rng::Rng gen(99);

  for (int trial = 0; trial < 25; ++trial) {
    const PointC z = random_point(3, gen);
    AlgVec theta(2);
    theta << gen.uniform(-1, 1), gen.uniform(-1, 1);
    // rotations preserve |z_j|, so the moment map is exactly invariant
    CHECK((act.moment(act.rotate(theta, z)) - act.moment(z)).norm() < 1e-12);
  }

  // d<mu, xi>(z)[v] = omega0(L_z xi, v); the moment map entries are
  // quadratic, so the central difference is exact up to rounding
  for (int trial = 0; trial < 10; ++trial) {
    const PointC z = random_point(3, gen);
    const PointC v = random_point(3, gen);
    AlgVec xi(2);
    xi << gen.uniform(-1, 1), gen.uniform(-1, 1);
    const double h = 1e-3;
    const double fd =
        (act.moment(z + h * v).dot(xi) - act.moment(z - h * v).dot(xi)) / (2 * h);
    CHECK(fd == doctest::Approx(geom::symplectic(act.infinitesimal(z, xi), v)).epsilon(1e-9));
  }

  // the finite-difference order is measured on a nonlinear composite
  const PointC z = random_point(3, gen);
  const PointC v = random_point(3, gen);
  AlgVec xi(2);
  xi << 0.7, -0.4;
  const double exact =
      std::cos(act.moment(z).dot(xi)) * geom::symplectic(act.infinitesimal(z, xi), v);
  auto fd_error = [&](double h) {
    const double fd =
        (std::sin(act.moment(z + h * v).dot(xi)) - std::sin(act.moment(z - h * v).dot(xi))) /
        (2 * h);
    return std::abs(fd - exact);
  };
  const double e1 = fd_error(1e-2), e2 = fd_error(5e-3), e3 = fd_error(2.5e-3);
  const double slope = 0.5 * (std::log2(e1 / e2) + std::log2(e2 / e3));
  CHECK(slope == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("vertical projection") {
  const auto act = geom::TorusAction::standard_rotation();
  const PointC z = point1({2.0, 0.0});

  CHECK((geom::project_vertical(act, z, point1({0, 1})).vertical - point1({0, 1})).norm() < 1e-13);
  CHECK(geom::project_vertical(act, z, point1({1, 0})).vertical.norm() < 1e-13);
  const auto mixed = geom::project_vertical(act, z, point1({3, 4}));
  CHECK((mixed.vertical - point1({0, 4})).norm() < 1e-12);
  CHECK((mixed.horizontal - point1({3, 0})).norm() < 1e-12);

  // z = 0 is a fixed point: degenerate rank reported
  CHECK(geom::project_vertical(act, point1({0, 0}), point1({1, 1})).degenerate);
  CHECK_FALSE(mixed.degenerate);

  // idempotent and self-adjoint on a bigger model
  Eigen::MatrixXd W(2, 3);
  W << 2, 1, 0, -1, 0, 1;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(3);
  const geom::TorusAction big(3, 2, W, c);
  rng::Rng gen(5);
  for (int trial = 0; trial < 20; ++trial) {
    const PointC zz = random_point(3, gen);
    const PointC v = random_point(3, gen);
    const PointC w = random_point(3, gen);
    const PointC pv = geom::project_vertical(big, zz, v).vertical;
    const PointC ppv = geom::project_vertical(big, zz, pv).vertical;
    CHECK((ppv - pv).norm() < 1e-12 * std::max(1.0, pv.norm()));
    const PointC pw = geom::project_vertical(big, zz, w).vertical;
    CHECK(geom::metric(pv, w) == doctest::Approx(geom::metric(v, pw)).epsilon(1e-12));
    // the complement is orthogonal to every orbit direction
    AlgVec xi(2);
    xi << gen.uniform(-1, 1), gen.uniform(-1, 1);
    const PointC horiz = v - pv;
    CHECK(std::abs(geom::metric(horiz, big.infinitesimal(zz, xi))) <
          1e-10 * std::max(1.0, v.norm()));
  }
}

TEST_CASE("minimal action norm m_X") {
  const auto act = geom::TorusAction::standard_rotation();
  std::vector<PointC> single = {point1({2.0, 0.0})};
  CHECK(geom::min_action_norm(act, single) == doctest::Approx(4 * kPi));

  std::vector<PointC> circle;
  for (int i = 0; i < 64; ++i) circle.push_back(point1(std::polar(1.0, 2 * kPi * i / 64)));
  CHECK(geom::min_action_norm(act, circle) == doctest::Approx(2 * kPi));

  std::vector<PointC> with_origin = circle;
  with_origin.push_back(point1({0, 0}));
  CHECK(geom::min_action_norm(act, with_origin) == doctest::Approx(0.0).epsilon(1e-14));

  // min over a union is the min of the mins, exactly
  std::vector<PointC> all = single;
  all.insert(all.end(), circle.begin(), circle.end());
  CHECK(geom::min_action_norm(act, all) ==
        std::min(geom::min_action_norm(act, single), geom::min_action_norm(act, circle)));
}

TEST_CASE("m over shrinking moment sublevels converges to the zero-level value") {
  const auto act = geom::TorusAction::standard_rotation();
  // mu^{-1}(B_delta) is the annulus 1 - delta/pi <= |z|^2 <= 1 + delta/pi;
  // the infimum of |L_z xi| there is 2 pi sqrt(1 - delta/pi)
  auto m_of = [&](double delta) {
    std::vector<PointC> pts;
    for (double f : {-1.0, -0.5, 0.0, 0.5, 1.0})
      for (int i = 0; i < 32; ++i)
        pts.push_back(point1(std::polar(std::sqrt(1.0 + f * delta / kPi), 2 * kPi * i / 32)));
    return geom::min_action_norm(act, pts);
  };
  const double m1 = m_of(0.5), m2 = m_of(0.1), m3 = m_of(0.01);
  CHECK(m1 < m2);
  CHECK(m2 < m3);
  CHECK(m3 < 2 * kPi);
  CHECK(m3 > 2 * kPi - 0.011);
}

TEST_CASE("hypothesis (H) decision") {
  using geom::Tristate;
  {
    const auto rep = geom::check_hypothesis_h(geom::TorusAction::standard_rotation(), kPi / 2);
    CHECK(rep.compact == Tristate::yes);
    CHECK(rep.free_on_zero_level == Tristate::yes);
  }
  {
    const geom::TorusAction act(1, 1, 2 * Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Ones(1));
    const auto rep = geom::check_hypothesis_h(act, 0.5);
    CHECK(rep.compact == Tristate::yes);
    CHECK(rep.free_on_zero_level == Tristate::no);  // weight 2 has a Z/2 stabilizer
  }
  {
    const geom::TorusAction act(1, 1, Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Zero(1));
    const auto rep = geom::check_hypothesis_h(act, 0.5);
    CHECK(rep.free_on_zero_level == Tristate::no);  // zero level is the origin
  }
  {
    Eigen::MatrixXd W(1, 2);
    W << 1, -1;
    const geom::TorusAction act(2, 1, W, Eigen::VectorXd::Ones(2));
    CHECK(geom::check_hypothesis_h(act, 0.5).compact == Tristate::no);
  }
  {
    Eigen::MatrixXd W(2, 2);
    W << 1, 0, 0, 1;
    const geom::TorusAction act(2, 2, W, Eigen::VectorXd::Ones(2));
    const auto rep = geom::check_hypothesis_h(act, 0.5);
    CHECK(rep.compact == Tristate::undecidable);
    CHECK(rep.sampled_fallback_used);
  }
}

TEST_CASE("torus log, canonical representative and distance") {
  CHECK(geom::torus_log(alg1(0.3))(0) == doctest::Approx(0.3));
  CHECK(geom::torus_dist(alg1(0.3)) == doctest::Approx(0.3));
  CHECK(geom::torus_log(alg1(0.8))(0) == doctest::Approx(-0.2));
  CHECK(geom::torus_dist(alg1(0.8)) == doctest::Approx(0.2));
  CHECK(geom::torus_log(alg1(1.0))(0) == doctest::Approx(0.0).epsilon(1e-15));
  // the tie at 1/2 resolves to -1/2
  CHECK(geom::torus_log(alg1(0.5))(0) == doctest::Approx(-0.5));
  CHECK(geom::torus_log(alg1(-0.5))(0) == doctest::Approx(-0.5));
  CHECK(geom::torus_canonical(alg1(-0.25))(0) == doctest::Approx(0.75));

  // exp(log) = id on classes
  rng::Rng gen(3);
  for (int i = 0; i < 20; ++i) {
    const double x = gen.uniform(-3, 3);
    const double reduced = geom::torus_log(alg1(x))(0);
    CHECK(std::abs(x - reduced - std::round(x - reduced)) < 1e-12);
    CHECK(std::abs(reduced) <= 0.5);
  }
}

TEST_CASE("unit quaternion exponential, log and distance") {
  rng::Rng gen(11);
  for (int i = 0; i < 25; ++i) {
    Eigen::Vector3d xi(gen.normal(), gen.normal(), gen.normal());
    xi *= gen.uniform(0.0, 3.0) / xi.norm();  // |xi| < pi
    const auto q = geom::quat_exp(xi);
    CHECK((geom::quat_log(q) - xi).norm() < 1e-12);
    CHECK(geom::quat_dist(geom::Quat::identity(), q) == doctest::Approx(xi.norm()).epsilon(1e-12));
  }
  // cut locus
  CHECK_THROWS_AS(geom::quat_log(geom::Quat{-1, 0, 0, 0}), std::domain_error);
  // bracket is the commutator of pure quaternions
  const Eigen::Vector3d e1(1, 0, 0), e2(0, 1, 0);
  CHECK((geom::quat_bracket(e1, e2) - Eigen::Vector3d(0, 0, 2)).norm() < 1e-15);
  // bi-invariance of the distance
  const auto a = geom::quat_exp({0.3, -0.2, 0.9});
  const auto b = geom::quat_exp({-0.1, 0.5, 0.2});
  const auto g = geom::quat_exp({1.1, 0.4, -0.7});
  CHECK(geom::quat_dist(g * a, g * b) == doctest::Approx(geom::quat_dist(a, b)).epsilon(1e-12));
  CHECK(geom::quat_dist(a * g, b * g) == doctest::Approx(geom::quat_dist(a, b)).epsilon(1e-12));
}

TEST_CASE("metric, symplectic form and J are compatible") {
  rng::Rng gen(17);
  for (int i = 0; i < 10; ++i) {
    const PointC u = random_point(3, gen), v = random_point(3, gen);
    CHECK(geom::metric(u, v) == doctest::Approx(geom::symplectic(u, geom::apply_j(v))).epsilon(1e-13));
    CHECK(geom::symplectic(u, v) == doctest::Approx(-geom::symplectic(v, u)).epsilon(1e-13));
  }
}

TEST_CASE("action validation rejects bad weight data") {
  CHECK_THROWS_AS(geom::TorusAction(1, 1, 0.5 * Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Ones(1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(geom::TorusAction(1, 1, Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Ones(1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(geom::TorusAction(2, 1, Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Ones(2)),
                  std::invalid_argument);
}
