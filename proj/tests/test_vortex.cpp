#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "vortexlab/fourier.hpp"
#include "vortexlab/serialize.hpp"
#include "vortexlab/vortex.hpp"

using namespace vortexlab;
using vortex::CylinderGrid;
using vortex::RadialProfile;
using vortex::VortexFields;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2 * std::numbers::pi;

const geom::TorusAction kAct = geom::TorusAction::standard_rotation();

VortexFields constant_solution(const CylinderGrid& grid, double lam) {
  VortexFields w;
  w.grid = grid;
  w.n = 1;
  w.k = 1;
  w.u.assign(1, Eigen::MatrixXcd::Constant(grid.ns, grid.nt, {1.0, 0.0}));
  w.Phi.assign(1, Eigen::MatrixXd::Zero(grid.ns, grid.nt));
  w.Psi.assign(1, Eigen::MatrixXd::Zero(grid.ns, grid.nt));
  w.lam = Eigen::MatrixXd::Constant(grid.ns, grid.nt, lam);
  return w;
}
}  // namespace

TEST_CASE("grid and field validation") {
  CylinderGrid g{0.0, 1.0, 4, 16};
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);  // ns too small
  g = CylinderGrid{0.0, 1.0, 16, 8};
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);  // nt too small
  g = CylinderGrid{0.0, 1.0, 33, 16};
  CHECK_NOTHROW(g.validate());
  CHECK(g.s_index(0.5) == 16);
  CHECK_THROWS_AS(g.s_index(0.512), std::invalid_argument);

  auto w = constant_solution(g, 1.0);
  w.lam(3, 4) = -1;
  CHECK_THROWS_AS(w.validate(), std::invalid_argument);
}

TEST_CASE("radial shooting solver") {
  const auto prof = vortex::solve_radial(1, 1.0, 6.0, {});
  CHECK(prof.terminal_distance < 1e-8);
  CHECK(prof.splice_s > 1.0);
  CHECK(prof.splice_s < 4.0);

  // monotone approach to the fixed point (1, -1)
  for (std::size_t i = 1; i < prof.rho.size(); ++i) {
    CHECK(prof.rho[i] >= prof.rho[i - 1] - 1e-12);
    CHECK(prof.psi[i] <= prof.psi[i - 1] + 1e-12);
    CHECK(prof.rho[i] <= 1.0 + 1e-12);
    CHECK(prof.psi[i] >= -1.0 - 1e-12);
  }
  CHECK(prof.rho.front() == doctest::Approx(0.1));
  CHECK(prof.rho.back() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(prof.psi.back() == doctest::Approx(-1.0).epsilon(1e-9));

  // profile starting at the fixed point stays there
  vortex::ShootingOptions fixed;
  fixed.rho0 = 1.0;
  const auto flat = vortex::solve_radial(1, 1.0, 2.0, fixed);
  for (double r : flat.rho) CHECK(r == doctest::Approx(1.0).epsilon(1e-12));
  for (double p : flat.psi) CHECK(p == doctest::Approx(-1.0).epsilon(1e-12));

  CHECK_THROWS_AS(vortex::solve_radial(0, 1.0, 4.0, {}), std::invalid_argument);
  CHECK_THROWS_AS(vortex::solve_radial(1, -1.0, 4.0, {}), std::invalid_argument);
}

TEST_CASE("radial integrator converges at fourth order") {
  auto run = [&](double step) {
    vortex::ShootingOptions opt;
    opt.fixed_step = step;
    opt.grid_ds = 0.04;
    opt.handover = 1e-9;  // keep the comparison inside the integrated range
    return vortex::solve_radial(1, 1.0, 2.0, opt);
  };
  const auto p1 = run(0.02), p2 = run(0.01), p3 = run(0.005);
  const int idx = 25;  // s = 1
  const double d12 = std::abs(p1.rho[idx] - p2.rho[idx]);
  const double d23 = std::abs(p2.rho[idx] - p3.rho[idx]);
  CHECK(d12 / d23 > 8.0);
  CHECK(d12 / d23 < 40.0);
}

TEST_CASE("embedded radial solution solves the equations") {
  const auto prof = vortex::solve_radial(1, 1.0, 4.0, {});
  auto residual_at = [&](int ns, int nt) {
    const CylinderGrid grid{0.5, 3.5, ns, nt};
    const auto w = vortex::embed_radial(prof, grid);
    const auto rep = vortex::vortex_residual(w, kAct);
    return std::max(rep.max_first, rep.max_second);
  };
  const double r1 = residual_at(151, 32);
  const double r2 = residual_at(301, 32);
  CHECK(r1 < 1e-4);
  CHECK(r1 / r2 > 3.5);  // at least second order under refinement

  // fixed-point profile embeds to the constant solution: zero residual
  vortex::ShootingOptions fixed;
  fixed.rho0 = 1.0;
  const auto flat = vortex::solve_radial(1, 0.7, 2.0, fixed);
  const auto w0 = vortex::embed_radial(flat, CylinderGrid{0.0, 2.0, 41, 16});
  const auto rep0 = vortex::vortex_residual(w0, kAct);
  CHECK(rep0.max_first < 1e-12);
  CHECK(rep0.max_second < 1e-12);

  // random fields are far from solutions
  auto noise = constant_solution(CylinderGrid{0.0, 1.0, 33, 16}, 1.0);
  for (int i = 0; i < 33; ++i)
    for (int j = 0; j < 16; ++j) noise.u[0](i, j) += std::polar(0.3, 2.0 * i + 3.0 * j);
  CHECK(vortex::vortex_residual(noise, kAct).max_first > 0.1);
}

TEST_CASE("constant solution at the zero level") {
  const CylinderGrid grid{0.0, 2.0, 65, 32};
  const auto w = constant_solution(grid, 0.8);
  const auto rep = vortex::vortex_residual(w, kAct);
  CHECK(rep.max_first == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(rep.max_second == doctest::Approx(0.0).epsilon(1e-14));
  const auto en = vortex::energy_densities(w, kAct);
  CHECK(en.et_w.cwiseAbs().maxCoeff() < 1e-14);
  CHECK(en.e_w.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("energy densities of the radial solution") {
  const auto prof = vortex::solve_radial(1, 1.0, 5.0, {});
  const CylinderGrid grid{1.0, 4.0, 301, 32};
  const auto w = vortex::embed_radial(prof, grid);
  const auto en = vortex::energy_densities(w, kAct);

  for (int i = 10; i < grid.ns; i += 40) {
    const double s = grid.s(i);
    const double expect = prof.energy_density(s);
    // the s-derivative of rho loses relative accuracy deep in the tail where
    // rho - 1 approaches rounding, so the tolerance widens with s
    const double rel = s <= 2.5 ? 1e-5 : 5e-2;
    CHECK(en.et_w(i, 0) == doctest::Approx(expect).epsilon(rel));
    // constant in t up to rounding
    CHECK((en.et_w.row(i).maxCoeff() - en.et_w.row(i).minCoeff()) <
          1e-10 * std::abs(expect) + 1e-15);
  }

  // on-shell the two densities agree after the area-form weight:
  // e_w lam^2 = et_w pointwise, so the two energy integrals coincide
  for (int i = 5; i + 5 < grid.ns; i += 23)
    for (int j = 0; j < grid.nt; j += 7) {
      const double weighted = en.e_w(i, j) * w.lam(i, j) * w.lam(i, j);
      CHECK(std::abs(weighted - en.et_w(i, j)) <= 1e-6 * std::max(1e-12, en.et_w(i, j)) + 1e-18);
    }

  // tail energy matches the closed-form slice action
  const double E = vortex::energy(w, kAct, 1.0, 4.0);
  const double closed = prof.slice_action(1.0) - prof.slice_action(4.0);
  CHECK(E == doctest::Approx(closed).epsilon(1e-5));

  // additivity is exact by construction of the tail quadrature
  const double e1 = vortex::energy(w, kAct, 1.0, 2.0);
  const double e2 = vortex::energy(w, kAct, 2.0, 4.0);
  CHECK(e1 + e2 == doctest::Approx(E).epsilon(1e-14));

  // E(s) is non-increasing
  double prev = vortex::energy(w, kAct, 1.0, 4.0);
  for (double s : {1.5, 2.0, 2.5, 3.0}) {
    const double tail = vortex::energy(w, kAct, s, 4.0);
    CHECK(tail <= prev + 1e-15);
    prev = tail;
  }
}

TEST_CASE("admissible area forms") {
  const CylinderGrid grid{0.0, 2.0, 65, 32};
  const double m_zero = 2 * kPi;
  {
    const auto rep = vortex::check_area_form(Eigen::MatrixXd::Constant(65, 32, 1.0), grid, 1.0, m_zero);
    CHECK(rep.margin_lower == doctest::Approx(0.0).epsilon(1e-12));  // equality at lambda = 1
    CHECK(rep.sup_grad_term == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(rep.upper_bound == doctest::Approx(8 * kPi * kPi));
    CHECK(rep.admissible);
  }
  {
    const auto rep = vortex::check_area_form(Eigen::MatrixXd::Constant(65, 32, 0.5), grid, 1.0, m_zero);
    CHECK_FALSE(rep.admissible);
    CHECK(rep.margin_lower < 0);
  }
  {
    const auto rep = vortex::check_area_form(Eigen::MatrixXd::Constant(65, 32, 10.0), grid, 1.0, m_zero);
    CHECK(rep.margin_lower == doctest::Approx(9.0));
    CHECK(rep.admissible);
  }
}

TEST_CASE("energy-action identity on the radial vortex") {
  const auto prof = vortex::solve_radial(1, 1.0, 4.0, {});
  const CylinderGrid grid{1.0, 3.0, 256, 256};
  const auto w = vortex::embed_radial(prof, grid);
  const auto rep = vortex::energy_action_check(w, kAct, 1.0, 3.0);

  CHECK(rep.rel_error < 1e-4);
  CHECK(rep.boundary_rel_error < 1e-4);
  CHECK(rep.slices_admissible);
  // the slice actions match the closed form
  CHECK(rep.action_lo == doctest::Approx(prof.slice_action(1.0)).epsilon(1e-6));
  CHECK(rep.action_hi == doctest::Approx(prof.slice_action(3.0)).epsilon(1e-4));

  // degenerate window, on a grid whose nodes include s = 2
  const auto w2 = vortex::embed_radial(prof, vortex::CylinderGrid{1.0, 3.0, 257, 64});
  const auto same = vortex::energy_action_check(w2, kAct, 2.0, 2.0);
  CHECK(std::abs(same.E) < 1e-15);
  CHECK(std::abs(same.delta_action) < 1e-15);

  // the identity holds on every tested sub-cylinder
  for (auto [lo, hi] : {std::pair{1.0, 2.0}, std::pair{1.5, 2.5}, std::pair{2.0, 3.0}}) {
    const auto sub = vortex::energy_action_check(w2, kAct, lo, hi);
    CHECK(sub.rel_error < 1e-4);
  }

  // constant solution: zero equals zero
  const auto w0 = constant_solution(CylinderGrid{0.0, 1.0, 33, 32}, 1.0);
  const auto rep0 = vortex::energy_action_check(w0, kAct, 0.0, 1.0);
  CHECK(std::abs(rep0.E) < 1e-14);
  CHECK(std::abs(rep0.delta_action) < 1e-14);
}

TEST_CASE("pointwise bound on the energy density") {
  const auto prof = vortex::solve_radial(1, 1.0, 5.0, {});
  const CylinderGrid grid{0.5, 4.5, 257, 64};
  const auto w = vortex::embed_radial(prof, grid);
  for (double s : {1.0, 1.5, 2.0, 2.5, 3.0}) {
    for (double t : {0.0, 0.31, 0.62}) {
      const auto rep = vortex::pointwise_bound_check(w, kAct, s, t, 0.5);
      CHECK(rep.pass);
      CHECK(rep.margin > 0);
    }
  }
  // constant solution: 0 <= 0
  const auto w0 = constant_solution(CylinderGrid{0.0, 2.0, 65, 32}, 1.0);
  CHECK(vortex::pointwise_bound_check(w0, kAct, 1.0, 0.2).pass);
  // disc must stay inside the grid
  CHECK_THROWS_AS(vortex::pointwise_bound_check(w, kAct, 0.6, 0.0), std::invalid_argument);
  // random fields: the check evaluates without asserting the bound
  auto noise = constant_solution(CylinderGrid{0.0, 2.0, 65, 32}, 1.0);
  for (int i = 0; i < 65; ++i)
    for (int j = 0; j < 32; ++j) noise.u[0](i, j) += std::polar(0.2, 1.0 * i * j);
  CHECK_NOTHROW(vortex::pointwise_bound_check(noise, kAct, 1.0, 0.3));
}

TEST_CASE("mean value inequality") {
  // constants satisfy the conclusion with factor eight to spare
  vortex::DiscFunction f;
  f.r = 1.0;
  f.f = Eigen::MatrixXd::Constant(41, 41, 0.7);
  const auto rep = vortex::mean_value_check(f);
  CHECK(rep.C == 0.0);
  CHECK(rep.hypothesis_met);
  CHECK(rep.conclusion_holds);
  CHECK(rep.center_value == doctest::Approx(0.7));

  // a small bump on a positive floor meets the smallness hypothesis
  vortex::DiscFunction g;
  g.r = 1.0;
  g.f.resize(81, 81);
  for (int i = 0; i < 81; ++i)
    for (int j = 0; j < 81; ++j) {
      const double x = -1.0 + 2.0 * i / 80.0, y = -1.0 + 2.0 * j / 80.0;
      g.f(i, j) = 1.0 + 2e-3 * std::exp(-((x * x + y * y) / 0.09));
    }
  const auto repg = vortex::mean_value_check(g);
  CHECK(repg.C > 0);
  CHECK(repg.hypothesis_met);
  CHECK(repg.conclusion_holds);

  // negative values are rejected
  vortex::DiscFunction bad = f;
  bad.f(20, 20) = -0.1;
  CHECK_THROWS_AS(vortex::mean_value_check(bad), std::invalid_argument);
}

TEST_CASE("decay rates of the radial family") {
  const auto prof = vortex::solve_radial(1, 1.0, 6.0, {});
  const auto fit = vortex::decay_fit(prof, 2.0, 4.0);
  CHECK(fit.slope_et == doctest::Approx(-4 * kPi).epsilon(0.01));
  CHECK(fit.slope_E == doctest::Approx(fit.slope_et).epsilon(0.05));

  // doubling lambda doubles the rate
  const auto prof2 = vortex::solve_radial(1, 2.0, 3.0, {});
  const auto fit2 = vortex::decay_fit(prof2, 0.5, 1.5);
  CHECK(fit2.slope_et == doctest::Approx(-8 * kPi).epsilon(0.01));

  // the grid-field route agrees inside the resolved region
  const CylinderGrid grid{1.0, 3.0, 513, 32};
  const auto w = vortex::embed_radial(prof, grid);
  const auto fitw = vortex::decay_fit(w, kAct, 1.2, 2.8);
  CHECK(fitw.slope_et == doctest::Approx(-4 * kPi).epsilon(0.02));

  // under-resolved window
  CHECK_THROWS_AS(vortex::decay_fit(prof, 2.0, 2.005), std::runtime_error);
}

TEST_CASE("energy decay obeys the differential inequality") {
  const auto prof = vortex::solve_radial(1, 1.0, 6.0, {});
  const double ds = prof.ds;
  const auto n = static_cast<Eigen::Index>(prof.rho.size());
  Eigen::VectorXd et(n);
  for (Eigen::Index i = 0; i < n; ++i) et(i) = prof.energy_density(prof.s0 + ds * static_cast<double>(i));
  const Eigen::VectorXd tails = quad::tail_integrals(et, ds);
  const Eigen::VectorXd E = tails.array() + prof.slice_action(prof.s_max());
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    const double s = prof.s0 + ds * static_cast<double>(i);
    if (s < 2.0 || s > prof.s_max() - 1.0) continue;
    const double dE = (E(i + 1) - E(i - 1)) / (2 * ds);
    CHECK(dE <= -(4 * kPi - 0.5) * E(i));
  }
}

TEST_CASE("energies are invariant under grid gauge transformations") {
  const auto prof = vortex::solve_radial(1, 1.0, 4.0, {});
  const CylinderGrid grid{1.0, 3.0, 101, 64};
  const auto w = vortex::embed_radial(prof, grid);
  const auto base = vortex::energy_densities(w, kAct);

  // t-dependent rotation with the compensating Psi shift
  Eigen::VectorXd theta(grid.nt);
  for (int j = 0; j < grid.nt; ++j)
    theta(j) = 0.2 * std::sin(kTwoPi * grid.t(j)) + 0.1 * std::cos(2 * kTwoPi * grid.t(j));
  const Eigen::VectorXd theta_dot = fft::spectral_derivative(theta);

  auto moved = w;
  for (int i = 0; i < grid.ns; ++i)
    for (int j = 0; j < grid.nt; ++j) {
      moved.u[0](i, j) *= std::polar(1.0, kTwoPi * theta(j));
      moved.Psi[0](i, j) -= theta_dot(j);
    }
  const auto after = vortex::energy_densities(moved, kAct);
  CHECK((after.et_w - base.et_w).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((after.e_w - base.e_w).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("holomorphic witness profile") {
  const auto res = vortex::holomorphic_witness(1.0, 3.0, 6.0, 200);
  CHECK(res.fitted_slope == doctest::Approx(-2 * kPi).epsilon(0.01));
  const auto res2 = vortex::holomorphic_witness(2.0, 6.0, 12.0, 200);
  CHECK(res2.fitted_slope == doctest::Approx(-kPi).epsilon(0.01));

  // s = 0 is the symmetric maximum
  const auto peak = vortex::holomorphic_witness(1.0, -1.0, 1.0, 201);
  Eigen::Index arg;
  peak.du_norm.maxCoeff(&arg);
  CHECK(peak.s(arg) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(peak.du_norm(arg) == doctest::Approx(2 * kPi).epsilon(1e-12));
}

TEST_CASE("vortex data JSON round trips") {
  const auto prof = vortex::solve_radial(1, 1.0, 2.0, {});
  nlohmann::json jp = prof;
  const auto back = jp.get<RadialProfile>();
  CHECK(back.rho == prof.rho);
  CHECK(back.psi == prof.psi);
  CHECK(back.k_deg == prof.k_deg);

  const CylinderGrid grid{0.0, 1.0, 17, 16};
  const auto w = constant_solution(grid, 1.3);
  nlohmann::json jw = w;
  const auto wback = jw.get<VortexFields>();
  CHECK(wback.grid.ns == 17);
  CHECK((wback.u[0] - w.u[0]).cwiseAbs().maxCoeff() == 0.0);
  CHECK(wback.lam(0, 0) == 1.3);
}
