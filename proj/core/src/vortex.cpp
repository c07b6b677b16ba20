#include "vortexlab/vortex.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "vortexlab/fourier.hpp"

namespace vortexlab::vortex {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Fourth-order first derivative along the s direction (rows), one-sided at
// the boundary rows. Needs at least five rows.
template <typename Mat>
Mat d_s(const Mat& f, double h) {
  const Eigen::Index ns = f.rows();
  if (ns < 5) throw std::invalid_argument("d_s: need at least 5 rows");
  Mat out(ns, f.cols());
  const double ih = 1.0 / (12.0 * h);
  out.row(0) = (-25.0 * f.row(0) + 48.0 * f.row(1) - 36.0 * f.row(2) + 16.0 * f.row(3) -
                3.0 * f.row(4)) * ih;
  out.row(1) =
      (-3.0 * f.row(0) - 10.0 * f.row(1) + 18.0 * f.row(2) - 6.0 * f.row(3) + f.row(4)) * ih;
  for (Eigen::Index i = 2; i + 2 < ns; ++i)
    out.row(i) = (-f.row(i + 2) + 8.0 * f.row(i + 1) - 8.0 * f.row(i - 1) + f.row(i - 2)) * ih;
  out.row(ns - 2) = (3.0 * f.row(ns - 1) + 10.0 * f.row(ns - 2) - 18.0 * f.row(ns - 3) +
                     6.0 * f.row(ns - 4) - f.row(ns - 5)) * ih;
  out.row(ns - 1) = (25.0 * f.row(ns - 1) - 48.0 * f.row(ns - 2) + 36.0 * f.row(ns - 3) -
                     16.0 * f.row(ns - 4) + 3.0 * f.row(ns - 5)) * ih;
  return out;
}

// Spectral derivative along the periodic t direction (columns).
Eigen::MatrixXcd d_t(const Eigen::MatrixXcd& f) {
  Eigen::MatrixXcd out(f.rows(), f.cols());
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    Eigen::VectorXcd row = f.row(i).transpose();
    out.row(i) = fft::spectral_derivative(row).transpose();
  }
  return out;
}

Eigen::MatrixXd d_t(const Eigen::MatrixXd& f) {
  Eigen::MatrixXd out(f.rows(), f.cols());
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    Eigen::VectorXd row = f.row(i).transpose();
    out.row(i) = fft::spectral_derivative(row).transpose();
  }
  return out;
}

}  // namespace

void CylinderGrid::validate() const {
  if (nt < 16) throw std::invalid_argument("CylinderGrid: need nt >= 16");
  if (ns < 5) throw std::invalid_argument("CylinderGrid: need ns >= 5");
  if (s1 <= s0) throw std::invalid_argument("CylinderGrid: empty s range");
}

int CylinderGrid::s_index(double s) const {
  const double fi = (s - s0) / ds();
  const int i = static_cast<int>(std::lround(fi));
  if (i < 0 || i >= ns || std::abs(fi - i) > 1e-8)
    throw std::invalid_argument("CylinderGrid: s is not grid aligned");
  return i;
}

void VortexFields::validate() const {
  grid.validate();
  if (static_cast<int>(u.size()) != n || static_cast<int>(Phi.size()) != k ||
      static_cast<int>(Psi.size()) != k)
    throw std::invalid_argument("VortexFields: component counts");
  auto shape_ok = [&](auto const& m) { return m.rows() == grid.ns && m.cols() == grid.nt; };
  for (const auto& m : u)
    if (!shape_ok(m)) throw std::invalid_argument("VortexFields: u shape");
  for (const auto& m : Phi)
    if (!shape_ok(m)) throw std::invalid_argument("VortexFields: Phi shape");
  for (const auto& m : Psi)
    if (!shape_ok(m)) throw std::invalid_argument("VortexFields: Psi shape");
  if (!shape_ok(lam)) throw std::invalid_argument("VortexFields: lam shape");
  if (lam.minCoeff() <= 0) throw std::invalid_argument("VortexFields: lambda must be positive");
}

loops::PairLoop VortexFields::slice(int i) const {
  loops::PairLoop pair;
  pair.x.samples.resize(grid.nt, n);
  pair.xi.resize(grid.nt, k);
  for (int j = 0; j < grid.nt; ++j) {
    for (int c = 0; c < n; ++c) pair.x.samples(j, c) = u[c](i, j);
    for (int c = 0; c < k; ++c) pair.xi(j, c) = Psi[c](i, j);
  }
  return pair;
}

ResidualReport vortex_residual(const VortexFields& w, const TorusAction& act) {
  w.validate();
  if (act.n != w.n || act.k != w.k) throw std::invalid_argument("vortex_residual: action mismatch");
  const int ns = w.grid.ns, nt = w.grid.nt;

  std::vector<Eigen::MatrixXcd> dsu(w.n), dtu(w.n);
  for (int c = 0; c < w.n; ++c) {
    dsu[c] = d_s(w.u[c], w.grid.ds());
    dtu[c] = d_t(w.u[c]);
  }
  std::vector<Eigen::MatrixXd> dsPsi(w.k), dtPhi(w.k);
  for (int c = 0; c < w.k; ++c) {
    dsPsi[c] = d_s(w.Psi[c], w.grid.ds());
    dtPhi[c] = d_t(w.Phi[c]);
  }

  ResidualReport rep;
  rep.first.assign(w.n, Eigen::MatrixXcd(ns, nt));
  rep.second.assign(w.k, Eigen::MatrixXd(ns, nt));

  PointC z(w.n), vs(w.n), vt(w.n);
  AlgVec phi(w.k), psi(w.k);
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < nt; ++j) {
      for (int c = 0; c < w.n; ++c) z(c) = w.u[c](i, j);
      for (int c = 0; c < w.k; ++c) {
        phi(c) = w.Phi[c](i, j);
        psi(c) = w.Psi[c](i, j);
      }
      const PointC lphi = act.infinitesimal(z, phi);
      const PointC lpsi = act.infinitesimal(z, psi);
      double norm1sq = 0;
      for (int c = 0; c < w.n; ++c) {
        const std::complex<double> r =
            dsu[c](i, j) + lphi(c) + std::complex<double>(0, 1) * (dtu[c](i, j) + lpsi(c));
        rep.first[c](i, j) = r;
        norm1sq += std::norm(r);
      }
      const AlgVec mu = act.moment(z);
      const double l2 = w.lam(i, j) * w.lam(i, j);
      double norm2sq = 0;
      for (int c = 0; c < w.k; ++c) {
        const double r = dsPsi[c](i, j) - dtPhi[c](i, j) + l2 * mu(c);
        rep.second[c](i, j) = r;
        norm2sq += r * r;
      }
      rep.max_first = std::max(rep.max_first, std::sqrt(norm1sq));
      rep.max_second = std::max(rep.max_second, std::sqrt(norm2sq));
    }
  return rep;
}

EnergyDensities energy_densities(const VortexFields& w, const TorusAction& act) {
  w.validate();
  const int ns = w.grid.ns, nt = w.grid.nt;

  std::vector<Eigen::MatrixXcd> dsu(w.n), dtu(w.n);
  for (int c = 0; c < w.n; ++c) {
    dsu[c] = d_s(w.u[c], w.grid.ds());
    dtu[c] = d_t(w.u[c]);
  }
  std::vector<Eigen::MatrixXd> dsPsi(w.k), dtPhi(w.k);
  for (int c = 0; c < w.k; ++c) {
    dsPsi[c] = d_s(w.Psi[c], w.grid.ds());
    dtPhi[c] = d_t(w.Phi[c]);
  }

  EnergyDensities en;
  en.e_w.resize(ns, nt);
  en.et_w.resize(ns, nt);
  PointC z(w.n);
  AlgVec phi(w.k), psi(w.k);
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < nt; ++j) {
      for (int c = 0; c < w.n; ++c) z(c) = w.u[c](i, j);
      for (int c = 0; c < w.k; ++c) {
        phi(c) = w.Phi[c](i, j);
        psi(c) = w.Psi[c](i, j);
      }
      const PointC lphi = act.infinitesimal(z, phi);
      const PointC lpsi = act.infinitesimal(z, psi);
      double vs2 = 0, vt2 = 0, f2 = 0;
      for (int c = 0; c < w.n; ++c) {
        vs2 += std::norm(dsu[c](i, j) + lphi(c));
        vt2 += std::norm(dtu[c](i, j) + lpsi(c));
      }
      for (int c = 0; c < w.k; ++c) {
        const double fc = dsPsi[c](i, j) - dtPhi[c](i, j);
        f2 += fc * fc;
      }
      const double mu2 = act.moment(z).squaredNorm();
      const double l2 = w.lam(i, j) * w.lam(i, j);
      en.et_w(i, j) = vs2 + l2 * mu2;
      en.e_w(i, j) = 0.5 * ((vs2 + vt2) / l2 + f2 / (l2 * l2) + mu2);
    }
  return en;
}

double energy(const VortexFields& w, const TorusAction& act, double sa, double sb) {
  const int ia = w.grid.s_index(sa);
  const int ib = w.grid.s_index(sb);
  if (ib < ia) throw std::invalid_argument("energy: sb must be >= sa");
  const auto en = energy_densities(w, act);
  Eigen::VectorXd bar(w.grid.ns);
  for (int i = 0; i < w.grid.ns; ++i) bar(i) = en.et_w.row(i).mean();
  // tail integrals share the quadrature weights, so energies over adjacent
  // windows add exactly
  const Eigen::VectorXd tails = quad::tail_integrals(bar, w.grid.ds());
  return tails(ia) - tails(ib);
}

AreaFormReport check_area_form(const Eigen::MatrixXd& lam, const CylinderGrid& grid, double a,
                               double m_zero) {
  grid.validate();
  if (m_zero <= 0) throw std::invalid_argument("check_area_form: m_zero must be positive");
  if (lam.rows() != grid.ns || lam.cols() != grid.nt)
    throw std::invalid_argument("check_area_form: lambda shape");

  AreaFormReport rep;
  rep.lam_min = lam.minCoeff();
  rep.lower_bound = kTwoPi / (a * m_zero);
  rep.margin_lower = rep.lam_min - rep.lower_bound;

  const Eigen::MatrixXd inv1 = lam.cwiseInverse();
  const Eigen::MatrixXd inv2 = inv1.cwiseProduct(inv1);
  const Eigen::MatrixXd d1s = d_s(inv1, grid.ds());
  const Eigen::MatrixXd d1t = d_t(inv1);
  const Eigen::MatrixXd lap2 = d_s(d_s(inv2, grid.ds()), grid.ds()) + d_t(d_t(inv2));
  const Eigen::MatrixXd expr = d1s.cwiseProduct(d1s) + d1t.cwiseProduct(d1t) + lap2;
  rep.sup_grad_term = expr.maxCoeff();
  rep.upper_bound = 2.0 * m_zero * m_zero;
  rep.margin_upper = rep.upper_bound - rep.sup_grad_term;
  rep.admissible = rep.margin_lower >= -1e-12 && rep.margin_upper > 0;
  return rep;
}

// --- radial profile ---------------------------------------------------------

namespace {

using LD = long double;
constexpr LD kPiL = std::numbers::pi_v<LD>;

struct RState {
  LD rho, psi;
};

struct RadialFlow {
  LD k, lam;
  RState operator()(const RState& y) const {
    return {2 * kPiL * (k + y.psi) * y.rho, -lam * lam * kPiL * (1 - y.rho * y.rho)};
  }
};

RState rk4_step(const RadialFlow& f, const RState& y, LD h) {
  const RState k1 = f(y);
  const RState k2 = f({y.rho + h / 2 * k1.rho, y.psi + h / 2 * k1.psi});
  const RState k3 = f({y.rho + h / 2 * k2.rho, y.psi + h / 2 * k2.psi});
  const RState k4 = f({y.rho + h * k3.rho, y.psi + h * k3.psi});
  return {y.rho + h / 6 * (k1.rho + 2 * k2.rho + 2 * k3.rho + k4.rho),
          y.psi + h / 6 * (k1.psi + 2 * k2.psi + 2 * k3.psi + k4.psi)};
}

enum class Fate { up, down };

// Integrate from (rho0, psi0) and classify the exit: blow-up (up) or
// collapse (down). The step must match the output pass exactly: the
// bisection then lands on the stable manifold of the same discrete flow,
// and the unstable mode stays at the rounding floor for the whole profile.
Fate classify(const RadialFlow& f, LD rho0, LD psi0, LD s_cap, LD h) {
  RState y{rho0, psi0};
  const long steps = static_cast<long>(std::ceil(s_cap / h));
  for (long i = 0; i < steps; ++i) {
    y = rk4_step(f, y, h);
    if (y.rho > 2) return Fate::up;
    if (y.rho < 1e-8L) return Fate::down;
    if (y.rho < 1 && y.psi + f.k < -1e-15L) return Fate::down;
  }
  // still glued to the manifold: decide by the unstable coordinate
  const LD zu = (f.lam * (y.rho - 1) + (y.psi + f.k)) / (2 * f.lam);
  return zu >= 0 ? Fate::up : Fate::down;
}

// Hermite interpolation between profile nodes; slopes come from the flow, so
// the interpolant inherits the integrator's accuracy.
double hermite_eval(const RadialProfile& p, double s, bool want_rho) {
  const auto n = static_cast<Eigen::Index>(p.rho.size());
  if (n < 2) throw std::invalid_argument("RadialProfile: empty profile");
  const double smax = p.s_max();
  if (s < p.s0 - 1e-9 || s > smax + 1e-9)
    throw std::invalid_argument("RadialProfile: s outside the profile range");
  const double sc = std::clamp(s, p.s0, smax);
  const double fi = (sc - p.s0) / p.ds;
  const Eigen::Index i =
      std::clamp(static_cast<Eigen::Index>(std::floor(fi)), Eigen::Index(0), n - 2);
  const double u = fi - static_cast<double>(i);
  const RadialFlow flow{static_cast<LD>(p.k_deg), static_cast<LD>(p.lam0)};
  auto node = [&](Eigen::Index idx) {
    return RState{static_cast<LD>(p.rho[static_cast<std::size_t>(idx)]),
                  static_cast<LD>(p.psi[static_cast<std::size_t>(idx)])};
  };
  const RState y0 = node(i), y1 = node(i + 1);
  const RState m0 = flow(y0), m1 = flow(y1);
  const double u2 = u * u, u3 = u2 * u;
  const double h00 = 2 * u3 - 3 * u2 + 1, h10 = u3 - 2 * u2 + u;
  const double h01 = -2 * u3 + 3 * u2, h11 = u3 - u2;
  if (want_rho)
    return h00 * static_cast<double>(y0.rho) + h10 * p.ds * static_cast<double>(m0.rho) +
           h01 * static_cast<double>(y1.rho) + h11 * p.ds * static_cast<double>(m1.rho);
  return h00 * static_cast<double>(y0.psi) + h10 * p.ds * static_cast<double>(m0.psi) +
         h01 * static_cast<double>(y1.psi) + h11 * p.ds * static_cast<double>(m1.psi);
}

}  // namespace

double RadialProfile::rho_at(double s) const { return hermite_eval(*this, s, true); }

double RadialProfile::psi_at(double s) const { return hermite_eval(*this, s, false); }

double RadialProfile::slice_action(double s) const {
  const double r = rho_at(s);
  const double p = psi_at(s);
  return kPi * (1 - r * r) * (p + k_deg);
}

double RadialProfile::energy_density(double s) const {
  const double r = rho_at(s);
  const double p = psi_at(s);
  const double drho = kTwoPi * (k_deg + p) * r;
  const double m = kPi * (1 - r * r);
  return drho * drho + lam0 * lam0 * m * m;
}

RadialProfile solve_radial(int k_deg, double lam0, double s_max, const ShootingOptions& opt) {
  if (k_deg < 1) throw std::invalid_argument("solve_radial: vortex degree must be >= 1");
  if (lam0 <= 0) throw std::invalid_argument("solve_radial: lambda must be positive");
  if (opt.rho0 <= 0 || opt.rho0 > 1) throw std::invalid_argument("solve_radial: rho0 in (0, 1]");
  if (s_max <= 0) throw std::invalid_argument("solve_radial: s_max must be positive");

  const RadialFlow flow{static_cast<LD>(k_deg), static_cast<LD>(lam0)};
  const LD rho0 = static_cast<LD>(opt.rho0);
  const LD kL = static_cast<LD>(k_deg);
  const LD s_cap = static_cast<LD>(std::max(s_max, 3.0)) + 12.0L / static_cast<LD>(lam0) + 5.0L;

  // one step size for bisection and output
  const double base = opt.fixed_step > 0 ? opt.fixed_step : std::min(5e-4, 5e-4 / lam0);
  const int substeps = std::max(1, static_cast<int>(std::lround(opt.grid_ds / base)));
  const LD h = static_cast<LD>(opt.grid_ds) / substeps;

  LD psi0;
  if (std::abs(rho0 - 1.0L) < 1e-14L) {
    psi0 = -kL;  // already at the fixed point
  } else {
    // bracket: psi(0) = -k collapses; scan upward until blow-up
    LD lo = -kL;
    if (classify(flow, rho0, lo, s_cap, h) != Fate::down)
      throw std::runtime_error("solve_radial: no bracket, psi(0) = -k did not collapse (UP)");
    LD hi = -kL;
    LD step = 0.5L;
    bool found = false;
    std::ostringstream pattern;
    for (int i = 0; i < 16; ++i) {
      const LD cand = -kL + step;
      const Fate f = classify(flow, rho0, cand, s_cap, h);
      pattern << (f == Fate::up ? 'U' : 'D');
      if (f == Fate::up) {
        hi = cand;
        found = true;
        break;
      }
      lo = cand;
      step *= 2;
    }
    if (!found)
      throw std::runtime_error("solve_radial: no bracket found, sign pattern " + pattern.str());

    // bisect through the requested tolerance and on to the machine limit;
    // the extra digits keep the unstable mode quiet for longer
    const LD eps = std::numeric_limits<LD>::epsilon();
    const LD floor_width =
        std::min(static_cast<LD>(opt.bracket_tol), eps) * std::max<LD>(1.0L, std::abs(lo) + std::abs(hi));
    for (int it = 0; it < 200 && hi - lo > floor_width; ++it) {
      const LD mid = (lo + hi) / 2;
      if (mid <= lo || mid >= hi) break;
      if (classify(flow, rho0, mid, s_cap, h) == Fate::up)
        hi = mid;
      else
        lo = mid;
    }
    psi0 = (lo + hi) / 2;
  }

  // dense pass on the output grid, handing over to the linear stable flow
  RadialProfile prof;
  prof.k_deg = k_deg;
  prof.lam0 = lam0;
  prof.s0 = 0;
  prof.ds = opt.grid_ds;
  const int n_nodes = static_cast<int>(std::lround(s_max / opt.grid_ds)) + 1;
  prof.rho.resize(static_cast<std::size_t>(n_nodes));
  prof.psi.resize(static_cast<std::size_t>(n_nodes));

  RState y{rho0, psi0};
  const LD lamL = static_cast<LD>(lam0);
  int spliced_at = -1;
  for (int i = 0; i < n_nodes; ++i) {
    prof.rho[static_cast<std::size_t>(i)] = static_cast<double>(y.rho);
    prof.psi[static_cast<std::size_t>(i)] = static_cast<double>(y.psi);
    const LD drho = y.rho - 1, dpsi = y.psi + kL;
    if (std::sqrt(drho * drho + dpsi * dpsi) < static_cast<LD>(opt.handover)) {
      spliced_at = i;
      break;
    }
    if (y.rho > 2)
      throw std::runtime_error("solve_radial: trajectory blew up after bisection");
    for (int sub = 0; sub < substeps; ++sub) y = rk4_step(flow, y, h);
  }

  if (spliced_at < 0) {
    prof.splice_s = s_max;  // never entered the handover ball
    const LD drho = y.rho - 1, dpsi = y.psi + kL;
    prof.terminal_distance = static_cast<double>(std::sqrt(drho * drho + dpsi * dpsi));
    return prof;
  }

  // kill the unstable coordinate and continue with the exact linear decay
  prof.splice_s = prof.s0 + spliced_at * prof.ds;
  const LD drho = y.rho - 1, dpsi = y.psi + kL;
  const LD zs = (lamL * drho - dpsi) / (2 * lamL);
  for (int i = spliced_at; i < n_nodes; ++i) {
    const LD ds_from_splice = static_cast<LD>(i - spliced_at) * static_cast<LD>(prof.ds);
    const LD decay = zs * std::exp(-2 * kPiL * lamL * ds_from_splice);
    prof.rho[static_cast<std::size_t>(i)] = static_cast<double>(1 + decay);
    prof.psi[static_cast<std::size_t>(i)] = static_cast<double>(-kL - lamL * decay);
  }
  const LD final_decay = zs * std::exp(-2 * kPiL * lamL * static_cast<LD>(s_max - prof.splice_s));
  prof.terminal_distance =
      static_cast<double>(std::abs(final_decay) * std::sqrt(1 + lamL * lamL));
  return prof;
}

VortexFields embed_radial(const RadialProfile& profile, const CylinderGrid& grid) {
  grid.validate();
  if (grid.s0 < profile.s0 - 1e-12 || grid.s1 > profile.s_max() + 1e-12)
    throw std::invalid_argument("embed_radial: grid leaves the profile range");
  VortexFields w;
  w.grid = grid;
  w.n = 1;
  w.k = 1;
  w.u.assign(1, Eigen::MatrixXcd(grid.ns, grid.nt));
  w.Phi.assign(1, Eigen::MatrixXd::Zero(grid.ns, grid.nt));
  w.Psi.assign(1, Eigen::MatrixXd(grid.ns, grid.nt));
  w.lam = Eigen::MatrixXd::Constant(grid.ns, grid.nt, profile.lam0);
  for (int i = 0; i < grid.ns; ++i) {
    const double r = profile.rho_at(grid.s(i));
    const double p = profile.psi_at(grid.s(i));
    for (int j = 0; j < grid.nt; ++j) {
      w.u[0](i, j) = std::polar(r, kTwoPi * profile.k_deg * grid.t(j));
      w.Psi[0](i, j) = p;
    }
  }
  return w;
}

EnergyActionReport energy_action_check(const VortexFields& w, const TorusAction& act,
                                       double s_lo, double s_hi, double delta_gate) {
  const int ilo = w.grid.s_index(s_lo);
  const int ihi = w.grid.s_index(s_hi);
  EnergyActionReport rep;
  rep.E = energy(w, act, s_lo, s_hi);

  const auto pl = w.slice(ilo);
  const auto ph = w.slice(ihi);
  const auto alo = loops::invariant_action_full(pl, act, delta_gate);
  const auto ahi = loops::invariant_action_full(ph, act, delta_gate);
  rep.action_lo = alo.value;
  rep.action_hi = ahi.value;
  rep.delta_action = alo.value - ahi.value;
  rep.slices_admissible = !alo.delta_warning && !ahi.delta_warning;
  const double scale = std::max({std::abs(rep.E), std::abs(rep.delta_action), 1e-300});
  rep.rel_error = std::abs(rep.E - rep.delta_action) / scale;

  // boundary-term route: usual slice actions plus the <mu, Psi> terms
  auto mu_psi_mean = [&](const loops::PairLoop& pair) {
    Eigen::VectorXd vals(pair.N());
    for (int j = 0; j < pair.N(); ++j)
      vals(j) = act.moment(pair.x.at(j)).dot(pair.xi.row(j).transpose());
    return quad::periodic_mean(vals);
  };
  rep.boundary_route = loops::flat_action(pl.x) - loops::flat_action(ph.x) + mu_psi_mean(pl) -
                       mu_psi_mean(ph);
  rep.boundary_rel_error = std::abs(rep.E - rep.boundary_route) / scale;
  return rep;
}

PointwiseBoundReport pointwise_bound_check(const VortexFields& w, const TorusAction& act,
                                           double s, double t, double r) {
  w.validate();
  if (s - r < w.grid.s0 - 1e-9 || s + r > w.grid.s1 + 1e-9)
    throw std::invalid_argument("pointwise_bound_check: disc leaves the grid");
  const auto en = energy_densities(w, act);

  // bilinear sample of et_w at (s, t), periodic in t
  const double fs = (s - w.grid.s0) / w.grid.ds();
  int is = std::clamp(static_cast<int>(std::floor(fs)), 0, w.grid.ns - 2);
  const double us = fs - is;
  const double tm = t - std::floor(t);
  const double ft = tm / w.grid.dt();
  int jt = static_cast<int>(std::floor(ft)) % w.grid.nt;
  const double ut = ft - std::floor(ft);
  const int jt1 = (jt + 1) % w.grid.nt;
  PointwiseBoundReport rep;
  rep.et_at_z = (1 - us) * (1 - ut) * en.et_w(is, jt) + us * (1 - ut) * en.et_w(is + 1, jt) +
                (1 - us) * ut * en.et_w(is, jt1) + us * ut * en.et_w(is + 1, jt1);

  double disc = 0;
  for (int i = 0; i < w.grid.ns; ++i)
    for (int j = 0; j < w.grid.nt; ++j) {
      const double dsv = w.grid.s(i) - s;
      double dtv = std::abs(w.grid.t(j) - tm);
      dtv = std::min(dtv, 1.0 - dtv);
      if (dsv * dsv + dtv * dtv <= r * r) disc += en.et_w(i, j);
    }
  disc *= w.grid.ds() * w.grid.dt();
  rep.rhs = (32.0 / kPi) * disc;
  rep.margin = rep.rhs - rep.et_at_z;
  rep.pass = rep.et_at_z <= rep.rhs + 1e-12;
  return rep;
}

MeanValueReport mean_value_check(const DiscFunction& disc) {
  const int m = disc.m();
  if (m < 9 || disc.f.cols() != m) throw std::invalid_argument("mean_value_check: bad grid");
  const double h = disc.h();
  const double r = disc.r;
  auto x = [&](int i) { return -r + i * h; };
  auto inside = [&](int i, int j) { return x(i) * x(i) + x(j) * x(j) < r * r; };

  MeanValueReport rep;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (inside(i, j) && disc.f(i, j) < 0)
        throw std::invalid_argument("mean_value_check: f must be nonnegative on the disc");

  double integral = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (inside(i, j)) integral += disc.f(i, j);
  integral *= h * h;
  rep.integral = integral;

  double C = 0;
  for (int i = 1; i + 1 < m; ++i)
    for (int j = 1; j + 1 < m; ++j) {
      if (!inside(i, j)) continue;
      const double fij = disc.f(i, j);
      if (fij <= 1e-12) continue;
      const double lap = (disc.f(i + 1, j) + disc.f(i - 1, j) + disc.f(i, j + 1) +
                          disc.f(i, j - 1) - 4.0 * fij) / (h * h);
      C = std::max(C, -lap / (fij * fij));
    }
  rep.C = C;
  rep.smallness_bound = C > 0 ? kPi / (8.0 * C) : std::numeric_limits<double>::infinity();
  rep.hypothesis_met = integral < rep.smallness_bound;
  const int c = (m - 1) / 2;
  rep.center_value = disc.f(c, c);
  rep.conclusion_bound = (8.0 / (kPi * r * r)) * integral;
  rep.conclusion_holds = rep.center_value <= rep.conclusion_bound + 1e-12;
  return rep;
}

namespace {

DecayFitResult fit_decay(const Eigen::VectorXd& s_nodes, const Eigen::VectorXd& et,
                         const Eigen::VectorXd& E, double s1, double s2) {
  std::vector<double> xs, ye, yE;
  for (Eigen::Index i = 0; i < s_nodes.size(); ++i) {
    if (s_nodes(i) < s1 - 1e-12 || s_nodes(i) > s2 + 1e-12) continue;
    if (et(i) <= 0 || E(i) <= 0)
      throw std::runtime_error("decay_fit: density vanishes inside the window");
    xs.push_back(s_nodes(i));
    ye.push_back(std::log(et(i)));
    yE.push_back(std::log(E(i)));
  }
  if (xs.size() < 10) throw std::runtime_error("decay_fit: window under-resolved (fewer than 10 nodes)");
  DecayFitResult res;
  res.nodes = static_cast<int>(xs.size());
  Eigen::Map<Eigen::VectorXd> X(xs.data(), static_cast<Eigen::Index>(xs.size()));
  Eigen::Map<Eigen::VectorXd> Ye(ye.data(), static_cast<Eigen::Index>(ye.size()));
  Eigen::Map<Eigen::VectorXd> YE(yE.data(), static_cast<Eigen::Index>(yE.size()));
  res.slope_et = quad::fit_slope(X, Ye);
  res.slope_E = quad::fit_slope(X, YE);
  return res;
}

}  // namespace

DecayFitResult decay_fit(const RadialProfile& profile, double s1, double s2) {
  const auto n = static_cast<Eigen::Index>(profile.rho.size());
  Eigen::VectorXd s_nodes(n), et(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    s_nodes(i) = profile.s0 + static_cast<double>(i) * profile.ds;
    et(i) = profile.energy_density(s_nodes(i));
  }
  const Eigen::VectorXd tails = quad::tail_integrals(et, profile.ds);
  const double tail_value = profile.slice_action(profile.s_max());
  Eigen::VectorXd E = tails.array() + tail_value;
  return fit_decay(s_nodes, et, E, s1, s2);
}

DecayFitResult decay_fit(const VortexFields& w, const TorusAction& act, double s1, double s2) {
  const auto en = energy_densities(w, act);
  Eigen::VectorXd s_nodes(w.grid.ns), et(w.grid.ns);
  for (int i = 0; i < w.grid.ns; ++i) {
    s_nodes(i) = w.grid.s(i);
    et(i) = en.et_w.row(i).mean();
  }
  const Eigen::VectorXd tails = quad::tail_integrals(et, w.grid.ds());
  // tail value beyond the grid: the invariant action of the top slice
  const double tail_value =
      loops::invariant_action(w.slice(w.grid.ns - 1), act);
  Eigen::VectorXd E = tails.array() + tail_value;
  return fit_decay(s_nodes, et, E, s1, s2);
}

WitnessResult holomorphic_witness(double a, double s_lo, double s_hi, int count, double fs_scale) {
  if (a <= 0) throw std::invalid_argument("holomorphic_witness: a must be positive");
  if (count < 2) throw std::invalid_argument("holomorphic_witness: need at least 2 samples");
  WitnessResult res;
  res.s.resize(count);
  res.du_norm.resize(count);
  const double rate = kTwoPi / a;
  for (int i = 0; i < count; ++i) {
    const double s = s_lo + (s_hi - s_lo) * i / (count - 1);
    res.s(i) = s;
    // (2 pi / a) * (scale/2) * sech((2 pi / a) s); stable at large s
    res.du_norm(i) = rate * 0.5 * fs_scale / std::cosh(rate * s);
  }
  res.fitted_slope = quad::fit_slope(res.s, res.du_norm.array().log().matrix());
  return res;
}

}  // namespace vortexlab::vortex
