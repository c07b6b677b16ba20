#include "vortexlab/loops.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "vortexlab/fourier.hpp"
#include "vortexlab/rng.hpp"

namespace vortexlab::loops {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::VectorXd row(const Eigen::MatrixXd& m, int i) { return m.row(i).transpose(); }
}  // namespace

Eigen::MatrixXcd DiscreteLoop::derivative() const { return fft::spectral_derivative_cols(samples); }

DiscreteLoop DiscreteLoop::reversed() const {
  DiscreteLoop out;
  out.samples.resize(samples.rows(), samples.cols());
  const int n = N();
  for (int i = 0; i < n; ++i) out.samples.row(i) = samples.row((n - i) % n);
  return out;
}

DiscreteLoop DiscreteLoop::from_function(int N, int n, const std::function<PointC(double)>& f) {
  DiscreteLoop out;
  out.samples.resize(N, n);
  for (int i = 0; i < N; ++i) out.samples.row(i) = f(static_cast<double>(i) / N).transpose();
  out.validate();
  return out;
}

DiscreteLoop DiscreteLoop::circle(double r, int deg, int N, Complex center) {
  return from_function(N, 1, [&](double t) {
    PointC z(1);
    z(0) = center + r * std::polar(1.0, kTwoPi * deg * t);
    return z;
  });
}

DiscreteLoop DiscreteLoop::constant(const PointC& z, int N) {
  DiscreteLoop out;
  out.samples = z.transpose().replicate(N, 1);
  out.validate();
  return out;
}

void DiscreteLoop::validate() const {
  if (N() < 8) throw std::invalid_argument("DiscreteLoop: need N >= 8 samples");
}

PairLoop PairLoop::constant(const PointC& z, const AlgVec& xi0, int N) {
  PairLoop out;
  out.x = DiscreteLoop::constant(z, N);
  out.xi = xi0.transpose().replicate(N, 1);
  return out;
}

PairLoop PairLoop::zero_xi(DiscreteLoop loop, int k) {
  PairLoop out;
  out.xi = Eigen::MatrixXd::Zero(loop.N(), k);
  out.x = std::move(loop);
  return out;
}

void PairLoop::validate() const {
  x.validate();
  if (xi.rows() != x.samples.rows()) throw std::invalid_argument("PairLoop: sample counts differ");
}

Eigen::MatrixXd GaugeLoop::derivative() const {
  const int n = N();
  Eigen::MatrixXd periodic(n, rank());
  for (int i = 0; i < n; ++i)
    periodic.row(i) = eta.row(i) - (static_cast<double>(i) / n) * winding.transpose();
  Eigen::MatrixXd der = fft::spectral_derivative_cols(periodic);
  der.rowwise() += winding.transpose();
  return der;
}

GaugeLoop GaugeLoop::inverse() const {
  GaugeLoop out;
  out.eta = -eta;
  out.winding = -winding;
  return out;
}

GaugeLoop GaugeLoop::compose(const GaugeLoop& other) const {
  if (other.N() != N() || other.rank() != rank())
    throw std::invalid_argument("GaugeLoop::compose: shape mismatch");
  GaugeLoop out;
  out.eta = eta + other.eta;
  out.winding = winding + other.winding;
  return out;
}

GaugeLoop GaugeLoop::constant(const AlgVec& theta, int N) {
  GaugeLoop out;
  out.eta = theta.transpose().replicate(N, 1);
  out.winding = Eigen::VectorXd::Zero(theta.size());
  return out;
}

GaugeLoop GaugeLoop::winding_loop(const Eigen::VectorXi& m, int N) {
  GaugeLoop out;
  out.eta.resize(N, m.size());
  for (int i = 0; i < N; ++i) out.eta.row(i) = (static_cast<double>(i) / N) * m.cast<double>().transpose();
  out.winding = m.cast<double>();
  return out;
}

GaugeLoop GaugeLoop::from_function(int N, int k, const std::function<AlgVec(double)>& lift) {
  GaugeLoop out;
  out.eta.resize(N, k);
  for (int i = 0; i < N; ++i) out.eta.row(i) = lift(static_cast<double>(i) / N).transpose();
  AlgVec close = lift(1.0) - lift(0.0);
  out.winding.resize(k);
  for (int a = 0; a < k; ++a) {
    out.winding(a) = std::round(close(a));
    if (std::abs(close(a) - out.winding(a)) > 1e-8)
      throw std::invalid_argument("GaugeLoop: lift closes on a non-integer winding");
  }
  return out;
}

void GaugeLoop::validate() const {
  const int n = N();
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd next = (i + 1 < n) ? row(eta, i + 1) : (row(eta, 0) + winding);
    if ((next - row(eta, i)).cwiseAbs().maxCoeff() >= 0.5)
      throw std::runtime_error("GaugeLoop: lift step >= 1/2, increase the sample count");
  }
}

Lengths lengths(const PairLoop& pair, const TorusAction& act) {
  pair.validate();
  if (pair.xi.cols() != act.k || pair.x.dim() != act.n)
    throw std::invalid_argument("lengths: pair does not match the action");
  const int n = pair.N();
  const Eigen::MatrixXcd xdot = pair.x.derivative();
  Eigen::VectorXd speed(n), twist(n), horiz(n);
  Lengths out;
  for (int i = 0; i < n; ++i) {
    const PointC z = pair.x.at(i);
    const PointC v = xdot.row(i).transpose();
    speed(i) = v.norm();
    twist(i) = (v + act.infinitesimal(z, row(pair.xi, i))).norm();
    auto proj = geom::project_vertical(act, z, v);
    out.degenerate_warning = out.degenerate_warning || proj.degenerate;
    horiz(i) = proj.horizontal.norm();
  }
  out.ell = quad::periodic_mean(speed);
  out.twisted = quad::periodic_mean(twist);
  out.quotient = quad::periodic_mean(horiz);
  return out;
}

double lp_norm(const Eigen::VectorXd& pointwise_norms, double p) {
  if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
  if (std::isinf(p)) return pointwise_norms.cwiseAbs().maxCoeff();
  const Eigen::VectorXd powed = pointwise_norms.cwiseAbs().array().pow(p);
  return std::pow(quad::periodic_mean(powed), 1.0 / p);
}

double flat_action(const DiscreteLoop& x) { return flat_action(x, 0); }

double flat_action(const DiscreteLoop& x, int basepoint_index) {
  const int n = x.N();
  if (basepoint_index < 0 || basepoint_index >= n)
    throw std::invalid_argument("flat_action: basepoint out of range");
  const Eigen::MatrixXcd xdot = x.derivative();
  const PointC base = x.at(basepoint_index);
  Eigen::VectorXd integrand(n);
  for (int i = 0; i < n; ++i)
    integrand(i) = geom::symplectic(x.at(i) - base, xdot.row(i).transpose());
  return -0.5 * quad::periodic_mean(integrand);
}

HorizontalGauge horizontal_gauge(const DiscreteLoop& x, const TorusAction& act) {
  x.validate();
  const int n = x.N();
  const int k = act.k;
  const Eigen::MatrixXcd xdot = x.derivative();

  // a(t) = (L*L)^{-1} L* dx/dt, the pulled-back connection
  Eigen::MatrixXd a(n, k);
  for (int i = 0; i < n; ++i) {
    const Eigen::MatrixXd L = act.action_matrix(x.at(i));
    const Eigen::MatrixXd gram = L.transpose() * L;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    const double scale = std::max(kTwoPi * act.W.cwiseAbs().maxCoeff() * std::max(1.0, x.at(i).norm()), 1.0);
    if (eig.eigenvalues()(0) < std::pow(1e-9 * scale, 2))
      throw std::domain_error("horizontal_gauge: degenerate rank, loop meets the stabilizer locus");
    Eigen::VectorXd vr(2 * act.n);
    for (int j = 0; j < act.n; ++j) {
      vr(2 * j) = xdot(i, j).real();
      vr(2 * j + 1) = xdot(i, j).imag();
    }
    a.row(i) = gram.ldlt().solve(L.transpose() * vr).transpose();
  }

  // lift ambiguity: per-step increment of eta below 1/2
  const double h = 1.0 / n;
  for (int i = 0; i < n; ++i) {
    const int ip = (i + 1) % n;
    if ((0.5 * h * (row(a, i) + row(a, ip))).cwiseAbs().maxCoeff() >= 0.5)
      throw std::runtime_error("horizontal_gauge: lift step >= 1/2, increase the sample count");
  }

  HorizontalGauge out;
  out.eta.resize(n, k);
  AlgVec eta1(k);
  for (int col = 0; col < k; ++col) {
    double full = 0;
    out.eta.col(col) = quad::cumtrapz_periodic(a.col(col), &full);
    eta1(col) = full;
  }
  out.lattice.resize(k);
  for (int col = 0; col < k; ++col) out.lattice(col) = std::floor(eta1(col) + 0.5);
  out.xi0 = eta1 - out.lattice;
  out.holonomy_dist = out.xi0.norm();

  out.gauge.eta.resize(n, k);
  for (int i = 0; i < n; ++i)
    out.gauge.eta.row(i) = -out.eta.row(i) + (static_cast<double>(i) / n) * out.xi0.transpose();
  out.gauge.winding = -out.lattice;
  return out;
}

PairLoop gauge_apply(const GaugeLoop& g, const PairLoop& pair, const TorusAction& act) {
  pair.validate();
  if (g.N() != pair.N() || g.rank() != act.k)
    throw std::invalid_argument("gauge_apply: shape mismatch");
  PairLoop out;
  out.x.samples.resize(pair.N(), pair.x.dim());
  for (int i = 0; i < pair.N(); ++i)
    out.x.samples.row(i) = act.rotate(row(g.eta, i), pair.x.at(i)).transpose();
  out.xi = pair.xi - g.derivative();
  return out;
}

ActionResult invariant_action_full(const PairLoop& pair, const TorusAction& act,
                                   double delta_gate) {
  pair.validate();
  if (pair.xi.cols() != act.k || pair.x.dim() != act.n)
    throw std::invalid_argument("invariant_action: pair does not match the action");
  auto hg = horizontal_gauge(pair.x, act);

  DiscreteLoop gx;
  gx.samples.resize(pair.N(), pair.x.dim());
  for (int i = 0; i < pair.N(); ++i)
    gx.samples.row(i) = act.rotate(row(hg.gauge.eta, i), pair.x.at(i)).transpose();

  const double usual = flat_action(gx);
  const Eigen::MatrixXd gdot = hg.gauge.derivative();
  Eigen::VectorXd integrand(pair.N());
  for (int i = 0; i < pair.N(); ++i)
    integrand(i) = act.moment(pair.x.at(i)).dot(row(pair.xi, i) - row(gdot, i));

  ActionResult res;
  res.value = usual + quad::periodic_mean(integrand);
  res.holonomy_dist = hg.holonomy_dist;
  res.quotient_length = lengths(PairLoop::zero_xi(pair.x, act.k), act).quotient;
  res.delta_warning = res.quotient_length >= delta_gate;
  return res;
}

double invariant_action(const PairLoop& pair, const TorusAction& act) {
  return invariant_action_full(pair, act).value;
}

namespace {

double loop_length(const DiscreteLoop& x) {
  const Eigen::MatrixXcd xdot = x.derivative();
  Eigen::VectorXd speed(x.N());
  for (int i = 0; i < x.N(); ++i) speed(i) = xdot.row(i).norm();
  return quad::periodic_mean(speed);
}

DiscreteLoop apply_to_loop(const GaugeLoop& g, const DiscreteLoop& x, const TorusAction& act) {
  DiscreteLoop out;
  out.samples.resize(x.N(), x.dim());
  for (int i = 0; i < x.N(); ++i)
    out.samples.row(i) = act.rotate(g.eta.row(i).transpose(), x.at(i)).transpose();
  return out;
}

}  // namespace

AdmissibilityReport admissibility_check(const DiscreteLoop& x, const TorusAction& act,
                                        const AdmissibilityOptions& opt) {
  auto hg = horizontal_gauge(x, act);
  const int n = x.N();
  const int k = act.k;

  const DiscreteLoop gx = apply_to_loop(hg.gauge, x, act);
  const double ell_g = loop_length(gx);
  const double usual_g = flat_action(gx);
  const Eigen::MatrixXd gdot = hg.gauge.derivative();

  Eigen::VectorXd moments_dot_dir(n);  // reused buffer

  AdmissibilityReport rep;
  rep.candidate_ell = ell_g;

  auto evaluate = [&](const GaugeLoop& cand, const Eigen::VectorXd& shift) {
    CompetitorRow rowr;
    rowr.winding_shift = shift;
    const DiscreteLoop cx = apply_to_loop(cand, x, act);
    rowr.ell = loop_length(cx);
    rowr.admitted = rowr.ell <= ell_g * (1.0 + 1e-12) + 1e-12;
    if (rowr.admitted) {
      const Eigen::MatrixXd cdot = cand.derivative();
      for (int i = 0; i < n; ++i)
        moments_dot_dir(i) = act.moment(x.at(i)).dot(row(cdot, i) - row(gdot, i));
      const double rhs = quad::periodic_mean(moments_dot_dir);
      rowr.residual = std::abs(flat_action(cx) - usual_g - rhs);
      rep.admitted_count += 1;
      if (rowr.residual > rep.max_residual) rep.max_residual = rowr.residual;
      if (rowr.residual > opt.residual_tol) {
        rep.falsified = true;
        if (rep.falsifier_index < 0) rep.falsifier_index = static_cast<int>(rep.rows.size());
      }
    }
    rep.rows.push_back(std::move(rowr));
  };

  // lattice winding shifts of the candidate
  std::vector<Eigen::VectorXi> shifts;
  Eigen::VectorXi m = Eigen::VectorXi::Constant(k, -opt.winding_range);
  while (true) {
    shifts.push_back(m);
    int carry = 0;
    while (carry < k) {
      if (m(carry) < opt.winding_range) {
        m(carry) += 1;
        break;
      }
      m(carry) = -opt.winding_range;
      ++carry;
    }
    if (carry == k) break;
  }
  for (const auto& s : shifts) {
    GaugeLoop cand = hg.gauge.compose(GaugeLoop::winding_loop(s, n));
    evaluate(cand, s.cast<double>());
  }

  // random low-frequency perturbations of the candidate
  for (int trial = 0; trial < opt.random_count; ++trial) {
    rng::Rng gen(opt.seed, static_cast<std::uint64_t>(trial));
    Eigen::VectorXi ws(k);
    for (int a = 0; a < k; ++a)
      ws(a) = static_cast<int>(gen.below(2 * opt.winding_range + 1)) - opt.winding_range;
    GaugeLoop cand = hg.gauge.compose(GaugeLoop::winding_loop(ws, n));
    for (int a = 0; a < k; ++a) {
      for (int mode = 1; mode <= opt.max_mode; ++mode) {
        const double ac = gen.uniform(-opt.amplitude, opt.amplitude) / mode;
        const double as = gen.uniform(-opt.amplitude, opt.amplitude) / mode;
        for (int i = 0; i < n; ++i) {
          const double t = static_cast<double>(i) / n;
          cand.eta(i, a) += ac * std::cos(kTwoPi * mode * t) + as * std::sin(kTwoPi * mode * t);
        }
      }
    }
    evaluate(cand, ws.cast<double>());
  }
  return rep;
}

double pullback_identity_residual(const std::vector<Eigen::MatrixXcd>& u,
                                  const std::vector<Eigen::MatrixXd>& eta,
                                  const TorusAction& act) {
  if (u.empty() || eta.empty()) throw std::invalid_argument("pullback residual: empty grids");
  const auto rows = u[0].rows();
  const auto cols = u[0].cols();
  if (rows < 7 || cols < 7) throw std::invalid_argument("pullback residual: grid too coarse");
  if (static_cast<int>(u.size()) != act.n || static_cast<int>(eta.size()) != act.k)
    throw std::invalid_argument("pullback residual: component counts do not match the action");
  const double hs = 1.0 / static_cast<double>(rows - 1);
  const double ht = 1.0 / static_cast<double>(cols - 1);

  auto point_at = [&](Eigen::Index i, Eigen::Index j) {
    PointC z(act.n);
    for (int cmp = 0; cmp < act.n; ++cmp) z(cmp) = u[cmp](i, j);
    return z;
  };
  auto lift_at = [&](Eigen::Index i, Eigen::Index j) {
    AlgVec v(act.k);
    for (int cmp = 0; cmp < act.k; ++cmp) v(cmp) = eta[cmp](i, j);
    return v;
  };

  // transformed map gu on the full grid
  std::vector<Eigen::MatrixXcd> gu(act.n, Eigen::MatrixXcd(rows, cols));
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      const PointC w = act.rotate(lift_at(i, j), point_at(i, j));
      for (int cmp = 0; cmp < act.n; ++cmp) gu[cmp](i, j) = w(cmp);
    }

  auto d1 = [&](const auto& f, Eigen::Index i, Eigen::Index j) {
    return (f(i + 1, j) - f(i - 1, j)) / (2.0 * hs);
  };
  auto d2 = [&](const auto& f, Eigen::Index i, Eigen::Index j) {
    return (f(i, j + 1) - f(i, j - 1)) / (2.0 * ht);
  };

  auto vec_d1 = [&](const std::vector<Eigen::MatrixXcd>& f, Eigen::Index i, Eigen::Index j) {
    PointC v(act.n);
    for (int cmp = 0; cmp < act.n; ++cmp) v(cmp) = d1(f[cmp], i, j);
    return v;
  };
  auto vec_d2 = [&](const std::vector<Eigen::MatrixXcd>& f, Eigen::Index i, Eigen::Index j) {
    PointC v(act.n);
    for (int cmp = 0; cmp < act.n; ++cmp) v(cmp) = d2(f[cmp], i, j);
    return v;
  };

  // P = <mu o u, d eta / dt>, Q = <mu o u, d eta / ds> on the interior
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(rows, cols);
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(rows, cols);
  for (Eigen::Index i = 1; i + 1 < rows; ++i)
    for (Eigen::Index j = 1; j + 1 < cols; ++j) {
      const AlgVec mu = act.moment(point_at(i, j));
      AlgVec et(act.k), es(act.k);
      for (int cmp = 0; cmp < act.k; ++cmp) {
        et(cmp) = d2(eta[cmp], i, j);
        es(cmp) = d1(eta[cmp], i, j);
      }
      P(i, j) = mu.dot(et);
      Q(i, j) = mu.dot(es);
    }

  double worst = 0;
  for (Eigen::Index i = 2; i + 2 < rows; ++i)
    for (Eigen::Index j = 2; j + 2 < cols; ++j) {
      const double lhs = geom::symplectic(vec_d1(gu, i, j), vec_d2(gu, i, j));
      const double base = geom::symplectic(vec_d1(u, i, j), vec_d2(u, i, j));
      const double dbeta = d1(P, i, j) - d2(Q, i, j);
      worst = std::max(worst, std::abs(lhs - (base - dbeta)));
    }
  return worst;
}

}  // namespace vortexlab::loops
