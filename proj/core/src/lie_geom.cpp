#include "vortexlab/lie_geom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "vortexlab/rng.hpp"

namespace vortexlab::geom {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

double symplectic(const PointC& u, const PointC& v) {
  // omega0(u, v) = sum Im(conj(u_j) v_j)
  return u.dot(v).imag();
}

double metric(const PointC& u, const PointC& v) { return u.dot(v).real(); }

PointC apply_j(const PointC& v) { return Complex(0.0, 1.0) * v; }

TorusAction::TorusAction(int n_, int k_, Eigen::MatrixXd W_, Eigen::VectorXd c_)
    : n(n_), k(k_), W(std::move(W_)), c(std::move(c_)) {
  validate();
}

TorusAction TorusAction::standard_rotation() {
  return TorusAction(1, 1, Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Ones(1));
}

void TorusAction::validate() const {
  if (n < 1 || k < 1) throw std::invalid_argument("TorusAction: n and k must be positive");
  if (W.rows() != k || W.cols() != n) throw std::invalid_argument("TorusAction: W must be k x n");
  if (c.size() != n) throw std::invalid_argument("TorusAction: c must have length n");
  for (int a = 0; a < k; ++a)
    for (int j = 0; j < n; ++j)
      if (W(a, j) != std::round(W(a, j)))
        throw std::invalid_argument("TorusAction: weights must be integers");
  for (int j = 0; j < n; ++j)
    if (W.col(j).cwiseAbs().maxCoeff() == 0.0)
      throw std::invalid_argument("TorusAction: zero weight column (global stabilizer)");
}

PointC TorusAction::infinitesimal(const PointC& z, const AlgVec& xi) const {
  PointC out(n);
  for (int j = 0; j < n; ++j) {
    const double rate = W.col(j).dot(xi);
    out(j) = Complex(0.0, kTwoPi * rate) * z(j);
  }
  return out;
}

Eigen::MatrixXd TorusAction::action_matrix(const PointC& z) const {
  Eigen::MatrixXd L(2 * n, k);
  for (int j = 0; j < n; ++j) {
    for (int a = 0; a < k; ++a) {
      const Complex col = Complex(0.0, kTwoPi * W(a, j)) * z(j);
      L(2 * j, a) = col.real();
      L(2 * j + 1, a) = col.imag();
    }
  }
  return L;
}

AlgVec TorusAction::moment(const PointC& z) const {
  AlgVec mu = AlgVec::Zero(k);
  for (int j = 0; j < n; ++j) mu += kPi * (c(j) - std::norm(z(j))) * W.col(j);
  return mu;
}

PointC TorusAction::rotate(const AlgVec& theta, const PointC& z) const {
  PointC out(n);
  for (int j = 0; j < n; ++j) {
    const double ang = kTwoPi * W.col(j).dot(theta);
    out(j) = std::polar(1.0, ang) * z(j);
  }
  return out;
}

ProjectionResult project_vertical(const TorusAction& act, const PointC& z, const PointC& v,
                                  double tol) {
  const Eigen::MatrixXd L = act.action_matrix(z);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(L, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();

  ProjectionResult res;
  res.sigma_min = sigma.size() > 0 ? sigma(sigma.size() - 1) : 0.0;

  // scale of the action near z: |L| grows like 2 pi |W| |z|
  const double scale =
      std::max(kTwoPi * act.W.cwiseAbs().maxCoeff() * std::max(1.0, z.norm()), 1.0);
  res.degenerate = res.sigma_min < tol * scale;

  Eigen::VectorXd vr(2 * act.n);
  for (int j = 0; j < act.n; ++j) {
    vr(2 * j) = v(j).real();
    vr(2 * j + 1) = v(j).imag();
  }
  // rank-truncated pseudoinverse keeps the projection meaningful near the
  // stabilizer locus
  const double cutoff = tol * scale;
  Eigen::VectorXd coeff = svd.matrixU().transpose() * vr;
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    coeff(i) = sigma(i) > cutoff ? coeff(i) : 0.0;
  Eigen::VectorXd pr = svd.matrixU() * coeff;

  res.vertical = PointC(act.n);
  for (int j = 0; j < act.n; ++j) res.vertical(j) = Complex(pr(2 * j), pr(2 * j + 1));
  res.horizontal = v - res.vertical;
  return res;
}

double min_action_norm(const TorusAction& act, std::span<const PointC> samples) {
  if (samples.empty()) throw std::invalid_argument("min_action_norm: empty sample set");
  double m = std::numeric_limits<double>::infinity();
  for (const auto& z : samples) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(act.action_matrix(z));
    const auto& sigma = svd.singularValues();
    m = std::min(m, sigma(sigma.size() - 1));
  }
  return m;
}

namespace {

// Feasibility of a support S on the zero level, rank-1 weights: does there
// exist r > 0 on S (zero off S) with sum_{j in S} w_j r_j = sum_j w_j c_j?
bool support_feasible_k1(const Eigen::RowVectorXd& w, double target, const std::vector<int>& S) {
  if (S.empty()) return target == 0.0;
  bool has_pos = false, has_neg = false;
  for (int j : S) {
    if (w(j) > 0) has_pos = true;
    if (w(j) < 0) has_neg = true;
  }
  if (target > 0) return has_pos;
  if (target < 0) return has_neg;
  return has_pos && has_neg;
}

long long igcd(long long a, long long b) { return std::gcd(std::llabs(a), std::llabs(b)); }

}  // namespace

HypothesisReport check_hypothesis_h(const TorusAction& act, double eps) {
  HypothesisReport rep;
  if (eps <= 0) throw std::invalid_argument("check_hypothesis_h: eps must be positive");

  if (act.k == 1 && act.n <= 20) {
    const Eigen::RowVectorXd w = act.W.row(0);
    // |mu| <= eps is compact iff the recession cone {r >= 0, w.r = 0} is
    // trivial, i.e. all weights share a strict sign.
    const bool all_pos = (w.array() > 0).all();
    const bool all_neg = (w.array() < 0).all();
    rep.compact = (all_pos || all_neg) ? Tristate::yes : Tristate::no;

    // Freeness on mu^{-1}(0): enumerate achievable supports; the stabilizer
    // of a point supported on S is Z/gcd{|w_j| : j in S} (whole torus for
    // the empty support).
    const double target = w.dot(act.c.transpose());
    bool free = true;
    bool any_support = false;
    for (unsigned mask = 0; mask < (1u << act.n); ++mask) {
      std::vector<int> S;
      for (int j = 0; j < act.n; ++j)
        if (mask & (1u << j)) S.push_back(j);
      if (!support_feasible_k1(w, target, S)) continue;
      any_support = true;
      if (S.empty()) {
        free = false;  // the origin is fixed by the whole circle
        continue;
      }
      long long g = 0;
      for (int j : S) g = igcd(g, static_cast<long long>(std::llround(w(j))));
      if (g != 1) free = false;
    }
    if (!any_support) {
      rep.note = "zero level set is empty";
      rep.free_on_zero_level = Tristate::yes;  // vacuously free
    } else {
      rep.free_on_zero_level = free ? Tristate::yes : Tristate::no;
    }
    return rep;
  }

  // Higher rank: no analytic decision implemented; attach a grid-search
  // fallback on shells of growing radius.
  rep.compact = Tristate::undecidable;
  rep.free_on_zero_level = Tristate::undecidable;
  rep.sampled_fallback_used = true;
  rng::Rng gen(0x5eedULL);
  bool tail_hit = false;
  for (double radius : {4.0, 8.0, 16.0, 32.0, 64.0}) {
    double min_mu = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 512; ++trial) {
      PointC z(act.n);
      for (int j = 0; j < act.n; ++j) z(j) = Complex(gen.normal(), gen.normal());
      z *= radius / z.norm();
      min_mu = std::min(min_mu, act.moment(z).norm());
    }
    if (min_mu <= eps) tail_hit = true;
  }
  rep.note = tail_hit ? "sampled shells intersect the sublevel set at large radius"
                      : "sampled shells leave the sublevel set";
  return rep;
}

AlgVec torus_log(const AlgVec& lift) {
  AlgVec out(lift.size());
  for (Eigen::Index i = 0; i < lift.size(); ++i) out(i) = lift(i) - std::floor(lift(i) + 0.5);
  return out;
}

AlgVec torus_canonical(const AlgVec& lift) {
  AlgVec out(lift.size());
  for (Eigen::Index i = 0; i < lift.size(); ++i) out(i) = lift(i) - std::floor(lift(i));
  return out;
}

double torus_dist(const AlgVec& lift) { return torus_log(lift).norm(); }

Quat Quat::normalized() const {
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (n == 0.0) throw std::domain_error("Quat: zero quaternion");
  return Quat{w / n, x / n, y / n, z / n};
}

Quat Quat::operator*(const Quat& o) const {
  Quat r{w * o.w - x * o.x - y * o.y - z * o.z, w * o.x + x * o.w + y * o.z - z * o.y,
         w * o.y - x * o.z + y * o.w + z * o.x, w * o.z + x * o.y - y * o.x + z * o.w};
  return r.normalized();
}

Quat quat_exp(const Eigen::Vector3d& xi) {
  const double a = xi.norm();
  if (a < 1e-300) return Quat::identity();
  const double s = std::sin(a) / a;
  return Quat{std::cos(a), s * xi(0), s * xi(1), s * xi(2)}.normalized();
}

Eigen::Vector3d quat_log(const Quat& qin) {
  Quat q = qin.normalized();
  Eigen::Vector3d v(q.x, q.y, q.z);
  const double vn = v.norm();
  const double angle = std::atan2(vn, q.w);
  if (angle > kPi - 1e-9 && vn < 1e-12)
    throw std::domain_error("quat_log: cut locus (angle pi) is ambiguous");
  if (vn < 1e-300) return Eigen::Vector3d::Zero();
  return (angle / vn) * v;
}

double quat_dist(const Quat& a, const Quat& b) {
  const double d = std::clamp(a.normalized().dot(b.normalized()), -1.0, 1.0);
  return std::acos(d);
}

Eigen::Vector3d quat_bracket(const Eigen::Vector3d& u, const Eigen::Vector3d& v) {
  return 2.0 * u.cross(v);
}

}  // namespace vortexlab::geom
