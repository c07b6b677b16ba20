#include "vortexlab/isoperimetric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "vortexlab/fourier.hpp"

namespace vortexlab::isoperi {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

void VerifierConfig::validate() const {
  action.validate();
  if (c <= 1.0 / (4.0 * kPi))
    throw std::invalid_argument("VerifierConfig: c must exceed 1/(4 pi)");
  if (delta <= 0) throw std::invalid_argument("VerifierConfig: delta must be positive");
  for (double p : p_grid)
    if (p < 1.0 || p > 2.0) throw std::invalid_argument("VerifierConfig: p values must lie in [1,2]");
  if (trials < 0) throw std::invalid_argument("VerifierConfig: negative trial count");
  if (N < 8) throw std::invalid_argument("VerifierConfig: N too small");
  if (region.empty()) throw std::invalid_argument("VerifierConfig: empty region sample");
}

EvalResult isoperi_evaluate(const loops::PairLoop& pair, const geom::TorusAction& act, double p,
                            double c, double m_K, double moment_coeff, double delta_gate) {
  if (p < 1.0 || p > 2.0) throw std::invalid_argument("isoperi_evaluate: p must lie in [1,2]");
  if (moment_coeff < 0 && m_K <= 0)
    throw std::invalid_argument("isoperi_evaluate: m_K = 0, region touches the stabilizer locus");

  const auto act_res = loops::invariant_action_full(pair, act, delta_gate);

  const int n = pair.N();
  const Eigen::MatrixXcd xdot = pair.x.derivative();
  Eigen::VectorXd twisted(n), moment(n);
  for (int i = 0; i < n; ++i) {
    const geom::PointC z = pair.x.at(i);
    twisted(i) = (geom::PointC(xdot.row(i).transpose()) +
                  act.infinitesimal(z, pair.xi.row(i).transpose()))
                     .norm();
    moment(i) = act.moment(z).norm();
  }
  const double pp = (p == 1.0) ? std::numeric_limits<double>::infinity() : p / (p - 1.0);

  EvalResult res;
  res.lhs = std::abs(act_res.value);
  res.twisted_norm = loops::lp_norm(twisted, p);
  res.moment_norm = loops::lp_norm(moment, pp);
  res.coeff = moment_coeff < 0 ? kPi / (m_K * m_K) : moment_coeff;
  res.rhs = c * res.twisted_norm * res.twisted_norm + res.coeff * res.moment_norm * res.moment_norm;
  res.margin = res.rhs - res.lhs;
  res.quotient_length = act_res.quotient_length;
  res.delta_warning = act_res.delta_warning;
  return res;
}

loops::DiscreteLoop perturbed_orbit_loop(const geom::TorusAction& act, const geom::PointC& base,
                                         const Eigen::VectorXi& deg, double amplitude, int N,
                                         rng::Rng& gen) {
  const int n = act.n;
  // band-limited disturbance, modes 1..4 per complex coordinate
  Eigen::MatrixXcd amp_pos(4, n), amp_neg(4, n);
  for (int j = 0; j < n; ++j)
    for (int m = 0; m < 4; ++m) {
      amp_pos(m, j) = amplitude / (m + 1) * std::complex<double>(gen.normal(), gen.normal());
      amp_neg(m, j) = amplitude / (m + 1) * std::complex<double>(gen.normal(), gen.normal());
    }
  loops::DiscreteLoop out;
  out.samples.resize(N, n);
  const geom::AlgVec degd = deg.cast<double>();
  for (int i = 0; i < N; ++i) {
    const double t = static_cast<double>(i) / N;
    geom::PointC z = base;
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < 4; ++m) {
        z(j) += amp_pos(m, j) * std::polar(1.0, kTwoPi * (m + 1) * t);
        z(j) += amp_neg(m, j) * std::polar(1.0, -kTwoPi * (m + 1) * t);
      }
    out.samples.row(i) = act.rotate(t * degd, z).transpose();
  }
  return out;
}

std::vector<loops::PairLoop> sample_loops(const VerifierConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  std::vector<loops::PairLoop> batch;
  batch.reserve(static_cast<std::size_t>(cfg.trials));
  for (int trial = 0; trial < cfg.trials; ++trial) {
    rng::Rng gen(seed, static_cast<std::uint64_t>(trial));
    const geom::PointC base = cfg.region[static_cast<std::size_t>(trial) % cfg.region.size()];
    Eigen::VectorXi deg(cfg.action.k);
    for (int a = 0; a < cfg.action.k; ++a)
      deg(a) = cfg.deg_min + static_cast<int>(gen.below(
                   static_cast<std::uint64_t>(cfg.deg_max - cfg.deg_min + 1)));

    // raw disturbance, then rescale to the quotient-length target
    const double raw_amp = 0.02;
    rng::Rng shape(seed, static_cast<std::uint64_t>(trial) + 0x9e37ULL * 1024ULL);
    rng::Rng shape2 = shape;  // same disturbance twice, different scale
    loops::DiscreteLoop probe = perturbed_orbit_loop(cfg.action, base, deg, raw_amp, cfg.N, shape);
    const double raw_ellbar =
        loops::lengths(loops::PairLoop::zero_xi(probe, cfg.action.k), cfg.action).quotient;
    const double target = cfg.delta * gen.uniform(0.1, 0.95);
    double scale = raw_ellbar > 1e-14 ? raw_amp * target / raw_ellbar : 0.0;

    loops::PairLoop pair;
    pair.x = perturbed_orbit_loop(cfg.action, base, deg, scale, cfg.N, shape2);
    pair.xi.resize(cfg.N, cfg.action.k);
    for (int a = 0; a < cfg.action.k; ++a) {
      const double mean = gen.uniform(-cfg.xi_amp, cfg.xi_amp);
      double c1 = gen.uniform(-cfg.xi_amp, cfg.xi_amp), s1 = gen.uniform(-cfg.xi_amp, cfg.xi_amp);
      double c2 = gen.uniform(-cfg.xi_amp, cfg.xi_amp) / 2, s2 = gen.uniform(-cfg.xi_amp, cfg.xi_amp) / 2;
      double c3 = gen.uniform(-cfg.xi_amp, cfg.xi_amp) / 3, s3 = gen.uniform(-cfg.xi_amp, cfg.xi_amp) / 3;
      for (int i = 0; i < cfg.N; ++i) {
        const double t = static_cast<double>(i) / cfg.N;
        pair.xi(i, a) = mean + c1 * std::cos(kTwoPi * t) + s1 * std::sin(kTwoPi * t) +
                        c2 * std::cos(2 * kTwoPi * t) + s2 * std::sin(2 * kTwoPi * t) +
                        c3 * std::cos(3 * kTwoPi * t) + s3 * std::sin(3 * kTwoPi * t);
      }
    }
    batch.push_back(std::move(pair));
  }
  return batch;
}

BatchReport verify_batch(const VerifierConfig& cfg) {
  cfg.validate();
  const auto batch = sample_loops(cfg, cfg.seed);

  // m_K over the region samples plus every loop sample; underestimating m_K
  // only strengthens the tested inequality
  std::vector<geom::PointC> pts(cfg.region.begin(), cfg.region.end());
  for (const auto& pair : batch)
    for (int i = 0; i < pair.N(); ++i) pts.push_back(pair.x.at(i));

  BatchReport rep;
  rep.m_K = geom::min_action_norm(cfg.action, pts);
  rep.worst_margin = std::numeric_limits<double>::infinity();
  if (batch.empty()) {
    rep.worst_margin = 0;
    return rep;
  }

  for (int trial = 0; trial < static_cast<int>(batch.size()); ++trial) {
    const auto& pair = batch[static_cast<std::size_t>(trial)];
    for (double p : cfg.p_grid) {
      const auto ev = isoperi_evaluate(pair, cfg.action, p, cfg.c, rep.m_K, -1.0, cfg.delta);
      TrialRow row;
      row.trial = trial;
      row.p = p;
      row.lhs = ev.lhs;
      row.rhs = ev.rhs;
      row.margin = ev.margin;
      row.ellbar = ev.quotient_length;
      if (ev.margin < 0) rep.violations += 1;
      rep.worst_margin = std::min(rep.worst_margin, ev.margin);
      rep.rows.push_back(row);
    }
  }

  // margin histogram, 20 bins
  rep.hist_lo = rep.worst_margin;
  rep.hist_hi = rep.hist_lo;
  for (const auto& r : rep.rows) rep.hist_hi = std::max(rep.hist_hi, r.margin);
  rep.histogram.assign(20, 0);
  const double span = std::max(rep.hist_hi - rep.hist_lo, 1e-300);
  for (const auto& r : rep.rows) {
    int bin = static_cast<int>(std::floor((r.margin - rep.hist_lo) / span * 20));
    bin = std::clamp(bin, 0, 19);
    rep.histogram[static_cast<std::size_t>(bin)] += 1;
  }
  return rep;
}

SharpnessReport sharpness_witness(int N) {
  const auto act = geom::TorusAction::standard_rotation();
  geom::PointC base(1);
  base(0) = std::complex<double>(2.0, 0.0);
  std::vector<geom::PointC> region = {base};

  SharpnessReport rep;
  rep.m_K = geom::min_action_norm(act, region);

  geom::AlgVec xi0(1);
  xi0(0) = 3.0 / 8.0;
  const auto pair = loops::PairLoop::constant(base, xi0, N);

  rep.violation = isoperi_evaluate(pair, act, 2.0, 0.1, rep.m_K, 1.0 / (32.0 * kPi));
  rep.violation_confirmed = rep.violation.margin < 0;

  rep.equality = isoperi_evaluate(pair, act, 2.0, 1.0 / (4.0 * kPi), rep.m_K, -1.0);
  rep.equality_gap = std::abs(rep.equality.rhs - rep.equality.lhs);
  return rep;
}

}  // namespace vortexlab::isoperi
