#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "vortexlab/lie_geom.hpp"

// Discrete loops in C^n and R^k sampled at t_i = i/N, their lengths and
// L^p norms, the usual flat action, the horizontal-gauge construction, the
// invariant action of a pair (x, xi), gauge transformations, the finite
// admissibility falsification test and the pullback identity residual.
//
// Loop derivatives are spectral (see fourier.hpp): the discrete twisted
// velocity |dx/dt + L_x xi| is then gauge invariant to rounding for smooth
// data, which the invariant suites rely on.

namespace vortexlab::loops {

using geom::AlgVec;
using geom::Complex;
using geom::PointC;
using geom::TorusAction;

struct DiscreteLoop {
  Eigen::MatrixXcd samples;  // N x n

  int N() const { return static_cast<int>(samples.rows()); }
  int dim() const { return static_cast<int>(samples.cols()); }
  double t(int i) const { return static_cast<double>(i) / N(); }
  PointC at(int i) const { return samples.row(i).transpose(); }

  /// Spectral derivative at the sample points.
  Eigen::MatrixXcd derivative() const;

  DiscreteLoop reversed() const;

  static DiscreteLoop from_function(int N, int n, const std::function<PointC(double)>& f);
  /// center + r exp(2 pi i deg t) in coordinate 0 of C^1.
  static DiscreteLoop circle(double r, int deg, int N, Complex center = Complex(0, 0));
  static DiscreteLoop constant(const PointC& z, int N);

  void validate() const;  // N >= 8
};

struct PairLoop {
  DiscreteLoop x;
  Eigen::MatrixXd xi;  // N x k

  int N() const { return x.N(); }
  static PairLoop constant(const PointC& z, const AlgVec& xi0, int N);
  static PairLoop zero_xi(DiscreteLoop loop, int k);
  void validate() const;
};

/// Loop in T^k stored as a lift eta with explicit integer winding
/// Lambda = eta(1) - eta(0).
struct GaugeLoop {
  Eigen::MatrixXd eta;      // N x k lift samples
  Eigen::VectorXd winding;  // Lambda, integer entries

  int N() const { return static_cast<int>(eta.rows()); }
  int rank() const { return static_cast<int>(eta.cols()); }

  /// d/dt of the lift: spectral derivative of the periodic part plus Lambda.
  Eigen::MatrixXd derivative() const;

  GaugeLoop inverse() const;
  GaugeLoop compose(const GaugeLoop& other) const;  // lifts add (abelian)

  static GaugeLoop constant(const AlgVec& theta, int N);
  static GaugeLoop winding_loop(const Eigen::VectorXi& m, int N);  // t -> exp(m t)
  static GaugeLoop from_function(int N, int k, const std::function<AlgVec(double)>& lift);

  /// Lift steps must stay below 1/2 so the winding is unambiguous.
  void validate() const;
};

struct Lengths {
  double ell = 0;       // l(x)
  double twisted = 0;   // l(x, xi)
  double quotient = 0;  // lbar(Gx), horizontal part of the velocity
  bool degenerate_warning = false;
};

Lengths lengths(const PairLoop& pair, const TorusAction& act);

/// L^p norm of a sampled scalar field w.r.t. the probability Haar measure;
/// p = infinity returns the max.
double lp_norm(const Eigen::VectorXd& pointwise_norms, double p);

/// Usual symplectic action from the flat cone formula
/// A(x) = -1/2 int omega0(x - x(0), dx/dt) dt; exactness of omega0 makes the
/// basepoint irrelevant.
double flat_action(const DiscreteLoop& x);
double flat_action(const DiscreteLoop& x, int basepoint_index);

struct HorizontalGauge {
  GaugeLoop gauge;          // g(t) = exp(-eta(t) + t xi0)
  AlgVec xi0;               // constant A(d/dt gx); |xi0| = d(1, holonomy)
  Eigen::VectorXd lattice;  // Lambda = nearest lattice point to eta(1)
  Eigen::MatrixXd eta;      // cumulative integral of a(t) = A_x(dx/dt)
  double holonomy_dist = 0;
};

/// Key gauge construction: integrate the connection a(t) = (L*L)^{-1}L* dx/dt
/// along the loop, reduce the holonomy modulo the lattice and return the
/// periodic gauge that leaves a constant vertical velocity L_{gx} xi0.
/// Throws std::domain_error on degenerate rank and std::runtime_error when a
/// lift step reaches 1/2 (under-resolved loop).
HorizontalGauge horizontal_gauge(const DiscreteLoop& x, const TorusAction& act);

/// g_*(x, xi) = (g x, xi - d/dt eta_g).
PairLoop gauge_apply(const GaugeLoop& g, const PairLoop& pair, const TorusAction& act);

struct ActionResult {
  double value = 0;
  double quotient_length = 0;
  double holonomy_dist = 0;
  bool delta_warning = false;  // quotient length exceeded the gate
};

/// Invariant action A(x, xi) = A(gx) + int <mu o x, xi - d/dt eta_g> dt with
/// g the horizontal gauge.
ActionResult invariant_action_full(const PairLoop& pair, const TorusAction& act,
                                   double delta_gate = 0.1);
double invariant_action(const PairLoop& pair, const TorusAction& act);

struct AdmissibilityOptions {
  int winding_range = 2;      // lattice shifts with |m|_inf <= winding_range
  int random_count = 20;      // random low-frequency competitor gauges
  int max_mode = 3;
  double amplitude = 0.2;
  std::uint64_t seed = 1;
  double residual_tol = 1e-6;  // falsification threshold
};

struct CompetitorRow {
  Eigen::VectorXd winding_shift;
  double ell = 0;        // l(~g x)
  double residual = 0;   // defect of the defining identity
  bool admitted = false; // l(~g x) <= l(g x)
};

struct AdmissibilityReport {
  double candidate_ell = 0;
  double max_residual = 0;
  bool falsified = false;
  int admitted_count = 0;
  int falsifier_index = -1;
  std::vector<CompetitorRow> rows;
};

/// Samples a finite family of competitor gauges around the horizontal one and
/// verifies the defining identity of the action for every admitted (not
/// longer) competitor. A falsification test, not a proof.
AdmissibilityReport admissibility_check(const DiscreteLoop& x, const TorusAction& act,
                                        const AdmissibilityOptions& opt = {});

/// Max interior residual of (gu)*omega = u*omega - d<mu o u, g^{-1}dg> for
/// grid maps u: [0,1]^2 -> C^n and a gauge lift eta: [0,1]^2 -> R^k, all
/// derivatives by central differences; O(h^2) for smooth data.
double pullback_identity_residual(const std::vector<Eigen::MatrixXcd>& u,
                                  const std::vector<Eigen::MatrixXd>& eta,
                                  const TorusAction& act);

}  // namespace vortexlab::loops
