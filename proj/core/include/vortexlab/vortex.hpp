#pragma once

#include <vector>

#include <Eigen/Dense>

#include "vortexlab/lie_geom.hpp"
#include "vortexlab/loops.hpp"

// The lambda-vortex equations on the half-cylinder R x S^1 (circumference 1
// internally; other circumferences rescale): residuals and energies on 2-D
// grids, admissibility of the area form, the equivariant radial profile
// solver, the energy-action identity, the pointwise and mean-value bounds,
// decay-rate fits and the holomorphic comparison profile.

namespace vortexlab::vortex {

using geom::AlgVec;
using geom::PointC;
using geom::TorusAction;

struct CylinderGrid {
  double s0 = 0, s1 = 1;
  int ns = 2;
  int nt = 16;  // t in [0,1) periodic

  double ds() const { return (s1 - s0) / (ns - 1); }
  double dt() const { return 1.0 / nt; }
  double s(int i) const { return s0 + i * ds(); }
  double t(int j) const { return static_cast<double>(j) / nt; }
  void validate() const;
  /// Node index of an s value, throws if s is not grid aligned.
  int s_index(double s) const;
};

struct VortexFields {
  CylinderGrid grid;
  int n = 1;  // complex dimension of the target
  int k = 1;  // torus rank
  std::vector<Eigen::MatrixXcd> u;    // per coordinate, ns x nt
  std::vector<Eigen::MatrixXd> Phi;   // per Lie-algebra component
  std::vector<Eigen::MatrixXd> Psi;
  Eigen::MatrixXd lam;                // positive

  void validate() const;
  /// The slice loop pair (u(s,.), Psi(s,.)) at a grid row.
  loops::PairLoop slice(int i) const;
};

struct ResidualReport {
  std::vector<Eigen::MatrixXcd> first;   // del_s u + L Phi + J(del_t u + L Psi)
  std::vector<Eigen::MatrixXd> second;   // del_s Psi - del_t Phi + lam^2 mu(u)
  double max_first = 0;
  double max_second = 0;
};

/// Residuals of the two vortex equations; s-derivatives by fourth-order
/// finite differences (one-sided near the boundary rows), t-derivatives
/// spectral.
ResidualReport vortex_residual(const VortexFields& w, const TorusAction& act);

struct EnergyDensities {
  Eigen::MatrixXd e_w;   // 1/2 (|d_A u|^2 + |F_A|^2 + |mu o u|^2), cylinder metric
  Eigen::MatrixXd et_w;  // |del_s u + L Phi|^2 + lam^2 |mu o u|^2, flat metric
};

EnergyDensities energy_densities(const VortexFields& w, const TorusAction& act);

/// E(w, [sa,sb] x S^1) = integral of et_w ds dt; sa, sb must be grid aligned.
/// Fourth-order quadrature in s, exact mean in t.
double energy(const VortexFields& w, const TorusAction& act, double sa, double sb);

struct AreaFormReport {
  double lam_min = 0;
  double lower_bound = 0;  // 2 pi / (a m_zero)
  double margin_lower = 0;
  double sup_grad_term = 0;  // sup(|d lam^-1|^2 + Delta lam^-2)
  double upper_bound = 0;    // 2 m_zero^2
  double margin_upper = 0;
  bool admissible = false;
};

AreaFormReport check_area_form(const Eigen::MatrixXd& lam, const CylinderGrid& grid, double a,
                               double m_zero);

/// Reduced equivariant profile: u = rho(s) e^{2 pi i k t}, Phi = 0,
/// Psi = psi(s), constant lambda. The reduced flow is
///   rho' = 2 pi (k + psi) rho,   psi' = -lam^2 pi (1 - rho^2),
/// a saddle at (1, -k) with eigenvalues +-2 pi lam.
struct RadialProfile {
  int k_deg = 1;
  double lam0 = 1;
  double s0 = 0;
  double ds = 1e-3;
  std::vector<double> rho;
  std::vector<double> psi;
  double splice_s = 0;           // handover to the local stable-manifold tail
  double terminal_distance = 0;  // distance of the final state to (1, -k)

  double s_max() const { return s0 + ds * (static_cast<double>(rho.size()) - 1); }
  double rho_at(double s) const;
  double psi_at(double s) const;
  /// Invariant action of the slice pair, pi (1 - rho^2)(psi + k).
  double slice_action(double s) const;
  /// et_w of the embedded solution, rho'^2 + lam^2 pi^2 (1 - rho^2)^2.
  double energy_density(double s) const;
};

struct ShootingOptions {
  double rho0 = 0.1;           // rho(0), in (0,1]
  double bracket_tol = 1e-12;  // bisection keeps contracting to machine limit
  double handover = 1e-7;      // distance at which the linear stable flow takes over
  double grid_ds = 1e-3;       // output resolution
  double fixed_step = 0;       // integration step; 0 picks 5e-4 / max(1, lam)
};

/// Shooting solver: bisect psi(0) between collapse (rho -> 0) and blow-up
/// (rho -> infinity) until the bracket is machine tight, then follow the
/// trajectory and hand over to the linearized stable flow inside the
/// `handover` ball around (1, -k). RK4 in extended precision; the bisection
/// and the output pass share one fixed step, so the bisected value sits on
/// the stable manifold of the discrete flow itself.
/// Throws std::runtime_error when no bracket is found (message carries the
/// observed sign pattern) or on blow-up of the final trajectory.
RadialProfile solve_radial(int k_deg, double lam0, double s_max, const ShootingOptions& opt = {});

/// The ansatz map: profile to grid fields over the given cylinder grid.
VortexFields embed_radial(const RadialProfile& profile, const CylinderGrid& grid);

struct EnergyActionReport {
  double E = 0;
  double action_lo = 0;       // invariant action of the slice at s_lo
  double action_hi = 0;
  double delta_action = 0;    // action_lo - action_hi
  double rel_error = 0;       // |E - delta| / max(|E|, |delta|)
  double boundary_route = 0;  // usual slice actions plus <mu, Psi> boundary terms
  double boundary_rel_error = 0;
  bool slices_admissible = true;
};

/// Energy-action identity E(w, [lo,hi] x S^1) = A(lo) - A(hi) via the loops
/// module, with the boundary-term route as an independent cross-check.
EnergyActionReport energy_action_check(const VortexFields& w, const TorusAction& act,
                                       double s_lo, double s_hi, double delta_gate = 0.1);

struct PointwiseBoundReport {
  double et_at_z = 0;
  double rhs = 0;  // (32/pi) E(B_r(z))
  double margin = 0;
  bool pass = false;
};

/// et_w(z) <= (32/pi) E(w, B_{1/2}(z)); the disc integral uses the node-in-
/// disc indicator with periodic t distance. Throws when the disc leaves the
/// grid in s.
PointwiseBoundReport pointwise_bound_check(const VortexFields& w, const TorusAction& act,
                                           double s, double t, double r = 0.5);

/// Scalar sample on a square grid over [-r,r]^2, masked to the disc |x| < r.
struct DiscFunction {
  double r = 1;
  Eigen::MatrixXd f;  // m x m, node (i,j) at (-r + i h, -r + j h), h = 2r/(m-1)

  int m() const { return static_cast<int>(f.rows()); }
  double h() const { return 2 * r / (m() - 1); }
};

struct MeanValueReport {
  double C = 0;           // smallest admissible constant, max(-Delta f / f^2)
  double integral = 0;    // int_{B_r} f
  double center_value = 0;
  double smallness_bound = 0;  // pi / (8C)
  double conclusion_bound = 0; // (8 / (pi r^2)) int f
  bool hypothesis_met = false;
  bool conclusion_holds = false;
};

/// The mean value inequality: f >= 0, Delta f >= -C f^2 and a small integral
/// force f(0) <= (8/(pi r^2)) int f. C is extracted from the data with a
/// five-point Laplacian. Throws std::invalid_argument when f < 0 on the disc.
MeanValueReport mean_value_check(const DiscFunction& f);

struct DecayFitResult {
  double slope_et = 0;  // d/ds log et_w
  double slope_E = 0;   // d/ds log E(s)
  int nodes = 0;
};

/// Least-squares slopes of log et_w and log E(s) over [s1, s2]. E(s) is the
/// tail energy, truncated at the profile end with the closed-form slice
/// action as tail value. Throws when fewer than 10 nodes fall inside the
/// window or the density vanishes there.
DecayFitResult decay_fit(const RadialProfile& profile, double s1, double s2);
DecayFitResult decay_fit(const VortexFields& w, const TorusAction& act, double s1, double s2);

struct WitnessResult {
  Eigen::VectorXd s;
  Eigen::VectorXd du_norm;  // |du|_0 in the Fubini-Study metric
  double fitted_slope = 0;
};

/// |du|_0 along the holomorphic cylinder map u(z) = e^{(2 pi / a) z} into the
/// round CP^1: (2 pi/a) (scale/2) sech((2 pi/a) s), sampled on [s_lo, s_hi].
WitnessResult holomorphic_witness(double a, double s_lo, double s_hi, int count,
                                  double fs_scale = 2.0);

}  // namespace vortexlab::vortex
