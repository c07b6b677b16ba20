#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

// Flat model geometry: weighted torus actions on C^n with the standard
// symplectic form, J = i and the Euclidean metric, plus the group and
// Lie-algebra utilities for T^k and for unit quaternions (the latter are
// used by the holonomy module only).

namespace vortexlab::geom {

using Complex = std::complex<double>;
using PointC = Eigen::VectorXcd;   // point of C^n, also used for tangents
using AlgVec = Eigen::VectorXd;    // element of Lie(T^k) = R^k

/// Standard symplectic form on C^n ~ R^{2n}: sum dx_j ^ dy_j.
double symplectic(const PointC& u, const PointC& v);
/// Euclidean inner product on C^n ~ R^{2n}.
double metric(const PointC& u, const PointC& v);
/// The compatible complex structure: multiplication by i.
PointC apply_j(const PointC& v);

/// Weighted linear action of T^k = R^k/Z^k on C^n. Column j of the integer
/// matrix W is the weight vector of coordinate j; theta in R^k acts by
/// z_j -> exp(2 pi i <w_j, theta>) z_j. The moment map carries area offsets
/// c so that <mu(z), xi> = pi sum_j <w_j, xi> (c_j - |z_j|^2).
struct TorusAction {
  int n = 1;
  int k = 1;
  Eigen::MatrixXd W;  // k x n, integer entries
  Eigen::VectorXd c;  // length n

  TorusAction() : W(Eigen::MatrixXd::Ones(1, 1)), c(Eigen::VectorXd::Ones(1)) {}
  TorusAction(int n_, int k_, Eigen::MatrixXd W_, Eigen::VectorXd c_);

  /// The one-coordinate rotation action with mu = pi(1 - |z|^2).
  static TorusAction standard_rotation();

  void validate() const;

  /// L_z xi, the velocity of the xi-flow at z: (L_z xi)_j = 2 pi i <w_j, xi> z_j.
  PointC infinitesimal(const PointC& z, const AlgVec& xi) const;

  /// L_z as a real 2n x k matrix (rows alternate Re/Im per coordinate).
  Eigen::MatrixXd action_matrix(const PointC& z) const;

  /// Moment map value, identified with R^k via the Euclidean pairing.
  AlgVec moment(const PointC& z) const;

  /// exp(theta) . z, the finite group action.
  PointC rotate(const AlgVec& theta, const PointC& z) const;
};

struct ProjectionResult {
  PointC vertical;      // Pr v, orthogonal projection onto im L_z
  PointC horizontal;    // v - Pr v
  double sigma_min = 0; // smallest singular value of L_z
  bool degenerate = false;
};

/// Orthogonal projection onto the orbit directions, Pr = L (L*L)^+ L*.
/// Flags degenerate rank when the smallest singular value of L_z falls
/// below tol relative to the scale of the action at z; the projection then
/// falls back to the pseudoinverse on the numerically nonzero part.
ProjectionResult project_vertical(const TorusAction& act, const PointC& z, const PointC& v,
                                  double tol = 1e-9);

/// min over samples of the smallest singular value of L_z; this is m_X for
/// the finite set X of samples.
double min_action_norm(const TorusAction& act, std::span<const PointC> samples);

enum class Tristate { yes, no, undecidable };

struct HypothesisReport {
  Tristate compact = Tristate::undecidable;
  Tristate free_on_zero_level = Tristate::undecidable;
  bool sampled_fallback_used = false;
  std::string note;
};

/// Properness of |mu| <= eps and freeness on mu^{-1}(0), decided analytically
/// for rank-1 weight data; other configurations report undecidable together
/// with a sampled fallback.
HypothesisReport check_hypothesis_h(const TorusAction& act, double eps);

// --- torus group -----------------------------------------------------------

/// Lattice reduction of a lift: representative in [-1/2, 1/2)^k, the tie at
/// half-integers resolved to -1/2.
AlgVec torus_log(const AlgVec& lift);
/// Canonical representative in [0,1)^k.
AlgVec torus_canonical(const AlgVec& lift);
/// Bi-invariant distance of the class of `lift` to the identity.
double torus_dist(const AlgVec& lift);

// --- unit quaternions ------------------------------------------------------

/// Unit quaternion, renormalized after every composition.
struct Quat {
  double w = 1, x = 0, y = 0, z = 0;

  static Quat identity() { return {}; }
  Quat normalized() const;
  Quat operator*(const Quat& o) const;
  Quat inverse() const { return Quat{w, -x, -y, -z}; }
  double dot(const Quat& o) const { return w * o.w + x * o.x + y * o.y + z * o.z; }
};

/// exp of a pure quaternion xi (as a vector in R^3); d(1, exp xi) = |xi|.
Quat quat_exp(const Eigen::Vector3d& xi);
/// Minimal-norm log; throws std::domain_error at the cut locus (angle pi).
Eigen::Vector3d quat_log(const Quat& q);
/// Geodesic angle between unit quaternions on the round S^3.
double quat_dist(const Quat& a, const Quat& b);
/// Lie bracket of R^3 ~ pure quaternions: [u, v] = uv - vu = 2 u x v.
Eigen::Vector3d quat_bracket(const Eigen::Vector3d& u, const Eigen::Vector3d& v);

}  // namespace vortexlab::geom
