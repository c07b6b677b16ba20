#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "vortexlab/lie_geom.hpp"
#include "vortexlab/loops.hpp"

// Connections on trivial principal bundles over planar charts: curvature,
// parallel transport along sampled loops, and the scaling study of the
// holonomy bound d(1, h) <= C ||F_A|| l(x)^2. Supports T^k and the unit
// quaternion group.

namespace vortexlab::holonomy {

enum class Group { torus, quaternion };

/// Element of the structure group; torus classes keep their lift.
struct GroupElement {
  Group group = Group::torus;
  geom::AlgVec lift;  // torus only
  geom::Quat quat;    // quaternion only

  double dist_to_identity() const;
  GroupElement compose(const GroupElement& other) const;
  GroupElement inverse() const;

  static GroupElement torus(geom::AlgVec lift);
  static GroupElement quaternion(geom::Quat q);
};

/// Lie-algebra-valued one-form A = A1 dx + A2 dy sampled on a uniform grid
/// over [x0,x1] x [y0,y1]; values interpolated bilinearly.
struct ConnectionChart {
  Group group = Group::torus;
  int dim = 1;  // k for the torus, 3 for the quaternion algebra
  double x0 = -1, x1 = 1, y0 = -1, y1 = 1;
  int nx = 2, ny = 2;
  std::vector<Eigen::MatrixXd> A1, A2;  // per component, nx rows by ny cols

  double hx() const { return (x1 - x0) / (nx - 1); }
  double hy() const { return (y1 - y0) / (ny - 1); }
  bool contains(double x, double y) const;
  Eigen::VectorXd eval1(double x, double y) const;
  Eigen::VectorXd eval2(double x, double y) const;
  void validate() const;

  static ConnectionChart from_function(
      Group group, int dim, double x0, double x1, double y0, double y1, int nx, int ny,
      const std::function<void(double, double, Eigen::VectorXd&, Eigen::VectorXd&)>& f);
};

struct CurvatureResult {
  std::vector<Eigen::MatrixXd> F12;  // per component
  double sup_norm = 0;               // ||F_A||_inf over the chart
};

/// F12 = d1 A2 - d2 A1 + [A1, A2]; the bracket vanishes for the torus and is
/// the quaternion commutator 2 u x v otherwise. Central differences inside,
/// second-order one-sided at the chart edges.
CurvatureResult curvature(const ConnectionChart& conn);

using ConnectionEval =
    std::function<void(double x, double y, Eigen::VectorXd& a1, Eigen::VectorXd& a2)>;

struct HolonomyOptions {
  double max_increment = 0.1;  // reject steps with a larger Lie-algebra move
};

/// Parallel transport around the loop, basepoint = sample 0: integrates
/// dh/dt = -A(dx/dt) h with classical RK4, stage positions from the local
/// cubic through neighbouring samples, projecting back to the group after
/// every step. The loop must stay inside the chart.
GroupElement holonomy(const ConnectionChart& conn, const loops::DiscreteLoop& loop,
                      const HolonomyOptions& opt = {});
/// Same ODE with an analytically evaluated connection.
GroupElement holonomy(Group group, int dim, const ConnectionEval& eval,
                      const loops::DiscreteLoop& loop, const HolonomyOptions& opt = {});

/// Spectral length of a planar sampled loop.
double loop_length(const loops::DiscreteLoop& loop);

struct ScalingRow {
  double ell = 0;
  double dist = 0;
  double ratio = 0;  // dist / (supF ell^2)
};

struct ScalingReport {
  double sup_curvature = 0;
  std::vector<ScalingRow> rows;
  double max_ratio = 0;
  double fitted_exponent = 0;  // log-log slope of dist against ell
};

/// Rows (l, d(1,h), ratio) over a shrinking loop family plus the fitted
/// exponent of d(1,h) against l; quadratic scaling is the testable content.
ScalingReport holonomy_bound_scaling(const ConnectionChart& conn,
                                     const std::vector<loops::DiscreteLoop>& family,
                                     const HolonomyOptions& opt = {});

}  // namespace vortexlab::holonomy
