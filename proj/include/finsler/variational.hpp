#pragma once

#include <optional>

#include "finsler/curve.hpp"
#include "finsler/metric.hpp"

namespace finsler {

// Level set {c(x) = 0} with full-rank jacobian, used as a movable endpoint.
struct SubmanifoldConstraint {
  std::function<Vec(const Vec&)> value;     // codim residuals
  std::function<Mat(const Vec&)> jacobian;  // codim x dim
};

struct BoundarySpec {
  enum class Kind { FixedFixed, ProductSubmanifolds, Periodic };
  Kind kind = Kind::FixedFixed;
  std::optional<SubmanifoldConstraint> start;
  std::optional<SubmanifoldConstraint> end;

  static BoundarySpec fixed() { return {}; }
  static BoundarySpec product(SubmanifoldConstraint s, SubmanifoldConstraint e) {
    return {Kind::ProductSubmanifolds, std::move(s), std::move(e)};
  }
  static BoundarySpec periodic() { return {Kind::Periodic, {}, {}}; }
};

struct MinimizeOptions {
  double tol = 1e-8;      // threshold on the H^1 dual norm of the gradient
  int maxIterations = 5000;
  double armijoC = 1e-4;
  double armijoShrink = 0.5;
  bool recordHistory = true;
};

struct MinimizeReport {
  DiscreteCurve curve;
  double energy = 0.0;
  double gradNorm = 0.0;
  int iterations = 0;
  bool converged = false;
  bool zeroCurve = false;
  bool lineSearchStalled = false;
  std::vector<double> energyHistory;
  std::vector<double> gradNormHistory;
  std::vector<double> stepHistory;  // accepted Armijo step length per iteration
};

// Midpoint-rule energy J = 1/(2N) sum G(midpoint_k, N delta_k) and length
// by the same quadrature.
double curveEnergy(const FinslerMetric& metric, const DiscreteCurve& curve);
double curveLength(const FinslerMetric& metric, const DiscreteCurve& curve);

// Exact gradient of the discrete energy, one vector per node, with boundary
// rows zeroed (FixedFixed), tangentially projected (ProductSubmanifolds), or
// folded across the identification x_N = x_0 + offset (Periodic).
std::vector<Vec> energyGradient(const FinslerMetric& metric, const DiscreteCurve& curve,
                                const BoundarySpec& boundary);

// Sobolev-preconditioned descent with Armijo backtracking.
MinimizeReport minimizeEnergy(const FinslerMetric& metric, DiscreteCurve start,
                              const BoundarySpec& boundary, const MinimizeOptions& opts = {});

struct ConnectResult {
  DiscreteCurve curve;
  double length = 0.0;
  double energy = 0.0;
  double gradNorm = 0.0;
  int iterations = 0;
  bool converged = false;
  bool zeroCurve = false;
};

ConnectResult connectPoints(const FinslerMetric& metric, const Vec& p, const Vec& q, int nSegments,
                            double tol = 1e-8, const VecI* winding = nullptr,
                            int maxIterations = 5000);

// One minimization per winding class |k_a| <= maxWinding on periodic axes,
// deduplicated (sup distance < 1e-4 after wrapping) and sorted by energy.
std::vector<ConnectResult> multistartHomotopy(const FinslerMetric& metric, const Vec& p,
                                              const Vec& q, int maxWinding, int nSegments,
                                              double tol = 1e-8, int maxIterations = 5000);

struct GeodesicResidual {
  double maxNodeDeviation = 0.0;          // vs relaunched RK4 shot, sup over nodes
  double maxCovariantAcceleration = 0.0;  // |D_T T| at interior nodes, FD stencils
  bool shotExited = false;
};

GeodesicResidual geodesicResidual(const FinslerMetric& metric, const DiscreteCurve& curve);

}  // namespace finsler
