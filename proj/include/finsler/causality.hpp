#pragma once

#include <array>

#include "finsler/metric.hpp"
#include "finsler/spacetime.hpp"

namespace finsler {

// Asymmetric distances d(x0, .) and d(., x0) on a uniform grid over the
// declared bounds, computed by Dijkstra with a 16-neighbor stencil (all
// primitive integer offsets with sup norm <= 2; 16 directions in 2D) and
// edge weights w(a -> b) = F(midpoint, b - a).
struct DistanceGrid {
  ChartDomain domain;
  std::vector<int> res;
  std::vector<std::vector<double>> ticks;  // per-axis node coordinates
  int sourceNode = 0;
  Vec source;  // grid node snapped to the requested x0

  std::vector<double> dPlus;   // d(x0, node)
  std::vector<double> dMinus;  // d(node, x0)
  std::vector<int> predPlus;   // predecessor toward x0 in the forward tree
  std::vector<int> predMinus;  // successor toward x0 in the backward tree

  long nodeCount() const;
  long index(const std::vector<int>& coords) const;
  std::vector<int> coords(long idx) const;
  Vec point(long idx) const;
  long nearestNode(const Vec& x) const;

  double interpPlus(const Vec& x) const;   // multilinear; +inf outside bounds
  double interpMinus(const Vec& x) const;

  // Forward tree path x0 -> node as a lifted polyline (periodic axes unwrapped).
  std::vector<Vec> pathFromSource(long node) const;
};

DistanceGrid distanceMap(const FinslerMetric& metric, const Vec& x0, const std::vector<int>& res);

// sup_x |omega|_x over the grid; Randers metrics only.
double omegaNormSup(const FinslerMetric& metric, const std::vector<int>& res);

// Quadratic growth bounds against the g0 distance from basePoint:
//   |delta|_0^2 <= c[0] d0^2 + c[1]   and   beta <= c[2] d0^2 + c[3].
struct GrowthReport {
  bool pass = false;
  double worstDelta = 0.0;  // max of |delta|_0^2 - (c0 d0^2 + c1); <= 0 passes
  double worstBeta = 0.0;   // max of beta - (c2 d0^2 + c3); <= 0 passes
  Vec worstDeltaPoint;
  Vec worstBetaPoint;
};

GrowthReport growthConditionCheck(const StationarySpacetime& st, const Vec& basePoint,
                                  const std::array<double, 4>& c, const std::vector<int>& res);

// sup_x sqrt(g0[delta,delta] / (g0[delta,delta] + beta)); < 1 with margin
// indicates a uniformly bounded shift.
double deltaBetaCondition(const StationarySpacetime& st, const std::vector<int>& res);

struct ConeSlice {
  double timeOffset = 0.0;
  std::vector<std::vector<Vec>> contours;  // marching-squares polylines (2D)
};

struct CausalCone {
  Vec apex;
  double apexTime = 0.0;
  double horizon = 0.0;
  TimeDirection direction = TimeDirection::Future;
  DistanceGrid grid;  // forward map from the apex; past cones read dMinus
  std::vector<ConeSlice> slices;

  bool contains(const Vec& x, double t) const;
};

CausalCone causalCone(const StationarySpacetime& st, const Vec& apex, double apexTime,
                      double horizon, TimeDirection direction, const std::vector<int>& res,
                      int nSlices = 8);

// Membership by the distance inequality d(x0,x1) <= t1 - t0, cross-checked by
// building the optimal grid light path, re-summing its cost independently and
// lifting it to a causal curve that waits at x1.
struct CrosscheckReport {
  bool member = false;
  bool curveConstructed = false;
  bool consistent = false;
  double distance = 0.0;       // d(x0, x1) on the grid (snapped endpoints)
  double pathLength = 0.0;     // independent re-summation along the path
  double maxCausalViolation = 0.0;  // max_j max(0, g(zdot,zdot)) / (1 + tdot^2)
  std::vector<Vec> spatialPath;
  std::vector<double> times;
};

CrosscheckReport connectivityCrosscheck(const StationarySpacetime& st, const Vec& x0, double t0,
                                        const Vec& x1, double t1, const std::vector<int>& res);
CrosscheckReport connectivityCrosscheck(const StationarySpacetime& st, const DistanceGrid& grid,
                                        double t0, const Vec& x1, double t1);

}  // namespace finsler
