#pragma once

#include "finsler/curve.hpp"
#include "finsler/metric.hpp"

namespace finsler {

// Standard stationary splitting g = g0 + 2 g0[delta, .] dt - beta dt^2 on
// space x R_t, with optional designated conformal factor phi.
struct StationarySpacetime {
  ChartDomain space;
  RiemannianField g0;
  VectorField delta;
  ScalarField beta;
  std::optional<ScalarField> conformal;

  Mat gTilde(const Vec& x) const { return g0(x) / beta(x); }

  // g(zdot, zdot) for zdot = (y, tdot).
  double lorentz(const Vec& x, const Vec& y, double tdot) const {
    const Mat g = g0(x);
    return y.dot(g * y) + 2.0 * tdot * (g * delta(x)).dot(y) - beta(x) * tdot * tdot;
  }
};

// Divides g0 and beta by the conformal factor; the Fermat metric (and light
// rays) are unchanged.  Throws NonPositiveConformal when phi <= 0 somewhere
// on the sample grid.
StationarySpacetime conformalNormalize(const StationarySpacetime& st,
                                       const std::vector<int>& gridRes);

// Fermat metric: Randers with h = gt + (gt delta)(gt delta)^T, omega = gt delta,
// gt = g0/beta.  Future-pointing light rays project to its geodesics.
FinslerMetric fermatMetric(const StationarySpacetime& st);

// Reversed metric F*(x, y) = F(x, -y); past-pointing rays project to its
// geodesics.
FinslerMetric reversedFermatMetric(const StationarySpacetime& st);

enum class TimeDirection { Future, Past };

struct TimeReconstruction {
  std::vector<double> t;  // one entry per node
  double arrivalTime = 0.0;
  double fermatLength = 0.0;  // same-quadrature length, = |arrival - t0|
};

// Integrates tdot = F(x, xdot) (future) or tdot = -F*(x, xdot) (past) with the
// midpoint quadrature of the curve itself.
TimeReconstruction reconstructTime(const StationarySpacetime& st, const DiscreteCurve& spatial,
                                   double t0, TimeDirection direction);

}  // namespace finsler
