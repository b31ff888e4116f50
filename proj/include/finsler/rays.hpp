#pragma once

#include "finsler/spacetime.hpp"
#include "finsler/variational.hpp"

namespace finsler {

struct LightRay {
  DiscreteCurve spatial;       // constant h-speed gauge
  std::vector<double> times;   // per node; increasing (future) or decreasing (past)
  double arrivalTime = 0.0;
  TimeDirection direction = TimeDirection::Future;
  double fermatLength = 0.0;   // |arrivalTime - t0|, same-quadrature length
  double nullResidual = 0.0;   // max_j |g(zdot, zdot)| / (1 + tdot^2) at segment midpoints
  double elConstancy = 0.0;    // spread/|mean| of tdot - gTilde[delta, xdot]
  double energy = 0.0;
  double gradNorm = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Lifts a converged Fermat geodesic to a lightlike curve: time reconstruction
// on the input parameterization, then joint linear resampling of (x, t) to
// constant h-speed.  Throws NotAGeodesic when the residual gate fails.
LightRay liftToLightlike(const StationarySpacetime& st, const DiscreteCurve& geodesic, double t0,
                         TimeDirection direction, double residualGate = 5e-3);

struct RayOptions {
  int maxWinding = 1;
  int nSegments = 128;
  double tol = 1e-8;
  int maxIterations = 5000;
  TimeDirection direction = TimeDirection::Future;
  double residualGate = 5e-3;  // max shot deviation accepted as a geodesic
};

// Multi-image lensing: one candidate per winding class, lifted and sorted by
// arrival time.
std::vector<LightRay> lensImages(const StationarySpacetime& st, const Vec& source, double t0,
                                 const Vec& observer, const RayOptions& opts = {});

// Product spacetime (space x R_u, g0 + du^2/beta, same delta and beta) whose
// Fermat metric encodes fixed-energy timelike geodesics of the base.
struct ExtendedSpacetime {
  StationarySpacetime base;
  double energyLevel = 0.0;
  Interval fiber;

  StationarySpacetime product() const;  // the extended stationary spacetime
  FinslerMetric metric() const;         // its Fermat metric on space x fiber
};

ExtendedSpacetime kaluzaKleinExtend(const StationarySpacetime& st, double E, Interval fiber);

struct TimelikeResult {
  std::vector<Vec> spatial;     // x(sigma_i) on the uniform sigma grid over [a,b]
  std::vector<double> times;    // t(sigma_i)
  std::vector<double> fiber;    // u(sigma_i)
  double arrivalTime = 0.0;
  double extendedLength = 0.0;
  double energyResidual = 0.0;    // max_j |g(zdot, zdot) + E|
  double fiberRateSpread = 0.0;   // spread/|mean| of du/dsigma
  VecI winding;
  double energy = 0.0;
  double gradNorm = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Fixed-energy timelike connection: g(zdot, zdot) = -E on [a, b] from
// (source, t0) to the observer's worldline, one result per winding class.
std::vector<TimelikeResult> timelikeFixedEnergy(const StationarySpacetime& st, const Vec& source,
                                                double t0, const Vec& observer, double E, double a,
                                                double b, const RayOptions& opts = {});

}  // namespace finsler
