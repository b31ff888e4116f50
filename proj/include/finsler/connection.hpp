#pragma once

#include "finsler/metric.hpp"

namespace finsler {

struct ConnectionCoefficients {
  Tensor3 gamma;   // formal Christoffel gamma^i_jk of the fundamental tensor
  Mat nonlinear;   // N^i_j
  Tensor3 chern;   // Gamma^i_jk
};

ConnectionCoefficients chernCoefficients(const FinslerMetric& metric, const Vec& x, const Vec& y);

// Spray right-hand side: a^i = -gamma^i_jk(x, y) y^j y^k.  The Cartan terms of
// the Chern connection drop out when contracted with y, so geodesics need only
// the formal Christoffel part.
Vec geodesicAcceleration(const FinslerMetric& metric, const Vec& x, const Vec& y);

// (D_T W)^i = Wdot^i + W^j T^k Gamma^i_jk(x, T), reference vector T.
Vec covariantDerivative(const FinslerMetric& metric, const Vec& x, const Vec& T, const Vec& W,
                        const Vec& Wdot);

struct ShotCurve {
  std::vector<double> s;
  std::vector<Vec> x;
  std::vector<Vec> v;
  bool exitedBounds = false;
  double maxSpeedDrift = 0.0;  // max |F(x,v) - F0| / F0 along the trajectory
};

// Classical RK4 with fixed step on the geodesic spray; stops with a partial
// curve when the trajectory leaves the declared bounds.
ShotCurve geodesicShoot(const FinslerMetric& metric, Vec x0, Vec y0, double sMax,
                        double step = 1e-3);

}  // namespace finsler
