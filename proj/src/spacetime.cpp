#include "finsler/spacetime.hpp"

#include <cmath>

#include "finsler/errors.hpp"

namespace finsler {

StationarySpacetime conformalNormalize(const StationarySpacetime& st,
                                       const std::vector<int>& gridRes) {
  if (!st.conformal) return st;
  const ScalarField phi = *st.conformal;
  if (!(phi.minOnGrid(gridRes) > 0.0))
    throw NonPositiveConformal("conformal factor is not positive on the sample grid");

  const RiemannianField g0 = st.g0;
  const ScalarField beta = st.beta;
  StationarySpacetime out;
  out.space = st.space;
  out.g0 = RiemannianField(st.space, [g0, phi](const Vec& x) { return Mat(g0(x) / phi(x)); });
  out.delta = st.delta;
  out.beta = ScalarField(st.space, [beta, phi](const Vec& x) { return beta(x) / phi(x); });
  return out;
}

FinslerMetric fermatMetric(const StationarySpacetime& st) {
  const RiemannianField g0 = st.g0;
  const VectorField delta = st.delta;
  const ScalarField beta = st.beta;

  RandersData data;
  data.h = RiemannianField(st.space, [g0, delta, beta](const Vec& x) {
    const Mat gt = g0(x) / beta(x);
    const Vec w = gt * delta(x);
    return Mat(gt + w * w.transpose());
  });
  data.omega = OneFormField(st.space, [g0, delta, beta](const Vec& x) {
    return Vec(g0(x) / beta(x) * delta(x));
  });
  return FinslerMetric::randers(st.space, std::move(data));
}

FinslerMetric reversedFermatMetric(const StationarySpacetime& st) {
  return fermatMetric(st).reversed();
}

TimeReconstruction reconstructTime(const StationarySpacetime& st, const DiscreteCurve& spatial,
                                   double t0, TimeDirection direction) {
  const FinslerMetric metric =
      direction == TimeDirection::Future ? fermatMetric(st) : reversedFermatMetric(st);
  const int N = spatial.segments();
  const double sign = direction == TimeDirection::Future ? 1.0 : -1.0;

  TimeReconstruction out;
  out.t.resize(N + 1);
  out.t[0] = t0;
  for (int k = 0; k < N; ++k) {
    const Vec d = spatial.delta(k);
    const double Fk =
        (N * d).lpNorm<Eigen::Infinity>() <= kDegenerateEps
            ? 0.0
            : metric.value(spatial.midpoint(k), N * d);
    out.fermatLength += Fk / N;
    out.t[k + 1] = out.t[k] + sign * Fk / N;
  }
  out.arrivalTime = out.t[N];
  return out;
}

}  // namespace finsler
