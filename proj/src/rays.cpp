#include "finsler/rays.hpp"

#include <algorithm>
#include <cmath>

#include "finsler/errors.hpp"

namespace finsler {

namespace {

double spread(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= v.size();
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= v.size();
  return std::sqrt(var) / std::max(std::abs(mean), 1e-300);
}

// Piecewise-linear resample of (nodes, t) so that the per-segment weights
// (lengths in some auxiliary metric) become uniform.  Endpoints are kept.
void resampleByWeights(std::vector<Vec>& nodes, std::vector<double>& t,
                       const std::vector<double>& weights) {
  const int N = static_cast<int>(weights.size());
  std::vector<double> cum(N + 1, 0.0);
  for (int k = 0; k < N; ++k) cum[k + 1] = cum[k] + weights[k];
  const double L = cum[N];
  if (L <= 0.0) return;

  std::vector<Vec> nx(N + 1);
  std::vector<double> nt(N + 1);
  nx[0] = nodes[0];
  nt[0] = t[0];
  nx[N] = nodes[N];
  nt[N] = t[N];
  int seg = 0;
  for (int j = 1; j < N; ++j) {
    const double target = L * j / N;
    while (seg + 1 < N && cum[seg + 1] < target) ++seg;
    const double w = weights[seg];
    const double theta = w > 0.0 ? (target - cum[seg]) / w : 0.0;
    nx[j] = nodes[seg] + theta * (nodes[seg + 1] - nodes[seg]);
    nt[j] = t[seg] + theta * (t[seg + 1] - t[seg]);
  }
  nodes = std::move(nx);
  t = std::move(nt);
}

}  // namespace

LightRay liftToLightlike(const StationarySpacetime& st, const DiscreteCurve& geodesic, double t0,
                         TimeDirection direction, double residualGate) {
  const FinslerMetric metric =
      direction == TimeDirection::Future ? fermatMetric(st) : reversedFermatMetric(st);

  const GeodesicResidual res = geodesicResidual(metric, geodesic);
  if (res.maxNodeDeviation > residualGate)
    throw NotAGeodesic("curve fails the geodesic residual gate: deviation " +
                       std::to_string(res.maxNodeDeviation));

  const int N = geodesic.segments();
  const TimeReconstruction rec = reconstructTime(st, geodesic, t0, direction);

  LightRay ray;
  ray.direction = direction;
  ray.arrivalTime = rec.arrivalTime;
  ray.fermatLength = rec.fermatLength;
  ray.spatial = geodesic;
  ray.times = rec.t;

  // Constant h-speed gauge: h is shared by the forward and reversed metrics.
  const RiemannianField& h = metric.randersData().h;
  std::vector<double> weights(N);
  for (int k = 0; k < N; ++k) {
    const Vec d = geodesic.delta(k);
    weights[k] = std::sqrt(std::max(0.0, d.dot(h(geodesic.midpoint(k)) * d)));
  }
  resampleByWeights(ray.spatial.nodes, ray.times, weights);

  // Null and Euler-Lagrange diagnostics at the resampled segment midpoints.
  std::vector<double> constancy(N);
  for (int j = 0; j < N; ++j) {
    const Vec d = ray.spatial.delta(j);
    const Vec xdot = N * d;
    const double tdot = N * (ray.times[j + 1] - ray.times[j]);
    const Vec m = ray.spatial.midpoint(j);
    const double q = st.lorentz(m, xdot, tdot);
    ray.nullResidual = std::max(ray.nullResidual, std::abs(q) / (1.0 + tdot * tdot));
    constancy[j] = tdot - (st.gTilde(m) * st.delta(m)).dot(xdot);
  }
  ray.elConstancy = spread(constancy);
  return ray;
}

std::vector<LightRay> lensImages(const StationarySpacetime& st, const Vec& source, double t0,
                                 const Vec& observer, const RayOptions& opts) {
  const FinslerMetric metric =
      opts.direction == TimeDirection::Future ? fermatMetric(st) : reversedFermatMetric(st);

  std::vector<LightRay> rays;
  for (const ConnectResult& r : multistartHomotopy(metric, source, observer, opts.maxWinding,
                                                   opts.nSegments, opts.tol, opts.maxIterations)) {
    if (r.zeroCurve) continue;
    LightRay ray;
    try {
      ray = liftToLightlike(st, r.curve, t0, opts.direction, opts.residualGate);
    } catch (const NotAGeodesic&) {
      // Stalled candidates (typically curves pressed against the chart
      // boundary) are not geodesics and produce no image.
      continue;
    }
    ray.energy = r.energy;
    ray.gradNorm = r.gradNorm;
    ray.iterations = r.iterations;
    ray.converged = r.converged;
    rays.push_back(std::move(ray));
  }
  std::stable_sort(rays.begin(), rays.end(), [](const LightRay& a, const LightRay& b) {
    return a.arrivalTime < b.arrivalTime;
  });
  return rays;
}

StationarySpacetime ExtendedSpacetime::product() const {
  const int n = base.space.dim();
  const ChartDomain ext = base.space.extended(fiber);
  const RiemannianField g0 = base.g0;
  const VectorField delta = base.delta;
  const ScalarField beta = base.beta;

  StationarySpacetime out;
  out.space = ext;
  out.g0 = RiemannianField(ext, [g0, beta, n](const Vec& xu) {
    const Vec x = xu.head(n);
    Mat g = Mat::Zero(n + 1, n + 1);
    g.topLeftCorner(n, n) = g0(x);
    g(n, n) = 1.0 / beta(x);
    return g;
  });
  out.delta = VectorField(ext, [delta, n](const Vec& xu) {
    Vec d = Vec::Zero(n + 1);
    d.head(n) = delta(xu.head(n));
    return d;
  });
  out.beta = ScalarField(ext, [beta, n](const Vec& xu) { return beta(xu.head(n)); });
  return out;
}

FinslerMetric ExtendedSpacetime::metric() const { return fermatMetric(product()); }

ExtendedSpacetime kaluzaKleinExtend(const StationarySpacetime& st, double E, Interval fiber) {
  if (!(E > 0.0)) throw ConfigError("energy level must be positive");
  if (!(fiber.lo < fiber.hi)) throw ConfigError("fiber interval must be nonempty");
  return ExtendedSpacetime{st, E, fiber};
}

std::vector<TimelikeResult> timelikeFixedEnergy(const StationarySpacetime& st, const Vec& source,
                                                double t0, const Vec& observer, double E, double a,
                                                double b, const RayOptions& opts) {
  if (!(b > a)) throw ConfigError("parameter interval must satisfy a < b");
  const int n = st.space.dim();
  const double du = std::sqrt(E) * (b - a);
  const double pad = 1.0 + std::abs(du);
  const ExtendedSpacetime ext = kaluzaKleinExtend(st, E, Interval{-pad, du + pad});
  const StationarySpacetime prod = ext.product();
  const FinslerMetric extMetric =
      opts.direction == TimeDirection::Future ? fermatMetric(prod) : reversedFermatMetric(prod);

  Vec p(n + 1), q(n + 1);
  p << source, 0.0;
  q << observer, du;

  const double sign = opts.direction == TimeDirection::Future ? 1.0 : -1.0;
  std::vector<TimelikeResult> out;
  for (const ConnectResult& r : multistartHomotopy(extMetric, p, q, opts.maxWinding,
                                                   opts.nSegments, opts.tol, opts.maxIterations)) {
    if (r.zeroCurve) continue;
    if (geodesicResidual(extMetric, r.curve).maxNodeDeviation > opts.residualGate) continue;
    const int N = r.curve.segments();

    TimelikeResult tr;
    tr.energy = r.energy;
    tr.gradNorm = r.gradNorm;
    tr.iterations = r.iterations;
    tr.converged = r.converged;
    tr.extendedLength = r.length;
    tr.winding = r.curve.winding.head(n);

    tr.times.resize(N + 1);
    tr.times[0] = t0;
    for (int k = 0; k < N; ++k) {
      const Vec d = r.curve.delta(k);
      const double Fk = extMetric.value(r.curve.midpoint(k), N * d);
      tr.times[k + 1] = tr.times[k] + sign * Fk / N;
    }
    tr.arrivalTime = tr.times[N];

    tr.spatial.resize(N + 1);
    tr.fiber.resize(N + 1);
    for (int i = 0; i <= N; ++i) {
      tr.spatial[i] = r.curve.nodes[i].head(n);
      tr.fiber[i] = r.curve.nodes[i][n];
    }

    // sigma-derivatives on the uniform grid over [a, b].
    std::vector<double> fiberRate(N);
    for (int j = 0; j < N; ++j) {
      const double scale = N / (b - a);
      const Vec xdot = scale * (tr.spatial[j + 1] - tr.spatial[j]);
      const double tdot = scale * (tr.times[j + 1] - tr.times[j]);
      fiberRate[j] = scale * (tr.fiber[j + 1] - tr.fiber[j]);
      const Vec m = 0.5 * (tr.spatial[j] + tr.spatial[j + 1]);
      tr.energyResidual =
          std::max(tr.energyResidual, std::abs(st.lorentz(m, xdot, tdot) + E));
    }
    tr.fiberRateSpread = spread(fiberRate);
    out.push_back(std::move(tr));
  }
  std::stable_sort(out.begin(), out.end(), [](const TimelikeResult& x, const TimelikeResult& y) {
    return x.arrivalTime < y.arrivalTime;
  });
  return out;
}

}  // namespace finsler
