#include "finsler/causality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <queue>

#include "finsler/errors.hpp"

namespace finsler {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::vector<double>> buildTicks(const ChartDomain& domain,
                                            const std::vector<int>& res) {
  const int n = domain.dim();
  if (static_cast<int>(res.size()) != n)
    throw ConfigError("grid resolution rank does not match chart dimension");
  std::vector<std::vector<double>> ticks(n);
  for (int a = 0; a < n; ++a) {
    if (res[a] < 3) throw ConfigError("distance grids need at least 3 nodes per axis");
    ticks[a].reserve(res[a]);
    if (domain.isPeriodic(a)) {
      const double p = *domain.period(a);
      for (int j = 0; j < res[a]; ++j) ticks[a].push_back(j * p / res[a]);
    } else if (domain.bounds(a)) {
      const auto [lo, hi] = *domain.bounds(a);
      for (int j = 0; j < res[a]; ++j) ticks[a].push_back(lo + j * (hi - lo) / (res[a] - 1));
    } else {
      throw ConfigError("distance grids need bounds on every non-periodic axis");
    }
  }
  return ticks;
}

double axisStep(const ChartDomain& domain, const std::vector<int>& res, int a) {
  if (domain.isPeriodic(a)) return *domain.period(a) / res[a];
  const auto [lo, hi] = *domain.bounds(a);
  return (hi - lo) / (res[a] - 1);
}

// All primitive integer offsets with sup norm <= 2 (16 directions in 2D).
std::vector<std::vector<int>> stencilOffsets(int dim) {
  std::vector<std::vector<int>> offsets;
  std::vector<int> off(dim, -2);
  while (true) {
    int g = 0;
    for (int v : off) g = std::gcd(g, std::abs(v));
    if (g == 1) offsets.push_back(off);
    int a = dim - 1;
    for (; a >= 0; --a) {
      if (++off[a] <= 2) break;
      off[a] = -2;
    }
    if (a < 0) break;
  }
  return offsets;
}

struct GridGeometry {
  const DistanceGrid& g;

  bool neighbor(long idx, const std::vector<int>& off, long& out, Vec& disp) const {
    const int n = g.domain.dim();
    std::vector<int> c = g.coords(idx);
    for (int a = 0; a < n; ++a) {
      int j = c[a] + off[a];
      if (g.domain.isPeriodic(a)) {
        j = ((j % g.res[a]) + g.res[a]) % g.res[a];
      } else if (j < 0 || j >= g.res[a]) {
        return false;
      }
      disp[a] = off[a] * axisStep(g.domain, g.res, a);
      c[a] = j;
    }
    out = g.index(c);
    return true;
  }
};

void dijkstra(const DistanceGrid& grid, const FinslerMetric& metric, bool forward,
              std::vector<double>& dist, std::vector<int>& pred) {
  const long n = grid.nodeCount();
  dist.assign(n, kInf);
  pred.assign(n, -1);
  std::vector<char> done(n, 0);
  const auto offsets = stencilOffsets(grid.domain.dim());
  const GridGeometry geo{grid};

  using Item = std::pair<double, long>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  dist[grid.sourceNode] = 0.0;
  pq.push({0.0, grid.sourceNode});

  Vec disp(grid.domain.dim());
  while (!pq.empty()) {
    const auto [d, a] = pq.top();
    pq.pop();
    if (done[a]) continue;
    done[a] = 1;
    const Vec pa = grid.point(a);
    for (const auto& off : offsets) {
      long b;
      if (!geo.neighbor(a, off, b, disp)) continue;
      if (done[b]) continue;
      const Vec mid = pa + 0.5 * disp;
      const double w = forward ? metric.value(mid, disp) : metric.value(mid, Vec(-disp));
      const double nd = d + w;
      if (nd < dist[b]) {
        dist[b] = nd;
        pred[b] = static_cast<int>(a);
        pq.push({nd, b});
      }
    }
  }
}

double multilinear(const DistanceGrid& g, const std::vector<double>& f, const Vec& xq) {
  const int n = g.domain.dim();
  if (!g.domain.inBounds(xq)) return kInf;
  const Vec x = g.domain.wrap(xq);

  std::vector<int> i0(n);
  std::vector<int> i1(n);
  std::vector<double> frac(n);
  for (int a = 0; a < n; ++a) {
    const double step = axisStep(g.domain, g.res, a);
    if (g.domain.isPeriodic(a)) {
      const double u = x[a] / step;
      const int j = static_cast<int>(std::floor(u)) % g.res[a];
      i0[a] = j;
      i1[a] = (j + 1) % g.res[a];
      frac[a] = u - std::floor(u);
    } else {
      double u = (x[a] - g.ticks[a].front()) / step;
      u = std::clamp(u, 0.0, static_cast<double>(g.res[a] - 1));
      int j = std::min(static_cast<int>(std::floor(u)), g.res[a] - 2);
      i0[a] = j;
      i1[a] = j + 1;
      frac[a] = u - j;
    }
  }

  double acc = 0.0;
  std::vector<int> c(n);
  for (int corner = 0; corner < (1 << n); ++corner) {
    double w = 1.0;
    for (int a = 0; a < n; ++a) {
      const bool hi = corner & (1 << a);
      c[a] = hi ? i1[a] : i0[a];
      w *= hi ? frac[a] : 1.0 - frac[a];
    }
    if (w == 0.0) continue;
    const double v = f[g.index(c)];
    if (!std::isfinite(v)) return kInf;
    acc += w * v;
  }
  return acc;
}

// --- marching squares --------------------------------------------------------

using Segment = std::pair<Vec, Vec>;

Vec lerpCrossing(const Vec& pa, const Vec& pb, double va, double vb, double s) {
  const double big = 1e6 * (1.0 + std::abs(s));
  if (!std::isfinite(va)) va = s + big;
  if (!std::isfinite(vb)) vb = s + big;
  double t = (vb - va) != 0.0 ? (s - va) / (vb - va) : 0.5;
  t = std::clamp(t, 0.0, 1.0);
  return pa + t * (pb - pa);
}

std::vector<std::vector<Vec>> chainSegments(std::vector<Segment> segs) {
  const auto key = [](const Vec& p) {
    return std::pair<long long, long long>{llround(p[0] * 1e8), llround(p[1] * 1e8)};
  };
  std::map<std::pair<long long, long long>, std::vector<size_t>> at;
  for (size_t i = 0; i < segs.size(); ++i) {
    at[key(segs[i].first)].push_back(i);
    at[key(segs[i].second)].push_back(i);
  }
  std::vector<char> used(segs.size(), 0);
  std::vector<std::vector<Vec>> polys;

  const auto extend = [&](std::vector<Vec>& poly) {
    while (true) {
      const auto it = at.find(key(poly.back()));
      if (it == at.end()) return;
      size_t next = segs.size();
      for (size_t i : it->second)
        if (!used[i]) {
          next = i;
          break;
        }
      if (next == segs.size()) return;
      used[next] = 1;
      const auto& [p, q] = segs[next];
      poly.push_back(key(p) == key(poly.back()) ? q : p);
    }
  };

  for (size_t i = 0; i < segs.size(); ++i) {
    if (used[i]) continue;
    used[i] = 1;
    std::vector<Vec> poly{segs[i].first, segs[i].second};
    extend(poly);
    std::reverse(poly.begin(), poly.end());
    extend(poly);
    polys.push_back(std::move(poly));
  }
  return polys;
}

std::vector<std::vector<Vec>> levelContours(const DistanceGrid& g, const std::vector<double>& f,
                                            double s) {
  if (g.domain.dim() != 2) return {};
  std::vector<Segment> segs;
  for (int i = 0; i + 1 < g.res[0]; ++i) {
    for (int j = 0; j + 1 < g.res[1]; ++j) {
      const std::vector<int> c00{i, j}, c10{i + 1, j}, c11{i + 1, j + 1}, c01{i, j + 1};
      const double v00 = f[g.index(c00)], v10 = f[g.index(c10)];
      const double v11 = f[g.index(c11)], v01 = f[g.index(c01)];
      const Vec p00 = g.point(g.index(c00)), p10 = g.point(g.index(c10));
      const Vec p11 = g.point(g.index(c11)), p01 = g.point(g.index(c01));

      int mask = 0;
      if (v00 <= s) mask |= 1;
      if (v10 <= s) mask |= 2;
      if (v11 <= s) mask |= 4;
      if (v01 <= s) mask |= 8;
      if (mask == 0 || mask == 15) continue;

      const Vec eBottom = lerpCrossing(p00, p10, v00, v10, s);
      const Vec eRight = lerpCrossing(p10, p11, v10, v11, s);
      const Vec eTop = lerpCrossing(p01, p11, v01, v11, s);
      const Vec eLeft = lerpCrossing(p00, p01, v00, v01, s);

      switch (mask) {
        case 1: case 14: segs.push_back({eLeft, eBottom}); break;
        case 2: case 13: segs.push_back({eBottom, eRight}); break;
        case 4: case 11: segs.push_back({eRight, eTop}); break;
        case 8: case 7: segs.push_back({eTop, eLeft}); break;
        case 3: case 12: segs.push_back({eLeft, eRight}); break;
        case 6: case 9: segs.push_back({eBottom, eTop}); break;
        case 5: case 10: {
          const double center = 0.25 * (v00 + v10 + v11 + v01);
          const bool centerIn = center <= s;
          if ((mask == 5) == centerIn) {
            segs.push_back({eLeft, eTop});
            segs.push_back({eBottom, eRight});
          } else {
            segs.push_back({eLeft, eBottom});
            segs.push_back({eRight, eTop});
          }
          break;
        }
      }
    }
  }
  return chainSegments(std::move(segs));
}

}  // namespace

long DistanceGrid::nodeCount() const {
  long n = 1;
  for (int r : res) n *= r;
  return n;
}

long DistanceGrid::index(const std::vector<int>& c) const {
  long idx = 0;
  for (size_t a = 0; a < c.size(); ++a) idx = idx * res[a] + c[a];
  return idx;
}

std::vector<int> DistanceGrid::coords(long idx) const {
  std::vector<int> c(res.size());
  for (int a = static_cast<int>(res.size()) - 1; a >= 0; --a) {
    c[a] = static_cast<int>(idx % res[a]);
    idx /= res[a];
  }
  return c;
}

Vec DistanceGrid::point(long idx) const {
  const auto c = coords(idx);
  Vec x(domain.dim());
  for (int a = 0; a < domain.dim(); ++a) x[a] = ticks[a][c[a]];
  return x;
}

long DistanceGrid::nearestNode(const Vec& xq) const {
  const Vec x = domain.wrap(xq);
  std::vector<int> c(domain.dim());
  for (int a = 0; a < domain.dim(); ++a) {
    const double step = axisStep(domain, res, a);
    if (domain.isPeriodic(a)) {
      c[a] = static_cast<int>(std::lround(x[a] / step)) % res[a];
    } else {
      const long j = std::lround((x[a] - ticks[a].front()) / step);
      c[a] = static_cast<int>(std::clamp(j, 0L, static_cast<long>(res[a] - 1)));
    }
  }
  return index(c);
}

double DistanceGrid::interpPlus(const Vec& x) const { return multilinear(*this, dPlus, x); }
double DistanceGrid::interpMinus(const Vec& x) const { return multilinear(*this, dMinus, x); }

std::vector<Vec> DistanceGrid::pathFromSource(long node) const {
  std::vector<long> chain;
  for (long cur = node; cur != -1; cur = predPlus[cur]) chain.push_back(cur);
  std::reverse(chain.begin(), chain.end());

  std::vector<Vec> path;
  path.reserve(chain.size());
  path.push_back(point(chain.front()));
  for (size_t i = 1; i < chain.size(); ++i)
    path.push_back(path.back() + domain.minimalDifference(point(chain[i]), point(chain[i - 1])));
  return path;
}

DistanceGrid distanceMap(const FinslerMetric& metric, const Vec& x0, const std::vector<int>& res) {
  DistanceGrid g;
  g.domain = metric.domain();
  g.res = res;
  g.ticks = buildTicks(g.domain, res);
  g.sourceNode = static_cast<int>(g.nearestNode(x0));
  g.source = g.point(g.sourceNode);

  dijkstra(g, metric, true, g.dPlus, g.predPlus);
  dijkstra(g, metric, false, g.dMinus, g.predMinus);
  return g;
}

double omegaNormSup(const FinslerMetric& metric, const std::vector<int>& res) {
  const RandersData& data = metric.randersData();
  double sup = 0.0;
  for (const Vec& x : boundsGrid(metric.domain(), res)) sup = std::max(sup, data.omegaNorm(x));
  return sup;
}

GrowthReport growthConditionCheck(const StationarySpacetime& st, const Vec& basePoint,
                                  const std::array<double, 4>& c, const std::vector<int>& res) {
  RandersData riem;
  riem.h = st.g0;
  riem.omega = OneFormField(st.space, [n = st.space.dim()](const Vec&) { return Vec::Zero(n); });
  const FinslerMetric g0metric = FinslerMetric::randers(st.space, std::move(riem));
  const DistanceGrid grid = distanceMap(g0metric, basePoint, res);

  GrowthReport rep;
  rep.worstDelta = -kInf;
  rep.worstBeta = -kInf;
  for (long i = 0; i < grid.nodeCount(); ++i) {
    const Vec x = grid.point(i);
    const double d0 = grid.dPlus[i];
    const Vec dlt = st.delta(x);
    const double dn2 = dlt.dot(st.g0(x) * dlt);
    const double dv = dn2 - (c[0] * d0 * d0 + c[1]);
    const double bv = st.beta(x) - (c[2] * d0 * d0 + c[3]);
    if (dv > rep.worstDelta) {
      rep.worstDelta = dv;
      rep.worstDeltaPoint = x;
    }
    if (bv > rep.worstBeta) {
      rep.worstBeta = bv;
      rep.worstBetaPoint = x;
    }
  }
  rep.pass = rep.worstDelta <= 0.0 && rep.worstBeta <= 0.0;
  return rep;
}

double deltaBetaCondition(const StationarySpacetime& st, const std::vector<int>& res) {
  double sup = 0.0;
  for (const Vec& x : boundsGrid(st.space, res)) {
    const Vec d = st.delta(x);
    const double q = d.dot(st.g0(x) * d);
    sup = std::max(sup, std::sqrt(q / (q + st.beta(x))));
  }
  return sup;
}

bool CausalCone::contains(const Vec& x, double t) const {
  const double dt = direction == TimeDirection::Future ? t - apexTime : apexTime - t;
  if (dt < 0.0 || dt > horizon) return false;
  const double d = direction == TimeDirection::Future ? grid.interpPlus(x) : grid.interpMinus(x);
  return d <= dt;
}

CausalCone causalCone(const StationarySpacetime& st, const Vec& apex, double apexTime,
                      double horizon, TimeDirection direction, const std::vector<int>& res,
                      int nSlices) {
  if (!(horizon > 0.0)) throw ConfigError("cone horizon must be positive");
  CausalCone cone;
  cone.apex = apex;
  cone.apexTime = apexTime;
  cone.horizon = horizon;
  cone.direction = direction;
  cone.grid = distanceMap(fermatMetric(st), apex, res);

  for (int k = 1; k <= nSlices; ++k) {
    ConeSlice slice;
    slice.timeOffset = horizon * k / nSlices;
    const auto& field = direction == TimeDirection::Future ? cone.grid.dPlus : cone.grid.dMinus;
    slice.contours = levelContours(cone.grid, field, slice.timeOffset);
    cone.slices.push_back(std::move(slice));
  }
  return cone;
}

CrosscheckReport connectivityCrosscheck(const StationarySpacetime& st, const DistanceGrid& grid,
                                        double t0, const Vec& x1, double t1) {
  CrosscheckReport rep;
  const long target = grid.nearestNode(x1);
  rep.distance = grid.dPlus[target];
  if (!std::isfinite(rep.distance)) {
    rep.member = false;
    rep.consistent = true;
    return rep;
  }

  rep.member = rep.distance <= t1 - t0;

  // Rebuild the optimal light path and re-sum its cost independently.
  const FinslerMetric metric = fermatMetric(st);
  rep.spatialPath = grid.pathFromSource(target);
  rep.times.resize(rep.spatialPath.size());
  rep.times[0] = t0;
  for (size_t i = 1; i < rep.spatialPath.size(); ++i) {
    const Vec d = rep.spatialPath[i] - rep.spatialPath[i - 1];
    const Vec mid = 0.5 * (rep.spatialPath[i] + rep.spatialPath[i - 1]);
    const double w = metric.value(mid, d);
    rep.pathLength += w;
    rep.times[i] = rep.times[i - 1] + w;

    const double q = st.lorentz(mid, d, w);
    rep.maxCausalViolation = std::max(rep.maxCausalViolation, std::max(0.0, q) / (1.0 + w * w));
  }
  rep.curveConstructed = true;

  // Causal curve to (x1, t1) exists iff the light path arrives no later; it
  // then waits on the stationary worldline, which is timelike.
  if (rep.member && t1 > rep.times.back()) {
    rep.spatialPath.push_back(rep.spatialPath.back());
    rep.times.push_back(t1);
  }

  const double tol = 1e-9 * (1.0 + std::abs(rep.distance));
  const bool lengthsAgree = std::abs(rep.pathLength - rep.distance) <= tol;
  const bool arrivalAgrees = rep.member == (t0 + rep.pathLength <= t1 + tol);
  rep.consistent = lengthsAgree && arrivalAgrees && rep.maxCausalViolation <= 1e-9;
  return rep;
}

CrosscheckReport connectivityCrosscheck(const StationarySpacetime& st, const Vec& x0, double t0,
                                        const Vec& x1, double t1, const std::vector<int>& res) {
  const DistanceGrid grid = distanceMap(fermatMetric(st), x0, res);
  return connectivityCrosscheck(st, grid, t0, x1, t1);
}

}  // namespace finsler
