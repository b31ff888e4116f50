#include "finsler/variational.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>

#include "finsler/connection.hpp"
#include "finsler/errors.hpp"

namespace finsler {

namespace {

bool segmentDegenerate(const Vec& delta, int N) {
  return (N * delta).lpNorm<Eigen::Infinity>() <= kDegenerateEps;
}

// --- H^1 preconditioner -----------------------------------------------------
//
// Mass + stiffness of P1 elements on the uniform parameter grid, ds = 1/N.
// Solving (M + K) u = g per coordinate smooths the raw gradient and makes the
// descent rate mesh independent.

struct Tridiag {
  std::vector<double> diag;
  std::vector<double> off;  // between i and i+1
};

Tridiag h1Natural(int N) {
  const double ds = 1.0 / N;
  Tridiag t;
  t.diag.assign(N + 1, 0.0);
  t.off.assign(N, ds / 6.0 - 1.0 / ds);
  for (int e = 0; e < N; ++e) {
    t.diag[e] += ds / 3.0 + 1.0 / ds;
    t.diag[e + 1] += ds / 3.0 + 1.0 / ds;
  }
  return t;
}

Vec thomasSolve(std::vector<double> diag, std::vector<double> off, Vec rhs) {
  const int n = static_cast<int>(rhs.size());
  for (int i = 1; i < n; ++i) {
    const double w = off[i - 1] / diag[i - 1];
    diag[i] -= w * off[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (int i = n - 2; i >= 0; --i) rhs[i] = (rhs[i] - off[i] * rhs[i + 1]) / diag[i];
  return rhs;
}

// Cyclic symmetric tridiagonal solve (corner couples first and last unknown)
// by Sherman-Morrison on top of the plain Thomas sweep.
Vec cyclicThomasSolve(const Tridiag& t, double corner, const Vec& rhs) {
  const int n = static_cast<int>(rhs.size());
  if (n <= 3) {
    Mat A = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) A(i, i) = t.diag[i];
    for (int i = 0; i + 1 < n; ++i) A(i, i + 1) = A(i + 1, i) = t.off[i];
    A(0, n - 1) += corner;
    A(n - 1, 0) += corner;
    return A.ldlt().solve(rhs);
  }
  const double gamma = -t.diag[0];
  std::vector<double> d = t.diag;
  d[0] -= gamma;
  d[n - 1] -= corner * corner / gamma;
  const Vec y = thomasSolve(d, t.off, rhs);
  Vec u = Vec::Zero(n);
  u[0] = gamma;
  u[n - 1] = corner;
  const Vec z = thomasSolve(d, t.off, u);
  const double vy = y[0] + corner / gamma * y[n - 1];
  const double vz = z[0] + corner / gamma * z[n - 1];
  return y - z * (vy / (1.0 + vz));
}

Mat tangentProjector(const SubmanifoldConstraint& c, const Vec& x) {
  const Mat J = c.jacobian(x);
  const Mat JJt = J * J.transpose();
  return Mat::Identity(x.size(), x.size()) - J.transpose() * JJt.ldlt().solve(J);
}

Vec projectOntoConstraint(const SubmanifoldConstraint& c, Vec x) {
  for (int it = 0; it < 30; ++it) {
    const Vec r = c.value(x);
    if (r.lpNorm<Eigen::Infinity>() <= 1e-10) return x;
    const Mat J = c.jacobian(x);
    const Mat JJt = J * J.transpose();
    x -= J.transpose() * JJt.ldlt().solve(r);
  }
  throw Error("endpoint projection onto the constraint did not converge");
}

// Preconditioned direction and dual norm share the same solve.
struct Preconditioner {
  BoundarySpec::Kind kind;
  Tridiag natural;    // N+1 unknowns (FixedFixed, Product)
  Tridiag cyclic;     // N unknowns (Periodic)
  double corner = 0.0;

  explicit Preconditioner(int N, BoundarySpec::Kind k) : kind(k) {
    if (k == BoundarySpec::Kind::Periodic) {
      const double ds = 1.0 / N;
      cyclic.diag.assign(N, 2.0 * (ds / 3.0 + 1.0 / ds));
      cyclic.off.assign(N - 1, ds / 6.0 - 1.0 / ds);
      corner = ds / 6.0 - 1.0 / ds;
    } else {
      natural = h1Natural(N);
      if (k == BoundarySpec::Kind::FixedFixed) {
        natural.diag.front() = 1.0;
        natural.diag.back() = 1.0;
        natural.off.front() = 0.0;
        natural.off.back() = 0.0;
      }
    }
  }

  // Solves (M+K) u = rhs for one coordinate; rhs and result are per-node.
  Vec solve(const Vec& rhs) const {
    if (kind == BoundarySpec::Kind::Periodic) return cyclicThomasSolve(cyclic, corner, rhs);
    return thomasSolve(natural.diag, natural.off, rhs);
  }
};

std::vector<Vec> preconditionGradient(const Preconditioner& pre, const std::vector<Vec>& grad,
                                      int dim) {
  const int nodes = static_cast<int>(grad.size());
  const int unknowns = pre.kind == BoundarySpec::Kind::Periodic ? nodes - 1 : nodes;
  std::vector<Vec> out(nodes, Vec::Zero(dim));
  Vec rhs(unknowns);
  for (int c = 0; c < dim; ++c) {
    for (int i = 0; i < unknowns; ++i) rhs[i] = grad[i][c];
    const Vec u = pre.solve(rhs);
    for (int i = 0; i < unknowns; ++i) out[i][c] = u[i];
  }
  if (pre.kind == BoundarySpec::Kind::Periodic) out[nodes - 1] = out[0];
  return out;
}

double dualNorm(const Preconditioner& pre, const std::vector<Vec>& grad, int dim) {
  const int nodes = static_cast<int>(grad.size());
  const int unknowns = pre.kind == BoundarySpec::Kind::Periodic ? nodes - 1 : nodes;
  double acc = 0.0;
  Vec rhs(unknowns);
  for (int c = 0; c < dim; ++c) {
    for (int i = 0; i < unknowns; ++i) rhs[i] = grad[i][c];
    acc += rhs.dot(pre.solve(rhs));
  }
  return std::sqrt(std::max(0.0, acc));
}

double flatDot(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i].dot(b[i]);
  return s;
}

}  // namespace

double curveEnergy(const FinslerMetric& metric, const DiscreteCurve& curve) {
  const int N = curve.segments();
  double J = 0.0;
  for (int k = 0; k < N; ++k) {
    const Vec d = curve.delta(k);
    if (segmentDegenerate(d, N)) continue;
    J += metric.energyDensity(curve.midpoint(k), N * d);
  }
  return J / (2.0 * N);
}

double curveLength(const FinslerMetric& metric, const DiscreteCurve& curve) {
  const int N = curve.segments();
  double L = 0.0;
  for (int k = 0; k < N; ++k) {
    const Vec d = curve.delta(k);
    if (segmentDegenerate(d, N)) continue;
    L += metric.value(curve.midpoint(k), N * d);
  }
  return L / N;
}

std::vector<Vec> energyGradient(const FinslerMetric& metric, const DiscreteCurve& curve,
                                const BoundarySpec& boundary) {
  const int N = curve.segments();
  const int dim = curve.dim();
  std::vector<Vec> grad(N + 1, Vec::Zero(dim));

  for (int k = 0; k < N; ++k) {
    const Vec d = curve.delta(k);
    if (segmentDegenerate(d, N)) continue;
    const Vec m = curve.midpoint(k);
    const Vec v = N * d;
    const Vec gx = metric.dGdx(m, v) / (4.0 * N);
    const Vec gy = 0.5 * metric.dGdy(m, v);
    grad[k] += gx - gy;
    grad[k + 1] += gx + gy;
  }

  switch (boundary.kind) {
    case BoundarySpec::Kind::FixedFixed:
      grad[0].setZero();
      grad[N].setZero();
      break;
    case BoundarySpec::Kind::Periodic:
      grad[0] += grad[N];
      grad[N].setZero();
      break;
    case BoundarySpec::Kind::ProductSubmanifolds:
      grad[0] = tangentProjector(*boundary.start, curve.nodes[0]) * grad[0];
      grad[N] = tangentProjector(*boundary.end, curve.nodes[N]) * grad[N];
      break;
  }
  return grad;
}

MinimizeReport minimizeEnergy(const FinslerMetric& metric, DiscreteCurve start,
                              const BoundarySpec& boundary, const MinimizeOptions& opts) {
  const int N = start.segments();
  const int dim = start.dim();
  if (N < 1) throw ConfigError("curve needs at least one segment");
  if (boundary.kind == BoundarySpec::Kind::Periodic && N < 3)
    throw ConfigError("periodic curves need at least 3 segments");
  if (boundary.kind == BoundarySpec::Kind::ProductSubmanifolds &&
      (!boundary.start || !boundary.end))
    throw ConfigError("product boundary needs both endpoint constraints");
  if (start.winding.size() != dim) start.winding = VecI::Zero(dim);

  Vec periodicOffset;
  if (boundary.kind == BoundarySpec::Kind::Periodic) {
    periodicOffset = Vec::Zero(dim);
    for (int a = 0; a < dim; ++a)
      if (metric.domain().isPeriodic(a))
        periodicOffset[a] = start.winding[a] * *metric.domain().period(a);
    if ((start.nodes[N] - start.nodes[0] - periodicOffset).lpNorm<Eigen::Infinity>() > 1e-9)
      throw ConfigError("periodic curve endpoints must differ by the winding offset");
    start.nodes[N] = start.nodes[0] + periodicOffset;
  }
  if (boundary.kind == BoundarySpec::Kind::ProductSubmanifolds) {
    start.nodes[0] = projectOntoConstraint(*boundary.start, start.nodes[0]);
    start.nodes[N] = projectOntoConstraint(*boundary.end, start.nodes[N]);
  }

  MinimizeReport rep;
  rep.curve = std::move(start);
  const Preconditioner pre(N, boundary.kind);

  double maxSeg = 0.0;
  for (int k = 0; k < N; ++k)
    maxSeg = std::max(maxSeg, rep.curve.delta(k).lpNorm<Eigen::Infinity>());
  rep.zeroCurve = maxSeg <= kDegenerateEps && rep.curve.winding.isZero();

  const auto applyStep = [&](const std::vector<Vec>& d, double alpha) {
    DiscreteCurve trial = rep.curve;
    for (int i = 0; i <= N; ++i) trial.nodes[i] += alpha * d[i];
    switch (boundary.kind) {
      case BoundarySpec::Kind::Periodic:
        trial.nodes[N] = trial.nodes[0] + periodicOffset;
        break;
      case BoundarySpec::Kind::ProductSubmanifolds:
        trial.nodes[0] = projectOntoConstraint(*boundary.start, trial.nodes[0]);
        trial.nodes[N] = projectOntoConstraint(*boundary.end, trial.nodes[N]);
        break;
      case BoundarySpec::Kind::FixedFixed:
        break;
    }
    return trial;
  };

  // Trial curves must keep their moving nodes and midpoints inside the
  // bounds box with room for the finite-difference stencils; steps that
  // wander off the chart are rejected like any failed Armijo trial.
  const ChartDomain& dom = metric.domain();
  const bool endpointsPinned = boundary.kind != BoundarySpec::Kind::Periodic;
  const auto feasible = [&](const DiscreteCurve& c) {
    for (int i = 0; i <= N; ++i) {
      if (endpointsPinned && (i == 0 || i == N)) continue;
      if (!dom.inBounds(c.nodes[i], 2.0 * fdFirstStep(c.nodes[i]))) return false;
    }
    for (int k = 0; k < N; ++k) {
      const Vec m = c.midpoint(k);
      if (!dom.inBounds(m, 2.0 * fdFirstStep(m))) return false;
    }
    return true;
  };

  double J = curveEnergy(metric, rep.curve);
  std::vector<Vec> grad = energyGradient(metric, rep.curve, boundary);

  // L-BFGS with the H^1 solve as the initial inverse Hessian.  Pairs live in
  // the flat node space; curvature-degenerate pairs are dropped.
  constexpr int kMemory = 10;
  std::vector<std::vector<Vec>> sPairs, yPairs;
  std::vector<double> rhoPairs;
  double gamma = 1.0;

  const auto twoLoop = [&](const std::vector<Vec>& g) {
    std::vector<Vec> q = g;
    const int m = static_cast<int>(sPairs.size());
    std::vector<double> a(m);
    for (int i = m - 1; i >= 0; --i) {
      a[i] = rhoPairs[i] * flatDot(sPairs[i], q);
      for (size_t n = 0; n < q.size(); ++n) q[n] -= a[i] * yPairs[i][n];
    }
    std::vector<Vec> r = preconditionGradient(pre, q, dim);
    for (auto& v : r) v *= gamma;
    for (int i = 0; i < m; ++i) {
      const double b = rhoPairs[i] * flatDot(yPairs[i], r);
      for (size_t n = 0; n < r.size(); ++n) r[n] += (a[i] - b) * sPairs[i][n];
    }
    for (auto& v : r) v = -v;
    return r;
  };

  int it = 0;
  for (; it < opts.maxIterations; ++it) {
    const double gnorm = dualNorm(pre, grad, dim);
    if (opts.recordHistory) {
      rep.energyHistory.push_back(J);
      rep.gradNormHistory.push_back(gnorm);
    }
    rep.gradNorm = gnorm;
    if (gnorm <= opts.tol) {
      rep.converged = true;
      break;
    }

    const auto projectDir = [&](std::vector<Vec>& d) {
      if (boundary.kind == BoundarySpec::Kind::ProductSubmanifolds) {
        d[0] = tangentProjector(*boundary.start, rep.curve.nodes[0]) * d[0];
        d[N] = tangentProjector(*boundary.end, rep.curve.nodes[N]) * d[N];
      }
    };
    const auto resetMemory = [&] {
      sPairs.clear();
      yPairs.clear();
      rhoPairs.clear();
      gamma = 1.0;
    };
    const auto steepest = [&] {
      std::vector<Vec> d = preconditionGradient(pre, grad, dim);
      for (auto& v : d) v = -v;
      projectDir(d);
      if (!(flatDot(grad, d) < 0.0))
        for (size_t n = 0; n < grad.size(); ++n) d[n] = -grad[n];
      return d;
    };

    std::vector<Vec> dir = twoLoop(grad);
    projectDir(dir);
    if (!(flatDot(grad, dir) < 0.0)) {
      resetMemory();
      dir = steepest();
    }

    // Sufficient decrease with a roundoff allowance: near the optimum the
    // true decrease per step sinks below the cancellation noise of J, and a
    // bare Armijo test would reject every step.
    const double noise = 1e-13 * (1.0 + std::abs(J));
    // Only filter by the interior margin while the iterate itself satisfies
    // it; once a curve sits closer to the wall than the margin, rejecting
    // every trial would freeze the search, so fall back to catching the
    // chart errors thrown by the evaluation itself.
    const bool filterMargin = feasible(rep.curve);
    DiscreteCurve trial;
    std::vector<Vec> trialGrad;
    double Jt = J;
    double alpha = 1.0;
    const auto lineSearch = [&](const std::vector<Vec>& d) {
      const double slope = flatDot(grad, d);
      alpha = 1.0;
      for (int ls = 0; ls < 40; ++ls) {
        trial = applyStep(d, alpha);
        if (!filterMargin || feasible(trial)) {
          try {
            Jt = curveEnergy(metric, trial);
            if (Jt <= J + opts.armijoC * alpha * slope + noise) {
              trialGrad = energyGradient(metric, trial, boundary);
              return true;
            }
          } catch (const DomainError&) {
          }
        }
        alpha *= opts.armijoShrink;
      }
      return false;
    };

    bool accepted = lineSearch(dir);
    if (!accepted && !sPairs.empty()) {
      // A quasi-Newton direction can be wildly scaled after a bad pair;
      // drop the memory and retry along the preconditioned gradient.
      resetMemory();
      accepted = lineSearch(steepest());
    }
    if (!accepted) {
      rep.lineSearchStalled = true;
      break;
    }
    if (opts.recordHistory) rep.stepHistory.push_back(alpha);

    std::vector<Vec> s(grad.size()), y(grad.size());
    for (size_t n = 0; n < grad.size(); ++n) {
      s[n] = trial.nodes[n] - rep.curve.nodes[n];
      y[n] = trialGrad[n] - grad[n];
    }
    const double sy = flatDot(s, y);
    const double yy = flatDot(y, y);
    if (sy > 1e-12 * std::sqrt(flatDot(s, s) * yy)) {
      sPairs.push_back(std::move(s));
      yPairs.push_back(std::move(y));
      rhoPairs.push_back(1.0 / sy);
      gamma = sy / yy;
      if (static_cast<int>(sPairs.size()) > kMemory) {
        sPairs.erase(sPairs.begin());
        yPairs.erase(yPairs.begin());
        rhoPairs.erase(rhoPairs.begin());
      }
    }

    grad = std::move(trialGrad);
    rep.curve = std::move(trial);
    J = Jt;
  }

  rep.iterations = it;
  rep.energy = J;
  return rep;
}

ConnectResult connectPoints(const FinslerMetric& metric, const Vec& p, const Vec& q, int nSegments,
                            double tol, const VecI* winding, int maxIterations) {
  const ChartDomain& dom = metric.domain();
  const bool zeroWinding = !winding || winding->isZero();
  if (zeroWinding && (p - q).lpNorm<Eigen::Infinity>() <= kDegenerateEps) {
    ConnectResult r;
    r.curve.nodes.assign(nSegments + 1, p);
    r.curve.winding = VecI::Zero(dom.dim());
    r.converged = true;
    r.zeroCurve = true;
    return r;
  }

  MinimizeOptions opts;
  opts.tol = tol;
  opts.maxIterations = maxIterations;
  MinimizeReport rep = minimizeEnergy(metric, DiscreteCurve::chord(dom, p, q, nSegments, winding),
                                      BoundarySpec::fixed(), opts);
  ConnectResult r;
  r.curve = std::move(rep.curve);
  r.length = curveLength(metric, r.curve);
  r.energy = rep.energy;
  r.gradNorm = rep.gradNorm;
  r.iterations = rep.iterations;
  r.converged = rep.converged;
  r.zeroCurve = rep.zeroCurve;
  return r;
}

std::vector<ConnectResult> multistartHomotopy(const FinslerMetric& metric, const Vec& p,
                                              const Vec& q, int maxWinding, int nSegments,
                                              double tol, int maxIterations) {
  const ChartDomain& dom = metric.domain();
  const std::vector<int> axes = dom.periodicAxes();
  std::vector<VecI> windings;
  if (axes.empty()) {
    windings.push_back(VecI::Zero(dom.dim()));
  } else {
    const int classes = 2 * maxWinding + 1;
    long total = 1;
    for (size_t a = 0; a < axes.size(); ++a) total *= classes;
    for (long c = 0; c < total; ++c) {
      VecI w = VecI::Zero(dom.dim());
      long rem = c;
      for (int axis : axes) {
        w[axis] = static_cast<int>(rem % classes) - maxWinding;
        rem /= classes;
      }
      windings.push_back(w);
    }
  }

  std::vector<ConnectResult> results;
  results.reserve(windings.size());
  for (const VecI& w : windings)
    results.push_back(connectPoints(metric, p, q, nSegments, tol, &w, maxIterations));

  std::stable_sort(results.begin(), results.end(),
                   [](const ConnectResult& a, const ConnectResult& b) { return a.energy < b.energy; });

  std::vector<ConnectResult> kept;
  for (auto& r : results) {
    bool dup = false;
    for (const auto& k : kept)
      if (r.curve.supDistance(dom, k.curve) < 1e-4) {
        dup = true;
        break;
      }
    if (!dup) kept.push_back(std::move(r));
  }
  return kept;
}

GeodesicResidual geodesicResidual(const FinslerMetric& metric, const DiscreteCurve& curve) {
  const int N = curve.segments();
  if (N < 2) throw ConfigError("geodesic residual needs at least 2 segments");

  double maxSeg = 0.0;
  for (int k = 0; k < N; ++k)
    maxSeg = std::max(maxSeg, curve.delta(k).lpNorm<Eigen::Infinity>());
  if (N * maxSeg <= kDegenerateEps)
    throw DegenerateDirection("cannot measure the residual of a constant curve");

  GeodesicResidual out;

  // One-sided second-order estimate of the initial velocity, then relaunch.
  const Vec v0 = 0.5 * N * (-3.0 * curve.nodes[0] + 4.0 * curve.nodes[1] - curve.nodes[2]);
  const int sub = 8;
  const ShotCurve shot = geodesicShoot(metric, curve.nodes[0], v0, 1.0, 1.0 / (sub * N));
  out.shotExited = shot.exitedBounds;
  for (int i = 0; i <= N; ++i) {
    const size_t idx = static_cast<size_t>(i) * sub;
    if (idx >= shot.x.size()) break;
    out.maxNodeDeviation = std::max(
        out.maxNodeDeviation, (shot.x[idx] - curve.nodes[i]).lpNorm<Eigen::Infinity>());
  }

  for (int i = 1; i < N; ++i) {
    const Vec T = 0.5 * N * (curve.nodes[i + 1] - curve.nodes[i - 1]);
    if (T.lpNorm<Eigen::Infinity>() <= kDegenerateEps) continue;
    const Vec Tdot =
        N * static_cast<double>(N) * (curve.nodes[i + 1] - 2.0 * curve.nodes[i] + curve.nodes[i - 1]);
    const Vec D = Tdot - geodesicAcceleration(metric, curve.nodes[i], T);
    out.maxCovariantAcceleration = std::max(out.maxCovariantAcceleration, D.lpNorm<Eigen::Infinity>());
  }
  return out;
}

}  // namespace finsler
