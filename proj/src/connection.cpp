#include "finsler/connection.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "finsler/errors.hpp"

namespace finsler {

namespace {

// d g_ij / d x^k at fixed y, central differences.
std::vector<Mat> fundamentalTensorXPartials(const FinslerMetric& metric, const Vec& x,
                                            const Vec& y) {
  const int n = static_cast<int>(x.size());
  const double h = fdFirstStep(x);
  metric.domain().requireInterior(x, h);
  std::vector<Mat> dg(n);
  Vec xp = x, xm = x;
  for (int k = 0; k < n; ++k) {
    xp[k] = x[k] + h;
    xm[k] = x[k] - h;
    dg[k] = (metric.fundamentalTensor(xp, y) - metric.fundamentalTensor(xm, y)) / (2.0 * h);
    xp[k] = x[k];
    xm[k] = x[k];
  }
  return dg;
}

}  // namespace

ConnectionCoefficients chernCoefficients(const FinslerMetric& metric, const Vec& x, const Vec& y) {
  const int n = static_cast<int>(x.size());
  const Mat g = metric.fundamentalTensor(x, y);
  const auto dg = fundamentalTensorXPartials(metric, x, y);
  const Eigen::LDLT<Mat> ginv(g);
  const double F = metric.value(x, y);
  const Tensor3 A = metric.cartanTensor(x, y);

  // gamma^i_jk = g^{is}/2 (d_k g_sj - d_s g_jk + d_j g_ks)
  Tensor3 gamma(n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      Vec low(n);
      for (int s = 0; s < n; ++s) low[s] = 0.5 * (dg[k](s, j) - dg[s](j, k) + dg[j](k, s));
      const Vec up = ginv.solve(low);
      for (int i = 0; i < n; ++i) gamma(i, j, k) = up[i];
    }

  // Spray coefficients gamma^k_rs y^r y^s feed the nonlinear connection.
  Vec spray = Vec::Zero(n);
  for (int k = 0; k < n; ++k)
    for (int r = 0; r < n; ++r)
      for (int s = 0; s < n; ++s) spray[k] += gamma(k, r, s) * y[r] * y[s];

  // N^i_j = gamma^i_jk y^k - (1/F) A^i_jk spray^k
  Mat N(n, n);
  for (int j = 0; j < n; ++j) {
    Vec low = Vec::Zero(n);
    for (int l = 0; l < n; ++l)
      for (int k = 0; k < n; ++k) low[l] += A(l, j, k) * spray[k];
    const Vec corr = ginv.solve(low);
    for (int i = 0; i < n; ++i) {
      double lead = 0.0;
      for (int k = 0; k < n; ++k) lead += gamma(i, j, k) * y[k];
      N(i, j) = lead - corr[i] / F;
    }
  }

  // Gamma^i_jk = gamma^i_jk - g^{il}/F (A_ljs N^s_k - A_jks N^s_l + A_kls N^s_j)
  Tensor3 chern(n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      Vec low = Vec::Zero(n);
      for (int l = 0; l < n; ++l)
        for (int s = 0; s < n; ++s)
          low[l] += A(l, j, s) * N(s, k) - A(j, k, s) * N(s, l) + A(k, l, s) * N(s, j);
      const Vec corr = ginv.solve(low);
      for (int i = 0; i < n; ++i) chern(i, j, k) = gamma(i, j, k) - corr[i] / F;
    }

  return ConnectionCoefficients{std::move(gamma), std::move(N), std::move(chern)};
}

Vec geodesicAcceleration(const FinslerMetric& metric, const Vec& x, const Vec& y) {
  const int n = static_cast<int>(x.size());
  const Mat g = metric.fundamentalTensor(x, y);
  const auto dg = fundamentalTensorXPartials(metric, x, y);
  // lower_s = (d_k g_sj) y^j y^k - (1/2)(d_s g_jk) y^j y^k
  Vec low(n);
  Vec weighted = Vec::Zero(n);
  for (int k = 0; k < n; ++k) weighted += y[k] * (dg[k] * y);
  for (int s = 0; s < n; ++s) low[s] = weighted[s] - 0.5 * y.dot(dg[s] * y);
  return -g.ldlt().solve(low);
}

Vec covariantDerivative(const FinslerMetric& metric, const Vec& x, const Vec& T, const Vec& W,
                        const Vec& Wdot) {
  const auto coeffs = chernCoefficients(metric, x, T);
  const int n = static_cast<int>(x.size());
  Vec out = Wdot;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) out[i] += coeffs.chern(i, j, k) * W[j] * T[k];
  return out;
}

ShotCurve geodesicShoot(const FinslerMetric& metric, Vec x0, Vec y0, double sMax, double step) {
  ShotCurve out;
  const double F0 = metric.value(x0, y0);
  if (F0 <= kDegenerateEps) throw DegenerateDirection("cannot shoot with zero initial velocity");

  double s = 0.0;
  Vec x = std::move(x0), v = std::move(y0);
  out.s.push_back(s);
  out.x.push_back(x);
  out.v.push_back(v);

  const auto rhs = [&metric](const Vec& xs, const Vec& vs) {
    return geodesicAcceleration(metric, xs, vs);
  };

  while (s < sMax - 1e-15) {
    const double dt = std::min(step, sMax - s);
    const double margin = 2.0 * fdFirstStep(x) + dt * v.lpNorm<Eigen::Infinity>();
    if (!metric.domain().inBounds(x, margin)) {
      out.exitedBounds = true;
      break;
    }
    try {
      const Vec k1x = v, k1v = rhs(x, v);
      const Vec k2x = v + 0.5 * dt * k1v, k2v = rhs(x + 0.5 * dt * k1x, v + 0.5 * dt * k1v);
      const Vec k3x = v + 0.5 * dt * k2v, k3v = rhs(x + 0.5 * dt * k2x, v + 0.5 * dt * k2v);
      const Vec k4x = v + dt * k3v, k4v = rhs(x + dt * k3x, v + dt * k3v);
      x += dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
      v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    } catch (const DomainError&) {
      out.exitedBounds = true;
      break;
    }
    s += dt;
    out.s.push_back(s);
    out.x.push_back(x);
    out.v.push_back(v);
    out.maxSpeedDrift = std::max(out.maxSpeedDrift, std::abs(metric.value(x, v) - F0) / F0);
  }
  return out;
}

}  // namespace finsler
