#include "finsler/metric.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <random>

#include "finsler/errors.hpp"

namespace finsler {

double RandersData::omegaNorm(const Vec& x) const {
  const Mat hx = h(x);
  const Vec w = omega(x);
  return std::sqrt(std::max(0.0, w.dot(hx.ldlt().solve(w))));
}

FinslerMetric FinslerMetric::randers(ChartDomain domain, RandersData data,
                                     const std::vector<int>* validateRes) {
  FinslerMetric m;
  m.domain_ = std::move(domain);
  m.randers_ = std::move(data);

  bool sampleable = true;
  for (int a = 0; a < m.domain_.dim(); ++a)
    if (!m.domain_.isPeriodic(a) && !m.domain_.bounds(a)) sampleable = false;
  if (validateRes) {
    m.checkOmegaNormOnGrid(*validateRes);
  } else if (sampleable) {
    m.checkOmegaNormOnGrid(std::vector<int>(m.domain_.dim(), 9));
  }
  return m;
}

FinslerMetric FinslerMetric::generic(ChartDomain domain, Evaluator F) {
  FinslerMetric m;
  m.domain_ = std::move(domain);
  m.generic_ = std::move(F);
  return m;
}

const RandersData& FinslerMetric::randersData() const {
  if (!randers_) throw Error("metric has no Randers data");
  return *randers_;
}

FinslerMetric FinslerMetric::reversed() const {
  if (randers_) {
    RandersData flipped = *randers_;
    OneFormField w = randers_->omega;
    flipped.omega = OneFormField(domain_, [w](const Vec& x) { return Vec(-w(x)); });
    FinslerMetric m;
    m.domain_ = domain_;
    m.randers_ = std::move(flipped);
    return m;
  }
  Evaluator f = generic_;
  return generic(domain_, [f](const Vec& x, const Vec& y) { return f(x, Vec(-y)); });
}

void FinslerMetric::checkOmegaNormOnGrid(const std::vector<int>& res) const {
  if (!randers_) return;
  double worst = 0.0;
  for (const Vec& x : boundsGrid(domain_, res)) worst = std::max(worst, randers_->omegaNorm(x));
  if (worst >= 1.0)
    throw Error("Randers one-form has |omega|_x >= 1 on the sample grid (max " +
                std::to_string(worst) + "); F would not be positive");
}

void FinslerMetric::requireNonDegenerate(const Vec& y) const {
  if (y.lpNorm<Eigen::Infinity>() <= kDegenerateEps)
    throw DegenerateDirection("direction y is on the zero section");
}

double FinslerMetric::value(const Vec& x, const Vec& y) const {
  if (generic_) return generic_(x, y);
  const Mat h = randers_->h(x);
  const Vec w = randers_->omega(x);
  return std::sqrt(std::max(0.0, y.dot(h * y))) + w.dot(y);
}

double FinslerMetric::energyDensity(const Vec& x, const Vec& y) const {
  const double F = value(x, y);
  return F * F;
}

Vec FinslerMetric::dGdy(const Vec& x, const Vec& y) const {
  if (randers_) {
    const Mat h = randers_->h(x);
    const Vec w = randers_->omega(x);
    const double alpha = std::sqrt(std::max(0.0, y.dot(h * y)));
    if (alpha <= kDegenerateEps) return Vec::Zero(y.size());  // C^1 across the zero section
    const Vec l = h * y / alpha;
    return 2.0 * (alpha + w.dot(y)) * (l + w);
  }
  const double h2 = fdSecondStep(y);
  Vec g(y.size());
  Vec yp = y, ym = y;
  for (int k = 0; k < y.size(); ++k) {
    yp[k] = y[k] + h2;
    ym[k] = y[k] - h2;
    g[k] = (generic_(x, yp) - generic_(x, ym)) / (2.0 * h2);
    yp[k] = y[k];
    ym[k] = y[k];
  }
  return g;
}

Vec FinslerMetric::dGdx(const Vec& x, const Vec& y) const {
  if (randers_) {
    const Mat h = randers_->h(x);
    const Vec w = randers_->omega(x);
    const double alpha = std::sqrt(std::max(0.0, y.dot(h * y)));
    const double F = alpha + w.dot(y);
    const std::vector<Mat> dh = randers_->h.partials(x);
    const Mat dw = randers_->omega.partials(x);
    Vec g(x.size());
    for (int k = 0; k < x.size(); ++k) {
      const double dalpha = alpha > kDegenerateEps ? y.dot(dh[k] * y) / (2.0 * alpha) : 0.0;
      g[k] = 2.0 * F * (dalpha + dw.col(k).dot(y));
    }
    return g;
  }
  const double h1 = fdFirstStep(x);
  domain_.requireInterior(x, h1);
  Vec g(x.size());
  Vec xp = x, xm = x;
  for (int k = 0; k < x.size(); ++k) {
    xp[k] = x[k] + h1;
    xm[k] = x[k] - h1;
    const double fp = generic_(xp, y), fm = generic_(xm, y);
    g[k] = (fp - fm) / (2.0 * h1);
    xp[k] = x[k];
    xm[k] = x[k];
  }
  return g;
}

Mat FinslerMetric::fundamentalTensor(const Vec& x, const Vec& y) const {
  requireNonDegenerate(y);
  if (!randers_) return fundamentalTensorFD(x, y);

  // g = (F/alpha) (h - l l^T) + (l + w)(l + w)^T with l = h y / alpha.
  const Mat h = randers_->h(x);
  const Vec w = randers_->omega(x);
  const double alpha = std::sqrt(std::max(0.0, y.dot(h * y)));
  if (alpha <= kDegenerateEps) throw DegenerateDirection("direction y is on the zero section");
  const Vec l = h * y / alpha;
  const Vec p = l + w;
  const double F = alpha + w.dot(y);
  return (F / alpha) * (h - l * l.transpose()) + p * p.transpose();
}

Mat FinslerMetric::fundamentalTensorFD(const Vec& x, const Vec& y) const {
  requireNonDegenerate(y);
  const int n = static_cast<int>(y.size());
  const double h2 = fdSecondStep(y);
  const auto G = [&](const Vec& v) { return energyDensity(x, v); };
  Mat g(n, n);
  Vec a(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      a = y;
      a[i] += h2;
      a[j] += h2;
      double s = G(a);
      a = y;
      a[i] += h2;
      a[j] -= h2;
      s -= G(a);
      a = y;
      a[i] -= h2;
      a[j] += h2;
      s -= G(a);
      a = y;
      a[i] -= h2;
      a[j] -= h2;
      s += G(a);
      g(i, j) = g(j, i) = 0.5 * s / (4.0 * h2 * h2);
    }
  }
  return g;
}

Tensor3 FinslerMetric::cartanTensor(const Vec& x, const Vec& y) const {
  requireNonDegenerate(y);
  if (!randers_) return cartanTensorFD(x, y);

  // A_ijk = F/(2 alpha^2) (m_ij q_k + m_jk q_i + m_ki q_j),
  // m = h - l l^T, q = alpha w - (w.y) l.
  const int n = static_cast<int>(y.size());
  const Mat h = randers_->h(x);
  const Vec w = randers_->omega(x);
  const double alpha = std::sqrt(std::max(0.0, y.dot(h * y)));
  if (alpha <= kDegenerateEps) throw DegenerateDirection("direction y is on the zero section");
  const Vec l = h * y / alpha;
  const Mat m = h - l * l.transpose();
  const Vec q = alpha * w - w.dot(y) * l;
  const double c = (alpha + w.dot(y)) / (2.0 * alpha * alpha);
  Tensor3 A(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        A(i, j, k) = c * (m(i, j) * q[k] + m(j, k) * q[i] + m(k, i) * q[j]);
  return A;
}

Tensor3 FinslerMetric::cartanTensorFD(const Vec& x, const Vec& y) const {
  requireNonDegenerate(y);
  const int n = static_cast<int>(y.size());
  const double h3 = fdThirdStep(y);
  const double F = value(x, y);
  Tensor3 A(n);
  Vec yp = y, ym = y;
  for (int k = 0; k < n; ++k) {
    yp[k] = y[k] + h3;
    ym[k] = y[k] - h3;
    const Mat gp = fundamentalTensorFD(x, yp);
    const Mat gm = fundamentalTensorFD(x, ym);
    const Mat dk = (gp - gm) / (2.0 * h3);  // d g_ij / d y^k
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j, k) = 0.5 * F * dk(i, j);
    yp[k] = y[k];
    ym[k] = y[k];
  }
  return A;
}

double FinslerMetric::reversibility(const Vec& x, std::uint64_t seed) const {
  const int n = domain_.dim();
  const auto ratio = [&](const Vec& u) { return value(x, Vec(-u)) / value(x, u); };

  if (n == 1) {
    Vec u = Vec::Ones(1);
    return std::max(ratio(u), ratio(Vec(-u)));
  }

  const auto goldenOnArc = [&](const Vec& a, const Vec& b, double lo, double hi) {
    // maximize ratio(cos t * a + sin t * b) over t in [lo, hi]
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    const auto at = [&](double t) { return Vec(std::cos(t) * a + std::sin(t) * b); };
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    double fc = ratio(at(c)), fd = ratio(at(d));
    while (hi - lo > 1e-10) {
      if (fc > fd) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - gr * (hi - lo);
        fc = ratio(at(c));
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + gr * (hi - lo);
        fd = ratio(at(d));
      }
    }
    return std::max(fc, fd);
  };

  const int samples = 256 * n;
  if (n == 2) {
    double bestT = 0.0, best = -1.0;
    for (int j = 0; j < samples; ++j) {
      const double t = 2.0 * M_PI * j / samples;
      Vec u(2);
      u << std::cos(t), std::sin(t);
      const double r = ratio(u);
      if (r > best) {
        best = r;
        bestT = t;
      }
    }
    const double w = 2.0 * M_PI / samples;
    Vec e1(2), e2(2);
    e1 << 1, 0;
    e2 << 0, 1;
    return goldenOnArc(e1, e2, bestT - w, bestT + w);
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec best = Vec::Zero(n);
  double bestR = -1.0;
  for (int j = 0; j < samples; ++j) {
    Vec u(n);
    for (int i = 0; i < n; ++i) u[i] = gauss(rng);
    u.normalize();
    const double r = ratio(u);
    if (r > bestR) {
      bestR = r;
      best = u;
    }
  }
  // Refine along random great circles through the best direction.
  for (int pass = 0; pass < 16; ++pass) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = gauss(rng);
    v -= v.dot(best) * best;
    if (v.norm() < 1e-12) continue;
    v.normalize();
    const double r = goldenOnArc(best, v, -0.1, 0.1);
    if (r > bestR) bestR = r;
  }
  return bestR;
}

}  // namespace finsler
