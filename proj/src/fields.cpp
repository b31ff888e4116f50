#include "finsler/fields.hpp"

#include <Eigen/Eigenvalues>
#include <limits>
#include <sstream>

#include "finsler/errors.hpp"

namespace finsler {

std::vector<Vec> boundsGrid(const ChartDomain& domain, const std::vector<int>& res) {
  const int n = domain.dim();
  if (static_cast<int>(res.size()) != n)
    throw ConfigError("grid resolution rank does not match chart dimension");

  std::vector<std::vector<double>> axes(n);
  for (int a = 0; a < n; ++a) {
    if (res[a] < 2) throw ConfigError("grid resolution must be at least 2 per axis");
    auto& ticks = axes[a];
    ticks.reserve(res[a]);
    if (domain.isPeriodic(a)) {
      const double p = *domain.period(a);
      for (int j = 0; j < res[a]; ++j) ticks.push_back(j * p / res[a]);
    } else if (domain.bounds(a)) {
      const auto [lo, hi] = *domain.bounds(a);
      for (int j = 0; j < res[a]; ++j) ticks.push_back(lo + j * (hi - lo) / (res[a] - 1));
    } else {
      std::ostringstream msg;
      msg << "axis " << a + 1 << " needs bounds (or a period) for grid sampling";
      throw ConfigError(msg.str());
    }
  }

  std::vector<Vec> pts;
  long total = 1;
  for (int a = 0; a < n; ++a) total *= res[a];
  pts.reserve(total);
  std::vector<int> idx(n, 0);
  Vec x(n);
  for (long c = 0; c < total; ++c) {
    for (int a = 0; a < n; ++a) x[a] = axes[a][idx[a]];
    pts.push_back(x);
    for (int a = n - 1; a >= 0; --a) {
      if (++idx[a] < res[a]) break;
      idx[a] = 0;
    }
  }
  return pts;
}

namespace {

// Central differences along every axis; the whole stencil must stay inside
// declared non-periodic bounds.
template <class Value, class Eval, class Emit>
void centralStencil(const ChartDomain& dom, const Eval& f, const Vec& x, const Emit& emit) {
  const double h = fdFirstStep(x);
  dom.requireInterior(x, h);
  Vec xp = x, xm = x;
  for (int k = 0; k < dom.dim(); ++k) {
    xp[k] = x[k] + h;
    xm[k] = x[k] - h;
    emit(k, Value((f(xp) - f(xm)) / (2.0 * h)));
    xp[k] = x[k];
    xm[k] = x[k];
  }
}

}  // namespace

ScalarField::ScalarField(ChartDomain domain, Evaluator f)
    : domain_(std::move(domain)), f_(std::move(f)) {}

ScalarField& ScalarField::withPartials(std::function<Vec(const Vec&)> grad) {
  grad_ = std::move(grad);
  return *this;
}

Vec ScalarField::partials(const Vec& x) const {
  if (grad_) return grad_(domain_.wrap(x));
  return partialsFD(x);
}

Vec ScalarField::partialsFD(const Vec& x) const {
  Vec g(domain_.dim());
  centralStencil<double>(domain_, [this](const Vec& p) { return (*this)(p); }, x,
                         [&](int k, double v) { g[k] = v; });
  return g;
}

double ScalarField::minOnGrid(const std::vector<int>& res) const {
  double lo = std::numeric_limits<double>::infinity();
  for (const Vec& x : boundsGrid(domain_, res)) lo = std::min(lo, (*this)(x));
  return lo;
}

VectorField::VectorField(ChartDomain domain, Evaluator f)
    : domain_(std::move(domain)), f_(std::move(f)) {}

VectorField& VectorField::withPartials(std::function<Mat(const Vec&)> jac) {
  jac_ = std::move(jac);
  return *this;
}

Mat VectorField::partials(const Vec& x) const {
  if (jac_) return jac_(domain_.wrap(x));
  return partialsFD(x);
}

Mat VectorField::partialsFD(const Vec& x) const {
  const int n = domain_.dim();
  Mat J(n, n);
  centralStencil<Vec>(domain_, [this](const Vec& p) { return (*this)(p); }, x,
                      [&](int k, const Vec& col) { J.col(k) = col; });
  return J;
}

RiemannianField::RiemannianField(ChartDomain domain, Evaluator f)
    : domain_(std::move(domain)), f_(std::move(f)) {}

RiemannianField& RiemannianField::withPartials(std::function<std::vector<Mat>(const Vec&)> dg) {
  dg_ = std::move(dg);
  return *this;
}

std::vector<Mat> RiemannianField::partials(const Vec& x) const {
  if (dg_) return dg_(domain_.wrap(x));
  return partialsFD(x);
}

std::vector<Mat> RiemannianField::partialsFD(const Vec& x) const {
  std::vector<Mat> out(domain_.dim());
  centralStencil<Mat>(domain_, [this](const Vec& p) { return (*this)(p); }, x,
                      [&](int k, const Mat& m) { out[k] = m; });
  return out;
}

double RiemannianField::smallestEigenvalueOnGrid(const std::vector<int>& res) const {
  double lo = std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<Mat> eig;
  for (const Vec& x : boundsGrid(domain_, res)) {
    eig.compute((*this)(x), Eigen::EigenvaluesOnly);
    lo = std::min(lo, eig.eigenvalues().minCoeff());
  }
  return lo;
}

void RiemannianField::requirePositiveDefinite(const std::vector<int>& res) const {
  const double lo = smallestEigenvalueOnGrid(res);
  if (!(lo > 0.0)) {
    std::ostringstream msg;
    msg << "metric field is not positive definite on the sample grid (min eigenvalue " << lo << ")";
    throw Error(msg.str());
  }
}

}  // namespace finsler
