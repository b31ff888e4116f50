#pragma once

#include <functional>
#include <vector>

#include "finsler/chart.hpp"

namespace finsler {

// Shared finite-difference step conventions.  First derivatives in x use the
// smaller step; second/third derivatives in y use larger ones to balance
// truncation against roundoff.
inline double fdFirstStep(const Vec& x) { return 1e-5 * (1.0 + x.lpNorm<Eigen::Infinity>()); }
inline double fdSecondStep(const Vec& y) { return 1e-4 * (1.0 + y.lpNorm<Eigen::Infinity>()); }
inline double fdThirdStep(const Vec& y) { return 1e-3 * (1.0 + y.lpNorm<Eigen::Infinity>()); }

// Cutoff below which a direction counts as the zero section.
inline constexpr double kDegenerateEps = 1e-12;

// Uniform sample grid over the declared bounds.  Periodic axes get res[a]
// nodes over [0, period) with the endpoint excluded; bounded axes get res[a]
// nodes inclusive.  Throws ConfigError when a non-periodic axis has no bounds.
std::vector<Vec> boundsGrid(const ChartDomain& domain, const std::vector<int>& res);

class ScalarField {
 public:
  using Evaluator = std::function<double(const Vec&)>;

  ScalarField() = default;
  ScalarField(ChartDomain domain, Evaluator f);

  ScalarField& withPartials(std::function<Vec(const Vec&)> grad);

  const ChartDomain& domain() const { return domain_; }
  double operator()(const Vec& x) const { return f_(domain_.wrap(x)); }

  Vec partials(const Vec& x) const;    // analytic when supplied, FD otherwise
  Vec partialsFD(const Vec& x) const;  // always central differences

  double minOnGrid(const std::vector<int>& res) const;

 private:
  ChartDomain domain_;
  Evaluator f_;
  std::function<Vec(const Vec&)> grad_;
};

class VectorField {
 public:
  using Evaluator = std::function<Vec(const Vec&)>;

  VectorField() = default;
  VectorField(ChartDomain domain, Evaluator f);

  VectorField& withPartials(std::function<Mat(const Vec&)> jac);

  const ChartDomain& domain() const { return domain_; }
  Vec operator()(const Vec& x) const { return f_(domain_.wrap(x)); }

  Mat partials(const Vec& x) const;    // (i,k) = d v^i / d x^k
  Mat partialsFD(const Vec& x) const;

 private:
  ChartDomain domain_;
  Evaluator f_;
  std::function<Mat(const Vec&)> jac_;
};

using OneFormField = VectorField;  // same component storage, lowered index

class RiemannianField {
 public:
  using Evaluator = std::function<Mat(const Vec&)>;

  RiemannianField() = default;
  RiemannianField(ChartDomain domain, Evaluator f);

  RiemannianField& withPartials(std::function<std::vector<Mat>(const Vec&)> dg);

  const ChartDomain& domain() const { return domain_; }
  Mat operator()(const Vec& x) const { return f_(domain_.wrap(x)); }

  std::vector<Mat> partials(const Vec& x) const;  // [k] = d g / d x^k
  std::vector<Mat> partialsFD(const Vec& x) const;

  double smallestEigenvalueOnGrid(const std::vector<int>& res) const;
  void requirePositiveDefinite(const std::vector<int>& res) const;  // throws Error

 private:
  ChartDomain domain_;
  Evaluator f_;
  std::function<std::vector<Mat>(const Vec&)> dg_;
};

}  // namespace finsler
