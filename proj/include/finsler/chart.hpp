#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

namespace finsler {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using VecI = Eigen::VectorXi;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

// A single coordinate chart: dimension, optional period per axis, optional
// sampling bounds per axis.  Periodic axes wrap into [0, period); bounded
// non-periodic axes are where sampled checks and FD stencils must stay.
class ChartDomain {
 public:
  ChartDomain() = default;
  explicit ChartDomain(int dim);

  int dim() const { return dim_; }

  void setPeriod(int axis, double period);
  void setBounds(int axis, double lo, double hi);

  const std::optional<double>& period(int axis) const { return periods_[axis]; }
  const std::optional<Interval>& bounds(int axis) const { return bounds_[axis]; }
  bool isPeriodic(int axis) const { return periods_[axis].has_value(); }

  bool hasPeriodicAxis() const;
  std::vector<int> periodicAxes() const;

  // Wraps periodic coordinates into [0, period); other axes pass through.
  Vec wrap(Vec x) const;

  // Minimal-image difference a - b: wrapped into [-p/2, p/2) on periodic axes.
  Vec minimalDifference(const Vec& a, const Vec& b) const;

  // True if all bounded non-periodic coordinates lie within [lo+margin, hi-margin].
  bool inBounds(const Vec& x, double margin = 0.0) const;

  // Throws DomainError when inBounds(x, margin) fails.
  void requireInterior(const Vec& x, double margin = 0.0) const;

  // Same chart with one extra trailing bounded axis (Kaluza-Klein fiber).
  ChartDomain extended(Interval fiberBounds) const;

 private:
  int dim_ = 0;
  std::vector<std::optional<double>> periods_;
  std::vector<std::optional<Interval>> bounds_;
};

}  // namespace finsler
