#include "finsler/chart.hpp"

#include <cmath>
#include <sstream>

#include "finsler/errors.hpp"

namespace finsler {

ChartDomain::ChartDomain(int dim) : dim_(dim), periods_(dim), bounds_(dim) {
  if (dim < 1) throw ConfigError("chart dimension must be at least 1");
}

void ChartDomain::setPeriod(int axis, double period) {
  if (axis < 0 || axis >= dim_) throw ConfigError("period axis out of range");
  if (!(period > 0.0)) throw ConfigError("period must be positive");
  periods_[axis] = period;
}

void ChartDomain::setBounds(int axis, double lo, double hi) {
  if (axis < 0 || axis >= dim_) throw ConfigError("bounds axis out of range");
  if (!(lo < hi)) throw ConfigError("bounds must satisfy lo < hi");
  bounds_[axis] = Interval{lo, hi};
}

bool ChartDomain::hasPeriodicAxis() const {
  for (const auto& p : periods_)
    if (p) return true;
  return false;
}

std::vector<int> ChartDomain::periodicAxes() const {
  std::vector<int> axes;
  for (int a = 0; a < dim_; ++a)
    if (periods_[a]) axes.push_back(a);
  return axes;
}

Vec ChartDomain::wrap(Vec x) const {
  for (int a = 0; a < dim_; ++a) {
    if (!periods_[a]) continue;
    const double p = *periods_[a];
    double r = std::fmod(x[a], p);
    if (r < 0.0) r += p;
    x[a] = r;
  }
  return x;
}

Vec ChartDomain::minimalDifference(const Vec& a, const Vec& b) const {
  Vec d = a - b;
  for (int i = 0; i < dim_; ++i) {
    if (!periods_[i]) continue;
    const double p = *periods_[i];
    double r = std::fmod(d[i], p);
    if (r < -p / 2) r += p;
    if (r >= p / 2) r -= p;
    d[i] = r;
  }
  return d;
}

bool ChartDomain::inBounds(const Vec& x, double margin) const {
  for (int a = 0; a < dim_; ++a) {
    if (periods_[a] || !bounds_[a]) continue;
    if (x[a] < bounds_[a]->lo + margin || x[a] > bounds_[a]->hi - margin) return false;
  }
  return true;
}

void ChartDomain::requireInterior(const Vec& x, double margin) const {
  if (inBounds(x, margin)) return;
  std::ostringstream msg;
  msg << "point (";
  for (int a = 0; a < dim_; ++a) msg << (a ? "," : "") << x[a];
  msg << ") leaves chart bounds (margin " << margin << ")";
  throw DomainError(msg.str());
}

ChartDomain ChartDomain::extended(Interval fiberBounds) const {
  ChartDomain out(dim_ + 1);
  for (int a = 0; a < dim_; ++a) {
    if (periods_[a]) out.setPeriod(a, *periods_[a]);
    if (bounds_[a]) out.setBounds(a, bounds_[a]->lo, bounds_[a]->hi);
  }
  out.setBounds(dim_, fiberBounds.lo, fiberBounds.hi);
  return out;
}

}  // namespace finsler
