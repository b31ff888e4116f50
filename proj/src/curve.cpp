#include "finsler/curve.hpp"

#include "finsler/errors.hpp"

namespace finsler {

DiscreteCurve DiscreteCurve::chord(const ChartDomain& domain, const Vec& p, const Vec& q,
                                   int nSegments, const VecI* winding) {
  if (nSegments < 1) throw ConfigError("curve needs at least one segment");
  const int n = domain.dim();
  DiscreteCurve c;
  c.winding = VecI::Zero(n);
  if (winding) {
    if (winding->size() != n) throw ConfigError("winding vector rank mismatch");
    for (int a = 0; a < n; ++a)
      if ((*winding)[a] != 0 && !domain.isPeriodic(a))
        throw ConfigError("winding on a non-periodic axis");
    c.winding = *winding;
  }
  Vec qLift = q;
  for (int a = 0; a < n; ++a)
    if (domain.isPeriodic(a)) qLift[a] += c.winding[a] * *domain.period(a);

  c.nodes.reserve(nSegments + 1);
  for (int i = 0; i <= nSegments; ++i) {
    const double t = static_cast<double>(i) / nSegments;
    c.nodes.push_back((1.0 - t) * p + t * qLift);
  }
  return c;
}

double DiscreteCurve::supDistance(const ChartDomain& domain, const DiscreteCurve& other) const {
  if (nodes.size() != other.nodes.size())
    throw ConfigError("sup distance needs equal node counts");
  double d = 0.0;
  for (size_t i = 0; i < nodes.size(); ++i) {
    const Vec diff = domain.minimalDifference(nodes[i], other.nodes[i]);
    d = std::max(d, diff.lpNorm<Eigen::Infinity>());
  }
  return d;
}

}  // namespace finsler
