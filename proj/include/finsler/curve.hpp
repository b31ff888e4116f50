#pragma once

#include <vector>

#include "finsler/chart.hpp"

namespace finsler {

// Polyline over [0,1] with uniform parameter spacing.  Node coordinates are
// lifted: they may run outside one periodic cell; winding records how many
// periods the curve advances per axis (zero on non-periodic axes).
struct DiscreteCurve {
  std::vector<Vec> nodes;
  VecI winding;

  int dim() const { return nodes.empty() ? 0 : static_cast<int>(nodes.front().size()); }
  int segments() const { return static_cast<int>(nodes.size()) - 1; }

  Vec midpoint(int k) const { return 0.5 * (nodes[k] + nodes[k + 1]); }
  Vec delta(int k) const { return nodes[k + 1] - nodes[k]; }

  // Straight chord from p to q lifted by winding periods.
  static DiscreteCurve chord(const ChartDomain& domain, const Vec& p, const Vec& q, int nSegments,
                             const VecI* winding = nullptr);

  // Max over nodes of the sup-norm minimal-image difference.
  double supDistance(const ChartDomain& domain, const DiscreteCurve& other) const;
};

}  // namespace finsler
