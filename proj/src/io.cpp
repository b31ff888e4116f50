#include "finsler/io.hpp"

#include <cstdio>
#include <fstream>

#include "finsler/errors.hpp"

namespace finsler::io {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void writeCsv(const std::string& path, const std::vector<std::string>& header,
              const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open output file: " + path);
  for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << fmt17(row[i]);
    out << "\n";
  }
}

json windingJson(const VecI& winding, const ChartDomain& domain) {
  json w = json::array();
  for (int a : domain.periodicAxes()) w.push_back(winding.size() > a ? winding[a] : 0);
  return w;
}

json toJson(const DiscreteCurve& curve, const ChartDomain& domain) {
  json nodes = json::array();
  for (const Vec& x : curve.nodes) {
    json row = json::array();
    for (int i = 0; i < x.size(); ++i) row.push_back(x[i]);
    nodes.push_back(std::move(row));
  }
  return json{{"winding", windingJson(curve.winding, domain)}, {"nodes", std::move(nodes)}};
}

json toJson(const ConnectResult& r, const ChartDomain& domain) {
  return json{{"winding", windingJson(r.curve.winding, domain)},
              {"length", r.length},
              {"energy", r.energy},
              {"grad_norm", r.gradNorm},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"zero_curve", r.zeroCurve}};
}

json toJson(const LightRay& ray, const ChartDomain& domain) {
  return json{{"winding", windingJson(ray.spatial.winding, domain)},
              {"arrival_time", ray.arrivalTime},
              {"length", ray.fermatLength},
              {"direction", ray.direction == TimeDirection::Future ? "future" : "past"},
              {"null_residual", ray.nullResidual},
              {"el_constancy", ray.elConstancy},
              {"energy", ray.energy},
              {"grad_norm", ray.gradNorm},
              {"iterations", ray.iterations},
              {"converged", ray.converged}};
}

json toJson(const TimelikeResult& r, const ChartDomain& domain) {
  return json{{"winding", windingJson(r.winding, domain)},
              {"arrival_time", r.arrivalTime},
              {"extended_length", r.extendedLength},
              {"energy_residual", r.energyResidual},
              {"fiber_rate_spread", r.fiberRateSpread},
              {"energy", r.energy},
              {"grad_norm", r.gradNorm},
              {"iterations", r.iterations},
              {"converged", r.converged}};
}

json toJson(const CrosscheckReport& rep) {
  return json{{"member", rep.member},
              {"distance", rep.distance},
              {"path_length", rep.pathLength},
              {"curve_constructed", rep.curveConstructed},
              {"max_causal_violation", rep.maxCausalViolation},
              {"consistent", rep.consistent}};
}

std::vector<std::vector<double>> curveRows(const DiscreteCurve& curve) {
  const int N = curve.segments();
  std::vector<std::vector<double>> rows;
  rows.reserve(N + 1);
  for (int i = 0; i <= N; ++i) {
    std::vector<double> row{static_cast<double>(i) / N};
    for (int c = 0; c < curve.dim(); ++c) row.push_back(curve.nodes[i][c]);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::vector<double>> rayRows(const LightRay& ray) {
  auto rows = curveRows(ray.spatial);
  for (size_t i = 0; i < rows.size(); ++i) rows[i].push_back(ray.times[i]);
  return rows;
}

std::vector<std::vector<double>> timelikeRows(const TimelikeResult& r, double a, double b) {
  const int N = static_cast<int>(r.spatial.size()) - 1;
  std::vector<std::vector<double>> rows;
  rows.reserve(N + 1);
  for (int i = 0; i <= N; ++i) {
    std::vector<double> row{a + (b - a) * i / N};
    for (int c = 0; c < r.spatial[i].size(); ++c) row.push_back(r.spatial[i][c]);
    row.push_back(r.fiber[i]);
    row.push_back(r.times[i]);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::vector<double>> distanceRows(const DistanceGrid& grid) {
  std::vector<std::vector<double>> rows;
  rows.reserve(grid.nodeCount());
  for (long i = 0; i < grid.nodeCount(); ++i) {
    const Vec x = grid.point(i);
    std::vector<double> row;
    for (int c = 0; c < x.size(); ++c) row.push_back(x[c]);
    row.push_back(grid.dPlus[i]);
    row.push_back(grid.dMinus[i]);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace finsler::io
