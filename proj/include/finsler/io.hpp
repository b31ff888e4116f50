#pragma once

#include <json.hpp>
#include <string>

#include "finsler/causality.hpp"
#include "finsler/rays.hpp"
#include "finsler/variational.hpp"

namespace finsler::io {

using json = nlohmann::ordered_json;

// Shortest exact decimal form (printf %.17g).
std::string fmt17(double v);

void writeCsv(const std::string& path, const std::vector<std::string>& header,
              const std::vector<std::vector<double>>& rows);

// winding restricted to the periodic axes, in axis order
json windingJson(const VecI& winding, const ChartDomain& domain);

json toJson(const DiscreteCurve& curve, const ChartDomain& domain);
json toJson(const ConnectResult& result, const ChartDomain& domain);
json toJson(const LightRay& ray, const ChartDomain& domain);
json toJson(const TimelikeResult& result, const ChartDomain& domain);
json toJson(const CrosscheckReport& report);

std::vector<std::vector<double>> curveRows(const DiscreteCurve& curve);
std::vector<std::vector<double>> rayRows(const LightRay& ray);
std::vector<std::vector<double>> timelikeRows(const TimelikeResult& result, double a, double b);
std::vector<std::vector<double>> distanceRows(const DistanceGrid& grid);

}  // namespace finsler::io
