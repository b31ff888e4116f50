#pragma once

#include <string>

#include "finsler/expr.hpp"
#include "finsler/metric.hpp"
#include "finsler/spacetime.hpp"

namespace finsler {

// Parsed problem description: chart plus either Randers data (h, omega),
// stationary-spacetime data (g0, delta, beta, conformal), or both with an
// explicit metric choice.  All entries are coordinate expressions.
struct ProblemConfig {
  ChartDomain domain;
  std::string metricChoice;  // "randers" or "fermat"

  bool hasRanders = false;
  std::vector<std::vector<Expression>> h;
  std::vector<Expression> omega;

  bool hasSpacetime = false;
  std::vector<std::vector<Expression>> g0;
  std::vector<Expression> delta;
  Expression beta;
  bool hasConformal = false;
  Expression conformal;

  // canonical forms of periods/bounds for round-tripping
  std::vector<std::string> periodText;
  std::vector<std::string> boundsText;
};

ProblemConfig parseConfig(const std::string& text);
ProblemConfig loadConfig(const std::string& path);

// Canonical key = value form; parseConfig(dumpConfig(c)) describes the same
// problem.
std::string dumpConfig(const ProblemConfig& config);

FinslerMetric buildMetric(const ProblemConfig& config);
StationarySpacetime buildSpacetime(const ProblemConfig& config);

}  // namespace finsler
