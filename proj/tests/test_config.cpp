#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "finsler/config.hpp"
#include "finsler/errors.hpp"
#include "oracles.hpp"

using namespace finsler;

namespace {

const char* kRanders = R"(
# simple flat chart with a constant drift
dim = 2
bounds = [[-5, 5], [-5, 5]]
h = [[1, 0], [0, 1]]
omega = [0.3, 0]
)";

const char* kFermat = R"(
dim = 2
periods = [2pi, none]
bounds = [none, [1, 2]]
metric = fermat
g0 = [[1, 0], [0, 1]]
delta = [0.3, 0]
beta = 1
)";

Vec pt(double a, double b) {
  Vec x(2);
  x << a, b;
  return x;
}

}  // namespace

TEST_CASE("a Randers config parses and evaluates") {
  const ProblemConfig cfg = parseConfig(kRanders);
  CHECK(cfg.metricChoice == "randers");
  CHECK(cfg.hasRanders);
  CHECK_FALSE(cfg.hasSpacetime);
  CHECK(cfg.domain.dim() == 2);
  REQUIRE(cfg.domain.bounds(0));
  CHECK(cfg.domain.bounds(0)->lo == -5.0);
  CHECK(cfg.domain.bounds(1)->hi == 5.0);

  const FinslerMetric m = buildMetric(cfg);
  CHECK(m.value(pt(0, 0), pt(1, 0)) == doctest::Approx(1.3).epsilon(1e-14));
  CHECK(m.value(pt(0, 0), pt(-1, 0)) == doctest::Approx(0.7).epsilon(1e-14));
  CHECK_THROWS_AS(buildSpacetime(cfg), ConfigError);
}

TEST_CASE("a stationary-spacetime config parses with periodic and bounded axes") {
  const ProblemConfig cfg = parseConfig(kFermat);
  CHECK(cfg.metricChoice == "fermat");
  CHECK(cfg.hasSpacetime);
  CHECK(cfg.domain.isPeriodic(0));
  CHECK(*cfg.domain.period(0) == doctest::Approx(2.0 * M_PI).epsilon(1e-15));
  CHECK_FALSE(cfg.domain.bounds(0));
  REQUIRE(cfg.domain.bounds(1));

  const StationarySpacetime st = buildSpacetime(cfg);
  CHECK(st.beta(pt(0, 1.5)) == 1.0);
  const FinslerMetric m = buildMetric(cfg);
  // h = I + dd^T with d = (0.3, 0)
  const double want = std::sqrt(1.0 + 0.09) + 0.3;
  CHECK(m.value(pt(1, 1.5), pt(1, 0)) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("malformed configs are rejected with a config error") {
  const auto bad = [](const std::string& text) {
    CHECK_THROWS_AS(parseConfig(text), ConfigError);
  };
  bad("");                                                      // no dim
  bad("dim = 2\n");                                             // no metric data
  bad("dim = 0\nh = [[1]]\nomega = [0]\n");                     // bad dimension
  bad("dim = 2.5\nh = [[1,0],[0,1]]\nomega = [0,0]\n");         // fractional dim
  bad("dim = 2\nh = [[1, 0], [0, 1]]\n");                       // omega missing
  bad("dim = 2\ng0 = [[1, 0], [0, 1]]\ndelta = [0, 0]\n");      // beta missing
  bad("dim = 2\nh = [[1, 0], [0, 1]]\nomega = [0, 0]\nh = [[2, 0], [0, 2]]\n");  // duplicate
  bad("dim = 2\nh = [[1, 0], [0, 1]]\nomega = [0, 0]\nspin = 3\n");              // unknown key
  bad("dim = 2\nbounds = [[-1, 1]]\nh = [[1, 0], [0, 1]]\nomega = [0, 0]\n");    // arity
  bad("dim = 2\nbounds = [[-1, 1], 2]\nh = [[1, 0], [0, 1]]\nomega = [0, 0]\n");
  bad("dim = 2\nperiods = [x1, none]\nh = [[1, 0], [0, 1]]\nomega = [0, 0]\n");
  bad("dim = 2\nh = [[1, 0], [0, 1]]\nomega = [0, 0]\nmetric = fermat\n");
  bad("dim = 2\nh = [[1, 0], [0, 1]]\nomega = [0, 0]\nmetric = spherical\n");
  bad("dim = 1\nh == [[1]]\n");                                 // not key = value
  bad("dim = 2\nbounds = [[-1, 1], [-1, 1]]\nh = [[1, x1], [0, 1]]\nomega = [0, 0]\n");
  // both data groups need an explicit choice
  bad(std::string(kRanders) + "g0 = [[1, 0], [0, 1]]\ndelta = [0, 0]\nbeta = 1\n");
}

TEST_CASE("semantic validation happens at build time") {
  // drift of norm 1.2 cannot define a positive Randers metric
  const ProblemConfig tooFast = parseConfig(
      "dim = 2\nbounds = [[-1, 1], [-1, 1]]\nh = [[1, 0], [0, 1]]\nomega = [1.2, 0]\n");
  CHECK_THROWS_AS(buildMetric(tooFast), Error);

  const ProblemConfig negBeta = parseConfig(
      "dim = 2\nbounds = [[-1, 1], [-1, 1]]\nmetric = fermat\n"
      "g0 = [[1, 0], [0, 1]]\ndelta = [0, 0]\nbeta = x1\n");
  CHECK_THROWS_AS(buildSpacetime(negBeta), ConfigError);

  const ProblemConfig indefinite = parseConfig(
      "dim = 2\nbounds = [[-1, 1], [-1, 1]]\nh = [[x1, 0], [0, 1]]\nomega = [0, 0]\n");
  CHECK_THROWS_AS(buildMetric(indefinite), Error);
}

TEST_CASE("the conformal factor needs a sampleable domain and a positive sign") {
  const ProblemConfig unbounded = parseConfig(
      "dim = 2\nmetric = fermat\ng0 = [[1, 0], [0, 1]]\n"
      "delta = [0, 0]\nbeta = 1\nconformal = 1 + x1^2\n");
  CHECK_THROWS_AS(buildSpacetime(unbounded), ConfigError);

  const ProblemConfig vanishing = parseConfig(
      "dim = 2\nbounds = [[-1, 1], [-1, 1]]\nmetric = fermat\n"
      "g0 = [[1, 0], [0, 1]]\ndelta = [0, 0]\nbeta = 1\nconformal = x1 + 2\n");
  CHECK_NOTHROW(buildSpacetime(vanishing));

  const ProblemConfig negative = parseConfig(
      "dim = 2\nbounds = [[-1, 1], [-1, 1]]\nmetric = fermat\n"
      "g0 = [[1, 0], [0, 1]]\ndelta = [0, 0]\nbeta = 1\nconformal = x1\n");
  CHECK_THROWS_AS(buildSpacetime(negative), NonPositiveConformal);
}

TEST_CASE("comments, spacing and expression constants are accepted") {
  const ProblemConfig cfg = parseConfig(
      "  dim = 2   # two coordinates\n"
      "\n"
      "bounds = [[-pi, pi], [0, e]]  # expression bounds\n"
      "h = [[1 + 0*x1, 0], [0, 2]]\n"
      "omega = [0, 0.1sin(x1)]\n");
  CHECK(cfg.domain.bounds(0)->lo == doctest::Approx(-M_PI));
  CHECK(cfg.domain.bounds(1)->hi == doctest::Approx(std::exp(1.0)));
  const FinslerMetric m = buildMetric(cfg);
  CHECK(m.value(pt(0, 1), pt(0, 1)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("dump then parse is a fixed point describing the same metric") {
  for (const char* text : {kRanders, kFermat}) {
    const ProblemConfig cfg = parseConfig(text);
    const std::string once = dumpConfig(cfg);
    const ProblemConfig cfg2 = parseConfig(once);
    CHECK(dumpConfig(cfg2) == once);

    const FinslerMetric a = buildMetric(cfg);
    const FinslerMetric b = buildMetric(cfg2);
    auto gen = oracles::rng(5);
    for (int i = 0; i < 40; ++i) {
      const Vec x = oracles::randomPoint(cfg.domain, gen);
      const Vec y = oracles::randomDirection(2, gen);
      CHECK(a.value(x, y) == doctest::Approx(b.value(x, y)).epsilon(1e-14));
    }
  }
}

TEST_CASE("a conformally rescaled splitting builds the same optical metric") {
  const ProblemConfig plain = parseConfig(kFermat);
  const ProblemConfig scaled = parseConfig(
      "dim = 2\nperiods = [2pi, none]\nbounds = [none, [1, 2]]\nmetric = fermat\n"
      "g0 = [[1 + x2^2, 0], [0, 1 + x2^2]]\ndelta = [0.3, 0]\nbeta = 1 + x2^2\n"
      "conformal = 1 + x2^2\n");
  const FinslerMetric a = buildMetric(plain);
  const FinslerMetric b = buildMetric(scaled);
  auto gen = oracles::rng(6);
  for (int i = 0; i < 60; ++i) {
    const Vec x = oracles::randomPoint(plain.domain, gen);
    const Vec y = oracles::randomDirection(2, gen);
    CHECK(a.value(x, y) == doctest::Approx(b.value(x, y)).epsilon(1e-12));
  }
}

TEST_CASE("configs load from disk and missing files fail loudly") {
  namespace fs = std::filesystem;
  const fs::path tmp = fs::temp_directory_path() / "finsler_cfg_roundtrip.cfg";
  {
    std::ofstream out(tmp);
    out << kFermat;
  }
  const ProblemConfig cfg = loadConfig(tmp.string());
  CHECK(cfg.metricChoice == "fermat");
  fs::remove(tmp);
  CHECK_THROWS_AS(loadConfig(tmp.string()), ConfigError);
}
