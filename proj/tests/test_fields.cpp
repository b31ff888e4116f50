#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "finsler/errors.hpp"
#include "finsler/expr.hpp"
#include "finsler/fields.hpp"
#include "oracles.hpp"

using namespace finsler;

namespace {
Vec pt(double a, double b) {
  Vec x(2);
  x << a, b;
  return x;
}
}  // namespace

TEST_CASE("expressions evaluate arithmetic, powers, and functions") {
  const Expression e = Expression::compile("1 + 0.5*(x2 - 1.5)^2", 2);
  CHECK(e(pt(7.0, 1.5)) == doctest::Approx(1.0));
  CHECK(e(pt(0.0, 2.5)) == doctest::Approx(1.5));

  const Expression trig = Expression::compile("sin(x1)*cos(x2) + exp(-x1)", 2);
  CHECK(trig(pt(0.3, 0.7)) ==
        doctest::Approx(std::sin(0.3) * std::cos(0.7) + std::exp(-0.3)).epsilon(1e-14));

  CHECK(Expression::compile("sqrt(x1^2 + x2^2)", 2)(pt(3.0, 4.0)) == doctest::Approx(5.0));
  // right-associative power
  CHECK(Expression::compile("2^3^2", 1)(Vec::Zero(1)) == doctest::Approx(512.0));
  CHECK(Expression::compile("-x1^2", 1)(Vec::Ones(1)) == doctest::Approx(-1.0));
  CHECK(Expression::compile("1/(1 + x1)", 1)(Vec::Ones(1)) == doctest::Approx(0.5));
}

TEST_CASE("expressions know pi, e, and implicit multiplication") {
  CHECK(Expression::compile("2pi", 1).evalConstant() == doctest::Approx(2.0 * M_PI));
  CHECK(Expression::compile("e", 1).evalConstant() == doctest::Approx(std::exp(1.0)));
  CHECK(Expression::compile("3x1", 1)(Vec::Ones(1) * 2.0) == doctest::Approx(6.0));
  CHECK(Expression::compile("2sin(x1)", 1)(Vec::Ones(1)) ==
        doctest::Approx(2.0 * std::sin(1.0)));
}

TEST_CASE("bad expressions are rejected") {
  CHECK_THROWS_AS(Expression::compile("x3", 2), ConfigError);
  CHECK_THROWS_AS(Expression::compile("1 +", 2), ConfigError);
  CHECK_THROWS_AS(Expression::compile("foo(x1)", 2), ConfigError);
  CHECK_THROWS_AS(Expression::compile("(x1", 2), ConfigError);
  CHECK_THROWS_AS(Expression::compile("", 2), ConfigError);
  CHECK_THROWS_AS(Expression::compile("x1 x2", 2), ConfigError);
  CHECK_THROWS_AS(Expression::compile("x0", 2), ConfigError);
  CHECK_THROWS_AS(Expression::compile("sin()", 1), ConfigError);
  CHECK_THROWS_AS(Expression::compile("x1", 1).evalConstant(), ConfigError);
}

TEST_CASE("periodic axes wrap and take minimal differences") {
  ChartDomain dom(2);
  dom.setPeriod(0, 2.0 * M_PI);
  dom.setBounds(1, -4.0, 4.0);

  const Vec w = dom.wrap(pt(2.0 * M_PI + 0.25, 3.0));
  CHECK(w[0] == doctest::Approx(0.25));
  CHECK(w[1] == doctest::Approx(3.0));

  // shortest way from 0.1 to 2pi-0.1 goes backwards across the seam
  const Vec d = dom.minimalDifference(pt(0.1, 0.0), pt(2.0 * M_PI - 0.1, 0.0));
  CHECK(d[0] == doctest::Approx(0.2));

  CHECK(dom.inBounds(pt(100.0, 3.9)));
  CHECK_FALSE(dom.inBounds(pt(0.0, 4.1)));
  CHECK_FALSE(dom.inBounds(pt(0.0, 3.95), 0.1));
  CHECK_THROWS_AS(dom.requireInterior(pt(0.0, 4.1)), DomainError);

  CHECK(dom.hasPeriodicAxis());
  CHECK(dom.periodicAxes() == std::vector<int>{0});
}

TEST_CASE("extended chart appends a bounded fiber axis") {
  ChartDomain dom(2);
  dom.setBounds(0, -1.0, 1.0);
  dom.setBounds(1, -1.0, 1.0);
  const ChartDomain ext = dom.extended(Interval{-0.5, 1.5});
  CHECK(ext.dim() == 3);
  CHECK(ext.bounds(2)->lo == doctest::Approx(-0.5));
  CHECK(ext.bounds(2)->hi == doctest::Approx(1.5));
  CHECK_FALSE(ext.isPeriodic(2));
}

TEST_CASE("scalar field FD partials match an analytic gradient") {
  ChartDomain dom(2);
  dom.setBounds(0, -2.0, 2.0);
  dom.setBounds(1, -2.0, 2.0);
  ScalarField f(dom, [](const Vec& x) { return std::sin(x[0]) * x[1] + x[0] * x[0]; });

  auto gen = oracles::rng(11);
  for (int i = 0; i < 25; ++i) {
    const Vec x = oracles::randomPoint(dom, gen);
    const Vec g = f.partialsFD(x);
    CHECK(g[0] == doctest::Approx(std::cos(x[0]) * x[1] + 2.0 * x[0]).epsilon(1e-7));
    CHECK(g[1] == doctest::Approx(std::sin(x[0])).epsilon(1e-7));
  }
}

TEST_CASE("analytic partials take precedence over FD") {
  ChartDomain dom(1);
  dom.setBounds(0, -1.0, 1.0);
  ScalarField f(dom, [](const Vec& x) { return x[0] * x[0]; });
  f.withPartials([](const Vec&) { return Vec::Constant(1, 123.0); });
  CHECK(f.partials(Vec::Zero(1))[0] == doctest::Approx(123.0));
  CHECK(f.partialsFD(Vec::Zero(1))[0] == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("FD stencils at the wall raise a domain error") {
  ChartDomain dom(1);
  dom.setBounds(0, 0.0, 1.0);
  ScalarField f(dom, [](const Vec& x) { return x[0]; });
  CHECK_THROWS_AS(f.partialsFD(Vec::Zero(1)), DomainError);
  CHECK_NOTHROW(f.partialsFD(Vec::Constant(1, 0.5)));
}

TEST_CASE("matrix field FD partials match hand derivatives") {
  ChartDomain dom(2);
  dom.setBounds(0, -2.0, 2.0);
  dom.setBounds(1, 1.0, 2.0);
  RiemannianField g(dom, [](const Vec& x) {
    Mat m(2, 2);
    m << x[1] * x[1], 0.0, 0.0, 1.0 + x[0] * x[0];
    return m;
  });
  const Vec x = pt(0.5, 1.5);
  const auto dg = g.partialsFD(x);
  CHECK(dg[0](0, 0) == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(dg[0](1, 1) == doctest::Approx(2.0 * x[0]).epsilon(1e-7));
  CHECK(dg[1](0, 0) == doctest::Approx(2.0 * x[1]).epsilon(1e-7));
  CHECK(dg[1](1, 1) == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("positive definiteness is checked on the sample grid") {
  ChartDomain dom(1);
  dom.setBounds(0, -1.0, 1.0);
  RiemannianField good(dom, [](const Vec&) { return Mat::Identity(1, 1); });
  CHECK_NOTHROW(good.requirePositiveDefinite({9}));
  CHECK(good.smallestEigenvalueOnGrid({9}) == doctest::Approx(1.0));

  // degenerates at x = 0
  RiemannianField bad(dom, [](const Vec& x) { return Mat::Constant(1, 1, x[0] * x[0]); });
  CHECK_THROWS_AS(bad.requirePositiveDefinite({9}), Error);
}

TEST_CASE("bounds grid covers the box and excludes periodic right endpoints") {
  ChartDomain dom(2);
  dom.setPeriod(0, 1.0);
  dom.setBounds(1, 0.0, 1.0);
  const auto grid = boundsGrid(dom, {4, 3});
  CHECK(grid.size() == 12);
  double maxAxis0 = 0.0, maxAxis1 = 0.0;
  for (const Vec& p : grid) {
    maxAxis0 = std::max(maxAxis0, p[0]);
    maxAxis1 = std::max(maxAxis1, p[1]);
  }
  CHECK(maxAxis0 == doctest::Approx(0.75));  // 4 nodes on [0,1), endpoint excluded
  CHECK(maxAxis1 == doctest::Approx(1.0));   // 3 nodes on [0,1], inclusive

  ChartDomain open(1);  // no bounds, no period: nothing to sample
  CHECK_THROWS_AS(boundsGrid(open, {4}), ConfigError);
}
