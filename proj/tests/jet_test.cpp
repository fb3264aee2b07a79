#include "hh/expr.hpp"
#include "hh/jet.hpp"
#include "hh/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

using namespace hh;
using J = Jet3<double>;

namespace {

void expect_jet_near(const J& got, const J& want, double tol) {
  EXPECT_NEAR(got.v0, want.v0, tol);
  EXPECT_NEAR(got.v1, want.v1, tol);
  EXPECT_NEAR(got.v2, want.v2, tol);
  EXPECT_NEAR(got.v3, want.v3, tol);
}

}  // namespace

TEST(Jet, PolynomialAndExp) {
  expect_jet_near(eval_jet(parse("x^2"), 3), {9, 6, 2, 0}, 1e-14);
  expect_jet_near(eval_jet(parse("exp(x)"), 0), {1, 1, 1, 1}, 1e-14);
}

// f(x) = 1/x: f' = -1/x^2, f'' = 2/x^3, f''' = -6/x^4.
TEST(Jet, Reciprocal) {
  expect_jet_near(eval_jet(parse("1/x"), 2), {0.5, -0.25, 0.25, -0.375}, 1e-15);
}

TEST(Jet, ElementaryClosedForms) {
  const double x = 0.7;
  expect_jet_near(eval_jet(parse("log(x)"), x), {std::log(x), 1 / x, -1 / (x * x), 2 / (x * x * x)}, 1e-13);
  expect_jet_near(eval_jet(parse("sqrt(x)"), x),
                  {std::sqrt(x), 0.5 / std::sqrt(x), -0.25 * std::pow(x, -1.5), 0.375 * std::pow(x, -2.5)}, 1e-13);
  expect_jet_near(eval_jet(parse("sinh(x)"), x), {std::sinh(x), std::cosh(x), std::sinh(x), std::cosh(x)}, 1e-14);
  expect_jet_near(eval_jet(parse("cosh(x)"), x), {std::cosh(x), std::sinh(x), std::cosh(x), std::sinh(x)}, 1e-14);
  expect_jet_near(eval_jet(parse("abs(x)"), -x), {x, -1, 0, 0}, 1e-15);
  const double r = 2.5;
  expect_jet_near(eval_jet(parse("x^2.5"), x),
                  {std::pow(x, r), r * std::pow(x, r - 1), r * (r - 1) * std::pow(x, r - 2),
                   r * (r - 1) * (r - 2) * std::pow(x, r - 3)},
                  1e-13);
}

TEST(Jet, Linearity) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 200; ++i) {
    const double x = u(rng), alpha = u(rng), beta = u(rng);
    const J f = exp(J::variable(x));
    const J g = sinh(J::variable(x)) * J::variable(x);
    const J lin = alpha * f + beta * g;
    const J want{alpha * f.v0 + beta * g.v0, alpha * f.v1 + beta * g.v1, alpha * f.v2 + beta * g.v2,
                 alpha * f.v3 + beta * g.v3};
    expect_jet_near(lin, want, 1e-12);
  }
}

// (fg)''' = f'''g + 3f''g' + 3f'g'' + fg''' checked on exp(x) * x^3.
TEST(Jet, ProductRule) {
  const double x = 1.3;
  const J p = exp(J::variable(x)) * ipow(J::variable(x), 3);
  const double e = std::exp(x);
  const double g[4] = {x * x * x, 3 * x * x, 6 * x, 6};
  EXPECT_NEAR(p.v0, e * g[0], 1e-12);
  EXPECT_NEAR(p.v1, e * (g[0] + g[1]), 1e-12);
  EXPECT_NEAR(p.v2, e * (g[0] + 2 * g[1] + g[2]), 1e-12);
  EXPECT_NEAR(p.v3, e * (g[0] + 3 * g[1] + 3 * g[2] + g[3]), 1e-11);
}

TEST(Jet, ChainRuleNested) {
  // exp(sinh x): d1 = c e, d2 = (s + c^2) e, d3 = (c + 2cs + c(s + c^2)) e.
  const double x = 0.4, s = std::sinh(x), c = std::cosh(x), e = std::exp(s);
  const J j = exp(sinh(J::variable(x)));
  EXPECT_NEAR(j.v1, c * e, 1e-13);
  EXPECT_NEAR(j.v2, (s + c * c) * e, 1e-13);
  EXPECT_NEAR(j.v3, (c + 2 * c * s + c * (s + c * c)) * e, 1e-12);
}

// First and second components against the central-difference oracle on
// 1000 random (function, point) pairs.
TEST(Jet, AgreesWithFiniteDifferences) {
  const std::vector<std::string> battery = {"x^2",          "x^4 - 3*x",  "exp(x)",      "cosh(x)",
                                            "sinh(2*x)",    "log(x)",     "sqrt(x)",     "1/x",
                                            "x*log(x)",     "exp(-x^2)",  "x^-2",        "x^1.5",
                                            "cosh(x)/x",    "abs(x - 10)", "exp(x)*x^3", "log(1 + x^2)"};
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.2, 4);
  std::uniform_int_distribution<std::size_t> pick(0, battery.size() - 1);
  for (int i = 0; i < 1000; ++i) {
    const Expr e = parse(battery[pick(rng)]);
    const double x = u(rng);
    const J j = eval_jet(e, x);
    EXPECT_NEAR(j.v1, diff_ref(e, x, 1), 1e-6 * (1 + std::abs(j.v1))) << e.text() << " at " << x;
    EXPECT_NEAR(j.v2, diff_ref(e, x, 2), 1e-6 * (1 + std::abs(j.v2))) << e.text() << " at " << x;
  }
}

// Third component against a central difference of the exact second component.
TEST(Jet, ThirdDerivativeAgreesWithDifferencedSecond) {
  const std::vector<std::string> battery = {"exp(x)*x^3", "1/x", "log(x)", "cosh(x)/x", "x^2.5"};
  for (const auto& s : battery) {
    const Expr e = parse(s);
    for (double x : {0.5, 1.0, 2.5}) {
      const double h = 1e-4;
      const double fd = (eval_jet(e, x + h).v2 - eval_jet(e, x - h).v2) / (2 * h);
      EXPECT_NEAR(eval_jet(e, x).v3, fd, 1e-6 * (1 + std::abs(fd))) << s << " at " << x;
    }
  }
}
