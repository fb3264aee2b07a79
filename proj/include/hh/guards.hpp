#pragma once

/// \file guards.hpp
/// Hypothesis checks run before any bound is evaluated: domain screening and
/// sampled midpoint convexity on the extended interval.

#include "hh/core.hpp"
#include "hh/expr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>

namespace hh {

inline constexpr std::uint64_t kConvexitySeed = 0x9e3779b97f4a7c15ULL;

/// Largest violation of g((x+y)/2) <= (g(x)+g(y))/2 over n seeded random
/// pairs in [lo, hi] (plus the endpoint pair). Reported as lhs = violation,
/// rhs = 0, so satisfied means no violation beyond abs_tol.
template <typename G>
BoundReport midpoint_convexity(G&& g, double lo, double hi, int n, std::string label, InputEcho echo,
                               const ToleranceConfig& tol = {}) {
  if (n < 3)
    throw PreconditionError("convexity sampling needs n >= 3");
  std::mt19937_64 rng(kConvexitySeed);
  std::uniform_real_distribution<double> u(lo, hi);
  const double eps = std::numeric_limits<double>::epsilon();

  double worst = -std::numeric_limits<double>::infinity();
  double worst_x = lo, worst_y = hi;
  for (int i = 0; i < n; ++i) {
    const double x = i == 0 ? lo : u(rng);
    const double y = i == 0 ? hi : u(rng);
    const double gx = g(x);
    const double gy = g(y);
    const double gm = g(x + (y - x) / 2);
    // Slack for rounding in the three evaluations.
    const double slack = 8 * eps * (std::abs(gx) + std::abs(gy) + std::abs(gm));
    const double violation = gm - (gx + gy) / 2 - slack;
    if (violation > worst) {
      worst = violation;
      worst_x = x;
      worst_y = y;
    }
  }
  BoundReport r = make_report(std::move(label), std::max(worst, 0.0), 0.0, std::move(echo), tol);
  r.details = {{"worst_x", worst_x}, {"worst_y", worst_y}, {"samples", static_cast<double>(n)}};
  return r;
}

/// Midpoint convexity of f on the extended interval. Throws DomainError if f
/// is undefined anywhere in [lo, hi].
inline BoundReport sample_convexity(const Expr& f, const ExtendedInterval& iv, int n,
                                    const ToleranceConfig& tol = {}) {
  if (n < 3)
    throw PreconditionError("convexity sampling needs n >= 3");
  check_domain(f, iv.lo, iv.hi, false);
  InputEcho echo{f.text(), iv.lo, iv.hi, {}};
  return midpoint_convexity([&](double x) { return eval(f, x); }, iv.lo, iv.hi, n, "convexity", echo, tol);
}

namespace detail {

inline constexpr int kGuardSamples = 64;

inline void require(const BoundReport& r) {
  if (!r.satisfied)
    throw GuardFailure(r);
}

/// f convex on [lo, hi].
inline void guard_convex(const Expr& f, double lo, double hi, const ToleranceConfig& tol) {
  check_domain(f, lo, hi, false);
  require(midpoint_convexity([&](double x) { return eval(f, x); }, lo, hi, kGuardSamples,
                             "guard: f convex", {f.text(), lo, hi, {}}, tol));
}

/// |f^(k)|^q convex on [lo, hi] for k = 1 or 2.
inline void guard_derivative_power_convex(const Expr& f, int k, double q, double lo, double hi,
                                          const ToleranceConfig& tol) {
  check_domain(f, lo, hi, true);
  auto g = [&](double x) {
    const auto j = eval_jet(f, x);
    return std::pow(std::abs(k == 1 ? j.v1 : j.v2), q);
  };
  require(midpoint_convexity(g, lo, hi, kGuardSamples,
                             k == 1 ? "guard: |f'|^q convex" : "guard: |f''|^q convex",
                             InputEcho{f.text(), lo, hi, {}}.with("q", q), tol));
}

}  // namespace detail

}  // namespace hh
