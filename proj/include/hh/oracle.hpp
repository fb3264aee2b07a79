#pragma once

/// \file oracle.hpp
/// Reference integration and differentiation. Everything the inequality
/// checks compare against comes from here, so it deliberately shares no code
/// with the midpoint/trapezoid rules in quadrature.hpp.

#include "hh/core.hpp"
#include "hh/expr.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <limits>
#include <queue>
#include <vector>

namespace hh {

struct IntegralEstimate {
  double value = 0;
  double err_est = 0;
  int segments = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
inline constexpr std::array<double, 8> kKronrodNodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for nodes 1, 3, 5 and the centre.
inline constexpr std::array<double, 4> kGaussWeights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double err;
  double roundoff;  // error floor implied by cancellation in the sum
  int depth;

  bool operator<(const Segment& o) const { return err < o.err; }
};

template <typename F>
Segment gauss_kronrod_15(F&& f, double a, double b, int depth) {
  const double c = (a + b) / 2;
  const double h = (b - a) / 2;
  const double fc = f(c);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  double l1 = std::abs(kronrod);
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kKronrodNodes[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    kronrod += kKronrodWeights[j] * (f1 + f2);
    l1 += kKronrodWeights[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1)
      gauss += kGaussWeights[j / 2] * (f1 + f2);
  }
  const double eps = std::numeric_limits<double>::epsilon();
  return {a, b, kronrod * h, std::abs((kronrod - gauss) * h), 50 * eps * l1 * std::abs(h), depth};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration of f over [a, b] to absolute
/// tolerance tol. Segments are bisected largest-error first; a segment whose
/// error is already at its roundoff floor counts as converged.
template <typename F>
  requires std::invocable<F&, double>
IntegralEstimate integrate_ref(F&& f, double a, double b, double tol, const ToleranceConfig& cfg = {}) {
  if (!(tol > 0))
    throw PreconditionError("integrate_ref: tol must be positive");
  if (!(a < b)) {
    if (a == b)
      return {0, 0, 0};
    throw PreconditionError("integrate_ref: requires a <= b");
  }
  constexpr int kMaxSegments = 20000;

  std::priority_queue<detail::Segment> open;
  std::vector<detail::Segment> done;
  double err_sum = 0;
  auto push = [&](const detail::Segment& s) {
    err_sum += s.err;
    if (s.err <= s.roundoff)
      done.push_back(s);
    else
      open.push(s);
  };
  push(detail::gauss_kronrod_15(f, a, b, 0));

  while (!open.empty() && err_sum > tol) {
    if (static_cast<int>(open.size() + done.size()) >= kMaxSegments)
      throw ConvergenceError("integrate_ref: segment budget exhausted");
    const detail::Segment worst = open.top();
    if (worst.depth >= cfg.max_refine_depth)
      throw ConvergenceError("integrate_ref: maximum refinement depth reached");
    open.pop();
    err_sum -= worst.err;
    const double m = worst.a + (worst.b - worst.a) / 2;
    push(detail::gauss_kronrod_15(f, worst.a, m, worst.depth + 1));
    push(detail::gauss_kronrod_15(f, m, worst.b, worst.depth + 1));
  }

  // Sum left to right so the result does not depend on queue order.
  for (; !open.empty(); open.pop())
    done.push_back(open.top());
  std::sort(done.begin(), done.end(), [](const auto& l, const auto& r) { return l.a < r.a; });
  IntegralEstimate out{0, 0, static_cast<int>(done.size())};
  for (const auto& s : done) {
    out.value += s.value;
    out.err_est += s.err;
  }
  return out;
}

inline IntegralEstimate integrate_ref(const Expr& f, const Interval& iv, double tol,
                                      const ToleranceConfig& cfg = {}) {
  return integrate_ref([&](double x) { return eval(f, x); }, iv.a(), iv.b(), tol, cfg);
}

/// Five-point central differences, order 1 or 2. Only used to cross-check
/// jets, never inside a bound.
template <typename F>
  requires std::invocable<F&, double>
double diff_ref(F&& f, double x, int order) {
  switch (order) {
    case 1: {
      const double h = std::max(1e-5, 1e-5 * std::abs(x));
      return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
    }
    case 2: {
      const double h = std::max(1e-3, 1e-3 * std::abs(x));
      return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h);
    }
    default:
      throw PreconditionError("diff_ref: order must be 1 or 2");
  }
}

inline double diff_ref(const Expr& f, double x, int order) {
  return diff_ref([&](double t) { return eval(f, t); }, x, order);
}

}  // namespace hh
