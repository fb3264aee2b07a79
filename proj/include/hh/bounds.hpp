#pragma once

/// \file bounds.hpp
/// Hermite-Hadamard type inequalities as (lhs, rhs) pairs: the classical
/// inequality, the two integral identities behind the estimates, the
/// three-point bounds on the extended interval and the first/second
/// derivative estimates with constants K1..K6.
///
/// Every left side uses the reference integrator; every right side is a
/// closed-form evaluation. Hypotheses are checked on the extended interval
/// and a failing hypothesis throws GuardFailure or DomainError.

#include "hh/core.hpp"
#include "hh/expr.hpp"
#include "hh/guards.hpp"
#include "hh/oracle.hpp"
#include "hh/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <utility>

namespace hh {

inline constexpr double kOracleTol = 1e-12;
inline constexpr double kLemmaResidualTol = 1e-8;
inline constexpr double kK1 = 0.125;

namespace detail {

inline double mean_integral(const Expr& f, const Interval& iv, const ToleranceConfig& cfg) {
  return integrate_ref(f, iv, kOracleTol, cfg).value / iv.width();
}

inline InputEcho echo_of(const Expr& f, const Interval& iv) { return {f.text(), iv.a(), iv.b(), {}}; }

inline void check_q(double q) {
  if (!(q >= 1) || !std::isfinite(q))
    throw PreconditionError("exponent q must satisfy q >= 1");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Constants
// ---------------------------------------------------------------------------

/// Corollary-form constant as printed: (1 / ((p+1) 2^{p+1+1/(pq)}))^{1/p}.
inline double k2_printed(double q) {
  const double p = conjugate_exponent(q);
  return std::pow(1 / ((p + 1) * std::pow(2.0, p + 1 + 1 / (p * q))), 1 / p);
}

/// The Hölder-estimate constant rewritten in corollary form:
/// (1/(2^{p+1}(p+1)))^{1/p} 2^{-1/q} = (1 / ((p+1) 2^{2p}))^{1/p}.
inline double k2_derived(double q) {
  const double p = conjugate_exponent(q);
  return std::pow(1 / ((p + 1) * std::pow(2.0, 2 * p)), 1 / p);
}

/// √π Γ(p+1) / (2 Γ(p+3/2)), i.e. 2^{2p} B(p+1, p+1).
inline double beta_moment_constant(double p) {
  return std::exp(0.5 * std::log(std::numbers::pi) + log_gamma(p + 1) - log_gamma(p + 1.5)) / 2;
}

// ---------------------------------------------------------------------------
// Classical inequality and identities
// ---------------------------------------------------------------------------

/// f(mid) <= mean <= (f(a) + f(b)) / 2.
inline std::pair<BoundReport, BoundReport> hh_classic_check(const Expr& f, const Interval& iv,
                                                            const ToleranceConfig& cfg = {}) {
  detail::guard_convex(f, iv.a(), iv.b(), cfg);
  const double mean = detail::mean_integral(f, iv, cfg);
  const auto echo = detail::echo_of(f, iv);
  return {make_report("eq1.left", eval(f, iv.mid()), mean, echo, cfg),
          make_report("eq1.right", mean, (eval(f, iv.a()) + eval(f, iv.b())) / 2, echo, cfg)};
}

enum class Lemma { TrapezoidIdentity, MidpointIdentity };

/// |LHS - RHS| of the identity, both sides from the reference integrator:
///  - TrapezoidIdentity: (f(a)+f(b))/2 - mean = ((b-a)^2/2) ∫_0^1 t(1-t) f''(ta+(1-t)b) dt
///  - MidpointIdentity:  mean - f(mid) = (b-a) [∫_0^{1/2} t f'(b+(a-b)t) dt
///                                              + ∫_{1/2}^1 (t-1) f'(b+(a-b)t) dt]
inline double lemma_identity_residual(Lemma which, const Expr& f, const Interval& iv,
                                      const ToleranceConfig& cfg = {}) {
  check_domain(f, iv.a(), iv.b(), true);
  const double a = iv.a(), b = iv.b(), w = iv.width();
  const double mean = detail::mean_integral(f, iv, cfg);
  if (which == Lemma::TrapezoidIdentity) {
    const double lhs = (eval(f, a) + eval(f, b)) / 2 - mean;
    auto g = [&](double t) { return t * (1 - t) * eval_jet(f, t * a + (1 - t) * b).v2; };
    const double rhs = w * w / 2 * integrate_ref(g, 0.0, 1.0, kOracleTol, cfg).value;
    return std::abs(lhs - rhs);
  }
  const double lhs = mean - eval(f, iv.mid());
  auto g1 = [&](double t) { return t * eval_jet(f, b + (a - b) * t).v1; };
  auto g2 = [&](double t) { return (t - 1) * eval_jet(f, b + (a - b) * t).v1; };
  const double rhs = w * (integrate_ref(g1, 0.0, 0.5, kOracleTol, cfg).value +
                          integrate_ref(g2, 0.5, 1.0, kOracleTol, cfg).value);
  return std::abs(lhs - rhs);
}

// ---------------------------------------------------------------------------
// Three-point bounds on the extended interval
// ---------------------------------------------------------------------------

/// f(mid) <= mean <= [2 f(mid) + f(hi) + f(lo)] / 4 for f convex on [lo, hi].
inline std::pair<BoundReport, BoundReport> three_point_check(const Expr& f, const Interval& iv,
                                                             const ToleranceConfig& cfg = {}) {
  const ExtendedInterval ext = extend(iv);
  detail::guard_convex(f, ext.lo, ext.hi, cfg);
  const double mean = detail::mean_integral(f, iv, cfg);
  const double fm = eval(f, ext.mid);
  const auto echo = detail::echo_of(f, iv);
  return {make_report("k1.left", fm, mean, echo, cfg),
          make_report("k1.right", mean, (2 * fm + eval(f, ext.hi) + eval(f, ext.lo)) / 4, echo, cfg)};
}

/// |mean - f(mid)/2| <= |f(hi) + f(lo)| / 4, evaluated as stated. Not
/// invariant under f -> f + c, so the report is flagged fragile.
inline BoundReport abs_half_check(const Expr& f, const Interval& iv, const ToleranceConfig& cfg = {}) {
  const ExtendedInterval ext = extend(iv);
  detail::guard_convex(f, ext.lo, ext.hi, cfg);
  const double mean = detail::mean_integral(f, iv, cfg);
  BoundReport r = make_report("k2", std::abs(mean - eval(f, ext.mid) / 2),
                              std::abs(eval(f, ext.hi) + eval(f, ext.lo)) / 4, detail::echo_of(f, iv), cfg);
  r.fragile = true;
  return r;
}

// ---------------------------------------------------------------------------
// First-derivative estimates
// ---------------------------------------------------------------------------

struct FirstOrderBounds {
  double q = 1;
  std::optional<double> p;
  double lhs = 0;
  double rhs_thm2 = 0;
  std::optional<double> rhs_thm3;
  double k1 = kK1;
  std::optional<double> k2_printed;
  std::optional<double> k2_derived;
  double rhs_min = 0;
};

/// |mean - f(mid)| against ((b-a)/8)(|f'(lo)|^q + |f'(hi)|^q)^{1/q} and, for
/// q > 1, (b-a)(1/(2^{p+1}(p+1)))^{1/p} ((|f'(lo)|^q + |f'(hi)|^q)/2)^{1/q}.
inline FirstOrderBounds first_order_bounds(const Expr& f, const Interval& iv, double q,
                                           const ToleranceConfig& cfg = {}) {
  detail::check_q(q);
  const ExtendedInterval ext = extend(iv);
  detail::guard_derivative_power_convex(f, 1, q, ext.lo, ext.hi, cfg);

  const double w = iv.width();
  const double dlo = std::pow(std::abs(eval_jet(f, ext.lo).v1), q);
  const double dhi = std::pow(std::abs(eval_jet(f, ext.hi).v1), q);

  FirstOrderBounds out;
  out.q = q;
  out.lhs = std::abs(detail::mean_integral(f, iv, cfg) - eval(f, ext.mid));
  out.rhs_thm2 = w / 8 * std::pow(dlo + dhi, 1 / q);
  out.rhs_min = out.rhs_thm2;
  if (q > 1) {
    const double p = conjugate_exponent(q);
    out.p = p;
    out.rhs_thm3 = w * std::pow(1 / (std::pow(2.0, p + 1) * (p + 1)), 1 / p) * std::pow((dlo + dhi) / 2, 1 / q);
    out.k2_printed = k2_printed(q);
    out.k2_derived = k2_derived(q);
    out.rhs_min = std::min(out.rhs_min, *out.rhs_thm3);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Second-derivative estimates
// ---------------------------------------------------------------------------

struct SecondOrderBounds {
  double q = 1;
  std::optional<double> p;
  double lhs = 0;
  double rhs_k3 = 0;
  std::optional<double> rhs_k4;
  std::optional<double> rhs_k5;
  double rhs_k6 = 0;
  double rhs_min = 0;
};

/// |mean - [f(lo) + f(hi) + 2 f(mid)]/4| against the four estimates K3..K6
/// (K4 and K5 need the conjugate exponent and exist only for q > 1).
inline SecondOrderBounds second_order_bounds(const Expr& f, const Interval& iv, double q,
                                             const ToleranceConfig& cfg = {}) {
  detail::check_q(q);
  const ExtendedInterval ext = extend(iv);
  detail::guard_derivative_power_convex(f, 2, q, ext.lo, ext.hi, cfg);

  const double w2 = iv.width() * iv.width();
  const double dlo = std::pow(std::abs(eval_jet(f, ext.lo).v2), q);
  const double dhi = std::pow(std::abs(eval_jet(f, ext.hi).v2), q);
  const double three_point = (eval(f, ext.lo) + eval(f, ext.hi) + 2 * eval(f, ext.mid)) / 4;

  SecondOrderBounds out;
  out.q = q;
  out.lhs = std::abs(detail::mean_integral(f, iv, cfg) - three_point);
  out.rhs_k3 = w2 / 3 * std::pow((dlo + dhi) / 2, 1 / q);
  out.rhs_k6 = w2 * std::pow(2 / ((q + 1) * (q + 2) * (q + 3)), 1 / q) * std::pow(2 * dlo + (q + 1) * dhi, 1 / q);
  out.rhs_min = std::min(out.rhs_k3, out.rhs_k6);
  if (q > 1) {
    const double p = conjugate_exponent(q);
    out.p = p;
    out.rhs_k4 = 2 * w2 * std::pow(beta_moment_constant(p), 1 / p) * std::pow((dlo + dhi) / 2, 1 / q);
    out.rhs_k5 = w2 * 2 * std::pow(1 / (p + 1), 1 / p) * std::pow(1 / ((q + 1) * (q + 2)), 1 / q) *
                 std::pow(dlo + (q + 1) * dhi, 1 / q);
    out.rhs_min = std::min({out.rhs_min, *out.rhs_k4, *out.rhs_k5});
  }
  return out;
}

/// Uniform-bound forms for |f''| <= K on the extended interval:
/// (K(b-a)^2/3, (K(b-a)^2/2) (√π Γ(p+1) / (2Γ(p+3/2)))^{1/p}).
inline std::pair<double, double> uniform_bound_remarks(double K, const Interval& iv, double p) {
  if (!(K >= 0))
    throw PreconditionError("uniform bound: K must be non-negative");
  if (!(p > 1))
    throw PreconditionError("uniform bound: requires p > 1");
  const double w2 = iv.width() * iv.width();
  return {K * w2 / 3, K * w2 / 2 * std::pow(beta_moment_constant(p), 1 / p)};
}

}  // namespace hh
