#pragma once

/// \file special.hpp
/// Gamma and Beta, modified Bessel functions I_p and K_p, the normalized
/// Bessel function 𝓘_p, the q-digamma function and its derivatives, plus the
/// inequality checks built on them.

#include "hh/core.hpp"
#include "hh/oracle.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace hh {

/// A truncated series (or truncated integral) with a bound on what was cut.
struct SeriesResult {
  double value = 0;
  int terms_used = 0;
  double tail_bound = 0;
};

// ---------------------------------------------------------------------------
// Gamma / Beta
// ---------------------------------------------------------------------------

namespace detail {

// Lanczos approximation, g = 7, nine coefficients.
inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczos{
    0.99999999999980993227684700473478, 676.520368121885098567009190444019,
    -1259.13921672240287047156078755283, 771.3234287776530788486528258894,
    -176.61502916214059906584551354,     12.507343278686904814458936853,
    -0.13857109526572011689554707,       9.984369578019570859563e-6,
    1.50563273514931155834e-7};

inline double lanczos_log_gamma(double x) {
  // Valid for x >= 0.5.
  x -= 1;
  double sum = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i)
    sum += kLanczos[i] / (x + static_cast<double>(i));
  const double t = x + kLanczosG + 0.5;
  return 0.5 * std::log(2 * std::numbers::pi) + (x + 0.5) * std::log(t) - t + std::log(sum);
}

}  // namespace detail

/// log Γ(x) for x > 0. Reentrant, unlike std::lgamma.
inline double log_gamma(double x) {
  if (!(x > 0) || !std::isfinite(x))
    throw PreconditionError("log_gamma: argument must be positive");
  if (x < 0.5)
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - detail::lanczos_log_gamma(1 - x);
  return detail::lanczos_log_gamma(x);
}

inline double gamma(double x) { return std::exp(log_gamma(x)); }

inline double beta(double x, double y) {
  if (!(x > 0) || !(y > 0))
    throw PreconditionError("beta: arguments must be positive");
  return std::exp(log_gamma(x) + log_gamma(y) - log_gamma(x + y));
}

// ---------------------------------------------------------------------------
// Modified Bessel functions
// ---------------------------------------------------------------------------

namespace detail {

/// Sums t_0 + t_1 + ... where t_{n+1} = t_n * ratio(n) and the ratios are
/// eventually decreasing. Stops once the tail bound t_{n+1} / (1 - ratio(n+1))
/// is at most target and below one ulp of the partial sum, so tiny values keep
/// their relative accuracy.
template <typename Ratio>
SeriesResult ratio_series(double t0, Ratio&& ratio, double target, int max_terms, const char* name) {
  SeriesResult out;
  double term = t0;
  for (int n = 0; n < max_terms; ++n) {
    out.value += term;
    out.terms_used = n + 1;
    const double next = term * ratio(n);
    const double r_next = ratio(n + 1);
    if (r_next < 1) {
      out.tail_bound = std::abs(next) / (1 - r_next);
      if (out.tail_bound <= target &&
          out.tail_bound <= std::numeric_limits<double>::epsilon() * std::abs(out.value))
        return out;
    }
    term = next;
  }
  throw ConvergenceError(std::string(name) + ": series did not converge within max_series_terms");
}

}  // namespace detail

/// I_p(x) from its power series, p > -1, x >= 0.
inline SeriesResult bessel_I(double p, double x, const ToleranceConfig& cfg = {}) {
  if (!(p > -1))
    throw PreconditionError("bessel_I: requires p > -1");
  if (!(x >= 0))
    throw PreconditionError("bessel_I: requires x >= 0");
  if (x == 0) {
    if (p == 0)
      return {1, 1, 0};
    if (p > 0)
      return {0, 1, 0};
    throw PreconditionError("bessel_I: I_p(0) is unbounded for -1 < p < 0");
  }
  const double y = (x / 2) * (x / 2);
  const double t0 = std::exp(p * std::log(x / 2) - log_gamma(p + 1));
  return detail::ratio_series(
      t0, [&](int n) { return y / ((n + 1.0) * (p + n + 1.0)); }, cfg.abs_tol, cfg.max_series_terms,
      "bessel_I");
}

/// 𝓘_p(x) = 2^p Γ(p+1) x^{-p} I_p(x), summed from its own even series.
inline SeriesResult normalized_I_series(double p, double x, const ToleranceConfig& cfg = {}) {
  if (!(p > -1))
    throw PreconditionError("normalized_I: requires p > -1");
  const double y = (x / 2) * (x / 2);
  return detail::ratio_series(
      1.0, [&](int n) { return y / ((n + 1.0) * (p + n + 1.0)); }, cfg.abs_tol, cfg.max_series_terms,
      "normalized_I");
}

inline double normalized_I(double p, double x, const ToleranceConfig& cfg = {}) {
  return normalized_I_series(p, x, cfg).value;
}

/// K_p(x) = ∫_0^∞ exp(-x cosh t) cosh(p t) dt, truncated at T with the tail
/// bounded by exp(-x cosh T + |p| T) / (x sinh T - |p|).
inline SeriesResult bessel_K(double p, double x, const ToleranceConfig& cfg = {}) {
  if (!(x > 0) || !std::isfinite(x))
    throw PreconditionError("bessel_K: requires x > 0");
  p = std::abs(p);
  // K_p(x) decays like e^{-x}; keep the error budget relative to that.
  const double budget = cfg.abs_tol * std::min(1.0, std::exp(-x));

  auto tail = [&](double T) {
    const double slope = x * std::sinh(T) - p;
    if (slope <= 0)
      return HUGE_VAL;
    return std::exp(-x * std::cosh(T) + p * T) / slope;
  };
  double T = 0.5;
  while (tail(T) > budget / 2) {
    T += 0.25;
    if (T > 60)
      throw ConvergenceError("bessel_K: integral tail not boundable");
  }
  auto integrand = [&](double t) {
    // cosh(pt) e^{-x cosh t} without overflowing cosh(pt).
    return 0.5 * (std::exp(-x * std::cosh(t) + p * t) + std::exp(-x * std::cosh(t) - p * t));
  };
  const IntegralEstimate est = integrate_ref(integrand, 0.0, T, budget / 2, cfg);
  return {est.value, est.segments, tail(T) + est.err_est};
}

// ---------------------------------------------------------------------------
// q-digamma
// ---------------------------------------------------------------------------

namespace detail {

// ψ_q^{(n)}(x) = c_n + ln(s) Σ_{k>=1} (k ln s)^n s^{kx} / (1 - s^k), with
// s = q for q < 1 and s = 1/q for q > 1 (the reflected form).
inline SeriesResult q_digamma_impl(double q, double x, int order, const ToleranceConfig& cfg) {
  if (!(q > 0) || q == 1 || !std::isfinite(q))
    throw PreconditionError("q_digamma: requires q > 0 and q != 1");
  if (!(x > 0) || !std::isfinite(x))
    throw PreconditionError("q_digamma: requires x > 0");
  if (order < 0 || order > 3)
    throw PreconditionError("q_digamma: derivative order must be 0..3");

  const double s = q < 1 ? q : 1 / q;
  const double ls = std::log(s);
  const double r = std::pow(s, x);

  double constant = 0;
  if (order == 0)
    constant = q < 1 ? -std::log1p(-q) : -std::log(q - 1) + std::log(q) * (x - 0.5);
  else if (order == 1 && q > 1)
    constant = std::log(q);

  SeriesResult out;
  double sum = 0;
  double rk = 1;  // s^{kx}
  double sk = 1;  // s^k
  for (int k = 1; k <= cfg.max_series_terms; ++k) {
    rk *= r;
    sk *= s;
    sum += std::pow(k * ls, order) * rk / (1 - sk);
    out.terms_used = k;
    // Remaining terms: Σ_{j>k} |ls|^{n+1} j^n r^j / (1 - s^j), majorized by a
    // geometric series with ratio ((k+2)/(k+1))^n r.
    const double rho = std::pow((k + 2.0) / (k + 1.0), order) * r;
    if (rho < 1) {
      const double first = std::pow(std::abs(ls), order + 1) * std::pow(k + 1.0, order) * rk * r;
      out.tail_bound = first / ((1 - sk * s) * (1 - rho));
      if (out.tail_bound <= cfg.abs_tol) {
        out.value = constant + ls * sum;
        return out;
      }
    }
  }
  throw ConvergenceError("q_digamma: tail not below abs_tol within max_series_terms (q too close to 1?)");
}

}  // namespace detail

inline SeriesResult q_digamma(double q, double x, const ToleranceConfig& cfg = {}) {
  return detail::q_digamma_impl(q, x, 0, cfg);
}

/// order-th derivative in x, order in {1, 2, 3}.
inline SeriesResult q_digamma_deriv(double q, double x, int order, const ToleranceConfig& cfg = {}) {
  if (order < 1 || order > 3)
    throw PreconditionError("q_digamma_deriv: order must be 1, 2 or 3");
  return detail::q_digamma_impl(q, x, order, cfg);
}

// ---------------------------------------------------------------------------
// Inequality checks
// ---------------------------------------------------------------------------

inline constexpr double kDerivativeFormulaTol = 1e-6;

/// Slope bound for 𝓘_p, its cosh/sinh instance (p = -1/2), and the derivative formula
/// 𝓘_p'(x) = x 𝓘_{p+1}(x) / (2(p+1)) at the midpoint.
inline std::vector<BoundReport> bessel_prop6_checks(double p, double a, double b, const ToleranceConfig& cfg = {}) {
  if (!(a > 0))
    throw PreconditionError("prop6: requires 0 < a < b");
  const Interval iv(a, b);
  if (!(p > -1))
    throw PreconditionError("prop6: requires p > -1");
  const ExtendedInterval ext = extend(iv);
  const InputEcho echo = InputEcho{"", a, b, {}}.with("p", p);
  auto I = [&](double order, double x) { return normalized_I(order, x, cfg); };

  std::vector<BoundReport> out;
  const double lhs_i1 = std::abs((I(p, b) - I(p, a)) / (b - a));
  const double rhs_i1 =
      (ext.lo * I(p + 1, ext.lo) + ext.hi * I(p + 1, ext.hi) + (a + b) * I(p + 1, ext.mid)) / (8 * (p + 1));
  out.push_back(make_report("prop6.I1", lhs_i1, rhs_i1, echo, cfg));

  const double lhs_i11 = std::abs((std::cosh(b) - std::cosh(a)) / (b - a));
  const double rhs_i11 = (std::sinh(ext.lo) + std::sinh(ext.hi) + 2 * std::sinh(ext.mid)) / 4;
  out.push_back(make_report("prop6.I11", lhs_i11, rhs_i11, InputEcho{"", a, b, {}}, cfg));

  const double fd = diff_ref([&](double t) { return I(p, t); }, ext.mid, 1);
  const double formula = ext.mid * I(p + 1, ext.mid) / (2 * (p + 1));
  BoundReport mm = make_report("prop6.derivative_formula", std::abs(fd - formula) / std::abs(fd),
                               kDerivativeFormulaTol, echo, cfg);
  mm.details = {{"finite_difference", fd}, {"formula", formula}};
  out.push_back(std::move(mm));
  return out;
}

/// Slope bound for K_p(x)/x^p: |(a^p K_p(b) - b^p K_p(a)) / ((ab)^p (b-a))| <= F_p(a,b) / [(a+b)(3a-b)(3b-a)]^p.
inline BoundReport bessel_prop7_check(double p, double a, double b, const ToleranceConfig& cfg = {}) {
  if (!(a > 0))
    throw PreconditionError("prop7: requires 0 < a < b");
  const Interval iv(a, b);
  if (!(p > 1))
    throw PreconditionError("prop7: requires p > 1");
  if (!(3 * a - b > 0))
    throw PreconditionError("prop7: requires 3a - b > 0 (K_{p+1} needs a positive argument), got 3a - b = " +
                            std::to_string(3 * a - b));
  auto K = [&](double order, double x) { return bessel_K(order, x, cfg).value; };
  const double u = 3 * a - b;
  const double v = 3 * b - a;
  const double lhs = std::abs((std::pow(a, p) * K(p, b) - std::pow(b, p) * K(p, a)) / (std::pow(a * b, p) * (b - a)));
  const double F = std::pow(2.0, p + 1) * std::pow(u * v, p) * K(p + 1, (a + b) / 2) +
                   std::pow(2 * (a + b) * v, p) * K(p + 1, u / 2) +
                   std::pow(2 * (a + b) * u, p) * K(p + 1, v / 2);
  const double rhs = F / std::pow((a + b) * u * v, p);
  BoundReport r = make_report("prop7.II", lhs, rhs, InputEcho{"", a, b, {}}.with("p", p), cfg);
  r.details = {{"F_p", F}};
  return r;
}

inline std::vector<BoundReport> bessel_prop_checks(double p, double a, double b, const ToleranceConfig& cfg = {}) {
  std::vector<BoundReport> out = bessel_prop6_checks(p, a, b, cfg);
  out.push_back(bessel_prop7_check(p, a, b, cfg));
  return out;
}

/// The two ψ_q inequalities on [a, b] (slope vs three-point ψ_q' average, and
/// the ψ_q''' remainder); requires 3a > b so every argument of
/// ψ_q' and ψ_q''' is positive.
inline std::vector<BoundReport> qdigamma_prop_checks(double q, double a, double b, const ToleranceConfig& cfg = {}) {
  if (!(q > 0) || q == 1)
    throw PreconditionError("prop8/9: requires q > 0 and q != 1");
  if (!(a > 0))
    throw PreconditionError("prop8/9: requires 0 < a < b");
  const Interval iv(a, b);
  if (!(3 * a - b > 0))
    throw PreconditionError("prop8/9: requires 3a - b > 0, got 3a - b = " + std::to_string(3 * a - b));
  const ExtendedInterval ext = extend(iv);
  auto psi = [&](double x) { return q_digamma(q, x, cfg).value; };
  auto d1 = [&](double x) { return q_digamma_deriv(q, x, 1, cfg).value; };
  auto d3 = [&](double x) { return q_digamma_deriv(q, x, 3, cfg).value; };
  const InputEcho echo = InputEcho{"", a, b, {}}.with("qbase", q);

  const double slope = (psi(b) - psi(a)) / (b - a);
  const double avg = (d1(ext.lo) + d1(ext.hi) + 2 * d1(ext.mid)) / 4;
  std::vector<BoundReport> out;
  out.push_back(make_report("prop8", std::abs(slope), avg, echo, cfg));
  out.push_back(make_report("prop9", std::abs(slope - avg), (b - a) * (b - a) * (d3(ext.lo) + d3(ext.hi)) / 6, echo, cfg));
  return out;
}

}  // namespace hh
