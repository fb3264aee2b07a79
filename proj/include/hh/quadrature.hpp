#pragma once

/// \file quadrature.hpp
/// Composite trapezoid and midpoint rules, the midpoint error certificate
/// min(K1, K2) Σ Δx_i^2 (|f'(lo_i)|^q + |f'(hi_i)|^q)^{1/q} over the
/// per-panel extended intervals, and an adaptive integrator that bisects
/// until the certificate meets a target.

#include "hh/bounds.hpp"
#include "hh/core.hpp"
#include "hh/expr.hpp"
#include "hh/guards.hpp"
#include "hh/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hh {

class Partition {
public:
  explicit Partition(std::vector<double> points) : points_(std::move(points)) {
    if (points_.size() < 2)
      throw PreconditionError("partition needs at least two points");
    for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
      if (!std::isfinite(points_[i]) || !(points_[i] < points_[i + 1]))
        throw PreconditionError("partition points must be finite and strictly increasing");
    }
  }

  static Partition uniform(const Interval& iv, std::size_t panels) {
    if (panels == 0)
      throw PreconditionError("partition needs at least one panel");
    std::vector<double> pts(panels + 1);
    const double h = iv.width() / static_cast<double>(panels);
    for (std::size_t i = 0; i <= panels; ++i)
      pts[i] = iv.a() + static_cast<double>(i) * h;
    pts.back() = iv.b();
    return Partition(std::move(pts));
  }

  const std::vector<double>& points() const noexcept { return points_; }
  std::size_t panels() const noexcept { return points_.size() - 1; }
  double a() const noexcept { return points_.front(); }
  double b() const noexcept { return points_.back(); }
  double left(std::size_t i) const { return points_[i]; }
  double right(std::size_t i) const { return points_[i + 1]; }

  /// Extended interval of panel i: [(3x_i - x_{i+1})/2, (3x_{i+1} - x_i)/2].
  ExtendedInterval extended(std::size_t i) const { return extend(Interval(left(i), right(i))); }

private:
  std::vector<double> points_;
};

struct QuadratureResult {
  double t1 = 0;
  double t2 = 0;
  double e2_bound = 0;
  Partition partition{{0.0, 1.0}};
  std::optional<double> oracle_value;
  bool certified = false;
};

inline double trapezoid_T1(const Expr& f, const Partition& P) {
  double sum = 0;
  for (std::size_t i = 0; i < P.panels(); ++i)
    sum += (eval(f, P.left(i)) + eval(f, P.right(i))) / 2 * (P.right(i) - P.left(i));
  return sum;
}

inline double midpoint_T2(const Expr& f, const Partition& P) {
  double sum = 0;
  for (std::size_t i = 0; i < P.panels(); ++i)
    sum += eval(f, (P.left(i) + P.right(i)) / 2) * (P.right(i) - P.left(i));
  return sum;
}

namespace detail {

/// Runs fn(i) for each panel, attaching the panel index to any failure.
template <typename Fn>
void for_each_panel_guarded(const Partition& P, Fn&& fn) {
  for (std::size_t i = 0; i < P.panels(); ++i) {
    try {
      fn(i);
    } catch (const GuardFailure& g) {
      BoundReport r = g.report();
      r.label += " (subinterval " + std::to_string(i) + ")";
      throw GuardFailure(std::move(r));
    } catch (const DomainError& e) {
      throw DomainError("subinterval " + std::to_string(i) + ": " + e.op(), e.point());
    }
  }
}

inline void guard_midpoint_certificate(const Expr& f, const Partition& P, double q, const ToleranceConfig& cfg) {
  for_each_panel_guarded(P, [&](std::size_t i) {
    const ExtendedInterval ext = P.extended(i);
    guard_derivative_power_convex(f, 1, q, ext.lo, ext.hi, cfg);
  });
}

inline double midpoint_certificate(const Expr& f, const Partition& P, double q) {
  const double k = q > 1 ? std::min(kK1, k2_derived(q)) : kK1;
  double sum = 0;
  for (std::size_t i = 0; i < P.panels(); ++i) {
    const ExtendedInterval ext = P.extended(i);
    const double h = P.right(i) - P.left(i);
    const double dlo = std::pow(std::abs(eval_jet(f, ext.lo).v1), q);
    const double dhi = std::pow(std::abs(eval_jet(f, ext.hi).v1), q);
    sum += h * h * std::pow(dlo + dhi, 1 / q);
  }
  return k * sum;
}

}  // namespace detail

/// Certified bound on |∫f - T2| for q >= 1 (K2 only enters for q > 1).
inline double midpoint_error_bound(const Expr& f, const Partition& P, double q, const ToleranceConfig& cfg = {}) {
  detail::check_q(q);
  detail::guard_midpoint_certificate(f, P, q, cfg);
  return detail::midpoint_certificate(f, P, q);
}

/// |2∫f - T2| <= Σ Δx_i |f(lo_i) + f(hi_i)| / 2 (<= Σ Δx_i max(|f(lo_i)|, |f(hi_i)|)).
/// The second sum is recorded in details as "max_form".
inline BoundReport prop4_check(const Expr& f, const Partition& P, const ToleranceConfig& cfg = {}) {
  detail::for_each_panel_guarded(P, [&](std::size_t i) {
    const ExtendedInterval ext = P.extended(i);
    detail::guard_convex(f, ext.lo, ext.hi, cfg);
  });
  const double integral =
      integrate_ref([&](double x) { return eval(f, x); }, P.a(), P.b(), kOracleTol, cfg).value;
  double middle = 0, max_form = 0;
  for (std::size_t i = 0; i < P.panels(); ++i) {
    const ExtendedInterval ext = P.extended(i);
    const double h = P.right(i) - P.left(i);
    const double flo = eval(f, ext.lo), fhi = eval(f, ext.hi);
    middle += h * std::abs(flo + fhi) / 2;
    max_form += h * std::max(std::abs(flo), std::abs(fhi));
  }
  InputEcho echo{f.text(), P.a(), P.b(), {{"panels", static_cast<double>(P.panels())}}};
  BoundReport r = make_report("prop4", std::abs(2 * integral - midpoint_T2(f, P)), middle, echo, cfg);
  r.fragile = true;
  r.details = {{"max_form", max_form}};
  return r;
}

inline constexpr int kMaxGuardLevels = 10;
inline constexpr std::size_t kMaxPanels = std::size_t{1} << 20;

/// Uniform bisection until the midpoint certificate is at most target.
///
/// Panels whose extended interval violates a hypothesis are refined first
/// (up to kMaxGuardLevels bisections). Once every panel passes, finer
/// panels need no recheck: a child's extended interval lies inside its
/// parent's. If the depth or panel budget runs out first the best result
/// is returned with certified = false.
inline QuadratureResult adaptive_midpoint(const Expr& f, const Interval& iv, double target, double q,
                                          const ToleranceConfig& cfg = {}) {
  if (!(target > 0))
    throw PreconditionError("adaptive_midpoint: target must be positive");
  detail::check_q(q);
  check_domain(f, iv.a(), iv.b(), true);

  std::size_t panels = 1;
  int level = 0;
  for (;;) {
    try {
      detail::guard_midpoint_certificate(f, Partition::uniform(iv, panels), q, cfg);
      break;
    } catch (const GuardFailure&) {
      if (level >= std::min(kMaxGuardLevels, cfg.max_refine_depth))
        throw;
    } catch (const DomainError&) {
      if (level >= std::min(kMaxGuardLevels, cfg.max_refine_depth))
        throw;
    }
    panels *= 2;
    ++level;
  }

  Partition P = Partition::uniform(iv, panels);
  double bound = detail::midpoint_certificate(f, P, q);
  while (bound > target && level < cfg.max_refine_depth && panels * 2 <= kMaxPanels) {
    panels *= 2;
    ++level;
    P = Partition::uniform(iv, panels);
    bound = detail::midpoint_certificate(f, P, q);
  }

  QuadratureResult out;
  out.t1 = trapezoid_T1(f, P);
  out.t2 = midpoint_T2(f, P);
  out.e2_bound = bound;
  out.certified = bound <= target;
  out.oracle_value = integrate_ref(f, iv, kOracleTol, cfg).value;
  out.partition = std::move(P);
  return out;
}

}  // namespace hh
