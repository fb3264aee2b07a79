#pragma once

/// \file core.hpp
/// Intervals, the extended-interval construction, tolerance policy and the
/// report type shared by every inequality check.

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hh {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// A function (or one of its derivatives) was evaluated outside its domain.
class DomainError : public std::domain_error {
public:
  DomainError(std::string op, double point)
      : std::domain_error(describe(op, point)), op_(std::move(op)), point_(point) {}

  const std::string& op() const noexcept { return op_; }
  double point() const noexcept { return point_; }

private:
  static std::string describe(const std::string& op, double point) {
    std::ostringstream os;
    os.precision(17);
    os << "domain error: " << op << " undefined at x = " << point;
    return os.str();
  }

  std::string op_;
  double point_;
};

/// Caller-side contract violation (bad interval, exponent out of range, ...).
class PreconditionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A series or adaptive routine ran out of its term/refinement budget.
class ConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Tolerances
// ---------------------------------------------------------------------------

struct ToleranceConfig {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_series_terms = 500;
  int max_refine_depth = 40;

  void validate() const {
    if (!(abs_tol > 0) || !(rel_tol > 0) || max_series_terms <= 0 || max_refine_depth <= 0)
      throw PreconditionError("tolerance config: all fields must be positive");
  }
};

// ---------------------------------------------------------------------------
// Intervals
// ---------------------------------------------------------------------------

class Interval {
public:
  Interval(double a, double b) : a_(a), b_(b) {
    if (!std::isfinite(a) || !std::isfinite(b))
      throw PreconditionError("interval endpoints must be finite");
    if (!(a < b))
      throw PreconditionError("interval requires a < b");
  }

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double width() const noexcept { return b_ - a_; }
  double mid() const noexcept { return (a_ + b_) / 2; }

private:
  double a_;
  double b_;
};

/// [(3a-b)/2, (3b-a)/2] together with the midpoint (a+b)/2 of the base interval.
struct ExtendedInterval {
  double lo;
  double hi;
  double mid;

  double width() const noexcept { return hi - lo; }
};

inline ExtendedInterval extend(const Interval& iv) {
  const double a = iv.a();
  const double b = iv.b();
  return {(3 * a - b) / 2, (3 * b - a) / 2, (a + b) / 2};
}

/// Hölder conjugate p = q/(q-1). Undefined for q <= 1.
inline double conjugate_exponent(double q) {
  if (!(q > 1) || !std::isfinite(q))
    throw PreconditionError("conjugate undefined: exponent must satisfy q > 1");
  return q / (q - 1);
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

/// What produced a report: the function text, the interval and any named
/// scalar parameters (q, p, n, ...).
struct InputEcho {
  std::string fn;
  double a = std::numeric_limits<double>::quiet_NaN();
  double b = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::pair<std::string, double>> params;

  InputEcho with(std::string name, double value) const {
    InputEcho copy = *this;
    copy.params.emplace_back(std::move(name), value);
    return copy;
  }
};

/// One inequality instance lhs <= rhs.
struct BoundReport {
  double lhs = 0;
  double rhs = 0;
  double margin = 0;
  bool satisfied = false;
  // Set for inequalities known to be falsified by vertical shifts of f.
  bool fragile = false;
  std::string label;
  InputEcho inputs;
  // Auxiliary values worth auditing (e.g. the looser tail of a chain).
  std::vector<std::pair<std::string, double>> details;
};

inline BoundReport make_report(std::string label, double lhs, double rhs, InputEcho inputs,
                               const ToleranceConfig& tol = {}) {
  if (label.empty())
    throw PreconditionError("bound report needs a label");
  BoundReport r;
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.satisfied = r.margin >= -tol.abs_tol;
  r.label = std::move(label);
  r.inputs = std::move(inputs);
  return r;
}

/// A hypothesis of a theorem (convexity, domain) does not hold for the input.
class GuardFailure : public std::runtime_error {
public:
  explicit GuardFailure(BoundReport report)
      : std::runtime_error("guard failed: " + report.label), report_(std::move(report)) {}

  const BoundReport& report() const noexcept { return report_; }

private:
  BoundReport report_;
};

}  // namespace hh
