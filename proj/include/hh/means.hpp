#pragma once

/// \file means.hpp
/// Arithmetic, geometric, logarithmic and generalized logarithmic means of
/// positive reals, and the three mean inequalities obtained from the
/// extended Hermite-Hadamard bounds with f(x) = x^n, x^-2 and x^-1.

#include "hh/bounds.hpp"
#include "hh/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>

namespace hh {

struct Arithmetic {};
struct Geometric {};
struct Logarithmic {};
struct GeneralizedLog {
  int n;
};

using MeanKind = std::variant<Arithmetic, Geometric, Logarithmic, GeneralizedLog>;

namespace detail {

inline void check_positive_pair(double a, double b) {
  if (!(a > 0) || !(b > 0))
    throw PreconditionError("means: arguments must be positive");
  if (a == b)
    throw PreconditionError("means: requires a != b");
}

}  // namespace detail

inline double mean(const MeanKind& kind, double a, double b) {
  detail::check_positive_pair(a, b);
  struct Visitor {
    double a, b;
    double operator()(Arithmetic) const { return (a + b) / 2; }
    double operator()(Geometric) const { return std::sqrt(a * b); }
    double operator()(Logarithmic) const { return (b - a) / (std::log(b) - std::log(a)); }
    double operator()(GeneralizedLog g) const {
      if (g.n == 0 || g.n == -1)
        throw PreconditionError("generalized logarithmic mean: n must not be 0 or -1");
      const double n = g.n;
      return std::pow((std::pow(b, n + 1) - std::pow(a, n + 1)) / ((b - a) * (n + 1)), 1 / n);
    }
  };
  return std::visit(Visitor{a, b}, kind);
}

// ---------------------------------------------------------------------------
// Mean inequalities
// ---------------------------------------------------------------------------

/// x^n, integer n not in {-1, 0}.
struct PowerMeans {
  int n;
  double q = 1;
};
/// x^-2.
struct InverseSquareMeans {
  double q = 1;
};
/// x^-1.
struct ReciprocalMeans {
  double q = 1;
};

using MeansProposition = std::variant<PowerMeans, InverseSquareMeans, ReciprocalMeans>;

namespace detail {

inline double min_k1_k2(double q) { return q > 1 ? std::min(kK1, k2_derived(q)) : kK1; }

inline void require_positive_extension(double a, double b, const char* who) {
  if (!(3 * a - b > 0))
    throw PreconditionError(std::string(who) + ": extended interval reaches 0 (3a - b = " +
                            std::to_string(3 * a - b) + " must be > 0)");
}

inline double arith(double x, double y) { return (x + y) / 2; }

}  // namespace detail

/// Both displays of the chosen proposition: the first from the three-point
/// bound (fragile), the second from the first-derivative estimate with
/// min(K1, K2).
inline std::pair<BoundReport, BoundReport> means_proposition_check(const MeansProposition& prop, double a,
                                                                   double b, const ToleranceConfig& cfg = {}) {
  detail::check_positive_pair(a, b);
  if (!(a < b))
    throw PreconditionError("means propositions require 0 < a < b");
  const double lo = (3 * a - b) / 2;
  const double hi = (3 * b - a) / 2;
  const double A = mean(Arithmetic{}, a, b);
  const double w = b - a;

  struct Values {
    std::string name;
    double lhs1, rhs1, lhs2, rhs2, q;
    InputEcho echo;
  };
  const Values v = std::visit(
      [&](const auto& p) -> Values {
        using P = std::decay_t<decltype(p)>;
        if (!(p.q >= 1))
          throw PreconditionError("means propositions require q >= 1");
        const double q = p.q;
        const double k = detail::min_k1_k2(q);
        InputEcho echo{"", a, b, {{"q", q}}};
        if constexpr (std::is_same_v<P, PowerMeans>) {
          if (p.n == 0 || p.n == -1)
            throw PreconditionError("prop1: n must not be 0 or -1");
          if (p.n < 0)
            detail::require_positive_extension(a, b, "prop1");
          const double n = p.n;
          // L_n^n directly, without the 1/n root.
          const double Ln = (std::pow(b, n + 1) - std::pow(a, n + 1)) / ((b - a) * (n + 1));
          const double An = std::pow(A, n);
          echo.fn = "x^" + std::to_string(p.n);
          echo.params.emplace_back("n", n);
          return {"prop1", std::abs(2 * Ln - An),
                  detail::arith(std::pow(std::abs(hi), n), std::pow(std::abs(lo), n)), std::abs(An - Ln),
                  k * std::pow(2.0, 1 / q) * std::abs(n) * w *
                      std::pow(detail::arith(std::pow(std::abs(lo), (n - 1) * q), std::pow(std::abs(hi), (n - 1) * q)),
                               1 / q),
                  q, echo};
        } else if constexpr (std::is_same_v<P, InverseSquareMeans>) {
          detail::require_positive_extension(a, b, "prop2");
          const double G2 = a * b;
          echo.fn = "x^-2";
          // |f'| = 2|x|^-3, so the derivative factor is 2 * 2^{1/q}.
          return {"prop2", std::abs(2 / G2 - 1 / (A * A)), detail::arith(1 / (lo * lo), 1 / (hi * hi)),
                  std::abs(1 / G2 - 1 / (A * A)),
                  k * 2 * std::pow(2.0, 1 / q) * w *
                      std::pow(detail::arith(std::pow(std::abs(lo), -3 * q), std::pow(std::abs(hi), -3 * q)), 1 / q),
                  q, echo};
        } else {
          detail::require_positive_extension(a, b, "prop3");
          const double L = mean(Logarithmic{}, a, b);
          echo.fn = "x^-1";
          return {"prop3", std::abs(1 / A - 2 / L), detail::arith(1 / std::abs(lo), 1 / std::abs(hi)),
                  std::abs(1 / A - 1 / L),
                  k * std::pow(2.0, 1 / q) * w *
                      std::pow(detail::arith(std::pow(std::abs(lo), -2 * q), std::pow(std::abs(hi), -2 * q)), 1 / q),
                  q, echo};
        }
      },
      prop);

  BoundReport first = make_report(v.name + ".display1", v.lhs1, v.rhs1, v.echo, cfg);
  first.fragile = true;
  BoundReport second = make_report(v.name + ".display2", v.lhs2, v.rhs2, v.echo, cfg);
  return {std::move(first), std::move(second)};
}

}  // namespace hh
