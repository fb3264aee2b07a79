#pragma once

/// \file expr.hpp
/// A small expression language for functions of one variable x.
///
/// Grammar (lowest to highest precedence):
///
///     expr    := term (('+' | '-') term)*
///     term    := unary (('*' | '/') unary)*
///     unary   := '-' unary | power
///     power   := primary ('^' unary)?
///     primary := number | 'x' | name '(' expr ')' | '(' expr ')'
///
/// with name one of exp, log, sqrt, sinh, cosh, abs. The exponent of '^' must
/// not depend on x. Implicit multiplication ("2x") is rejected.

#include "hh/core.hpp"
#include "hh/jet.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

namespace hh {

class ParseError : public std::invalid_argument {
public:
  ParseError(const std::string& what, std::size_t offset)
      : std::invalid_argument(what + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

enum class Op { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Exp, Log, Sqrt, Sinh, Cosh, Abs };

struct Node {
  Op op;
  double value = 0;  // literal for Const, exponent for Pow
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

using NodePtr = std::shared_ptr<const Node>;

/// Immutable parsed function. Copies share the tree.
class Expr {
public:
  Expr(NodePtr root, std::string text) : root_(std::move(root)), text_(std::move(text)) {}

  const Node& root() const noexcept { return *root_; }
  NodePtr root_ptr() const noexcept { return root_; }
  const std::string& text() const noexcept { return text_; }

private:
  NodePtr root_;
  std::string text_;
};

namespace detail {

inline NodePtr make_node(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr, double value = 0) {
  return std::make_shared<const Node>(Node{op, value, std::move(lhs), std::move(rhs)});
}

inline bool depends_on_x(const Node& n) {
  if (n.op == Op::Var)
    return true;
  return (n.lhs && depends_on_x(*n.lhs)) || (n.rhs && depends_on_x(*n.rhs));
}

inline bool is_integer(double r) { return std::abs(r) < 9.0e15 && r == std::nearbyint(r); }

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    NodePtr root = expr();
    skip_ws();
    if (pos_ != text_.size())
      throw ParseError(std::string("syntax error: unexpected '") + text_[pos_] + "'", pos_);
    return root;
  }

private:
  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t'))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = make_node(Op::Add, lhs, term());
      else if (accept('-'))
        lhs = make_node(Op::Sub, lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*'))
        lhs = make_node(Op::Mul, lhs, unary());
      else if (accept('/'))
        lhs = make_node(Op::Div, lhs, unary());
      else
        return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-'))
      return make_node(Op::Neg, unary());
    return power();
  }

  NodePtr power();
  NodePtr primary();

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace detail {

inline double value_of(double v) { return v; }
inline double value_of(const Jet3<double>& v) { return v.v0; }

inline double ipow(double u, long long n) {
  if (n < 0)
    return 1.0 / ipow(u, -n);
  double result = 1.0;
  while (n > 0) {
    if (n & 1)
      result *= u;
    n >>= 1;
    if (n > 0)
      u *= u;
  }
  return result;
}

template <typename T>
T eval_node(const Node& n, const T& x, double at) {
  constexpr bool jet = !std::is_same_v<T, double>;
  switch (n.op) {
    case Op::Const: return T(n.value);
    case Op::Var: return x;
    case Op::Add: return eval_node(*n.lhs, x, at) + eval_node(*n.rhs, x, at);
    case Op::Sub: return eval_node(*n.lhs, x, at) - eval_node(*n.rhs, x, at);
    case Op::Mul: return eval_node(*n.lhs, x, at) * eval_node(*n.rhs, x, at);
    case Op::Neg: return -eval_node(*n.lhs, x, at);
    case Op::Div: {
      T num = eval_node(*n.lhs, x, at);
      T den = eval_node(*n.rhs, x, at);
      if (value_of(den) == 0)
        throw DomainError("'/' (division by zero)", at);
      return num / den;
    }
    case Op::Pow: {
      T base = eval_node(*n.lhs, x, at);
      const double r = n.value;
      const double bv = value_of(base);
      if (is_integer(r)) {
        if (r < 0 && bv == 0)
          throw DomainError("'^' (zero to a negative power)", at);
        return ipow(base, static_cast<long long>(r));
      }
      if (!(bv > 0))
        throw DomainError("'^' (non-integer power of a non-positive base)", at);
      if constexpr (jet)
        return pow(base, r);
      else
        return std::pow(base, r);
    }
    case Op::Exp: {
      using std::exp;
      return exp(eval_node(*n.lhs, x, at));
    }
    case Op::Log: {
      using std::log;
      T u = eval_node(*n.lhs, x, at);
      if (!(value_of(u) > 0))
        throw DomainError("log (non-positive argument)", at);
      return log(u);
    }
    case Op::Sqrt: {
      using std::sqrt;
      T u = eval_node(*n.lhs, x, at);
      const double uv = value_of(u);
      if (uv < 0 || (jet && uv == 0))
        throw DomainError(jet ? "sqrt (non-positive argument)" : "sqrt (negative argument)", at);
      return sqrt(u);
    }
    case Op::Sinh: {
      using std::sinh;
      return sinh(eval_node(*n.lhs, x, at));
    }
    case Op::Cosh: {
      using std::cosh;
      return cosh(eval_node(*n.lhs, x, at));
    }
    case Op::Abs: {
      using std::abs;
      T u = eval_node(*n.lhs, x, at);
      if (jet && value_of(u) == 0)
        throw DomainError("abs (not differentiable at zero)", at);
      return abs(u);
    }
  }
  throw std::logic_error("unhandled expression node");
}

}  // namespace detail

inline Expr parse(std::string_view text) {
  if (text.find_first_not_of(" \t") == std::string_view::npos)
    throw ParseError("syntax error: empty expression", 0);
  detail::Parser parser(text);
  return Expr(parser.parse(), std::string(text));
}

/// f(x). Throws DomainError naming the operator and x.
inline double eval(const Expr& e, double x) {
  const double v = detail::eval_node<double>(e.root(), x, x);
  if (!std::isfinite(v))
    throw DomainError("non-finite value", x);
  return v;
}

/// (f, f', f'', f''') at x.
inline Jet3<double> eval_jet(const Expr& e, double x) {
  const Jet3<double> j = detail::eval_node(e.root(), Jet3<double>::variable(x), x);
  if (!std::isfinite(j.v0) || !std::isfinite(j.v1) || !std::isfinite(j.v2) || !std::isfinite(j.v3))
    throw DomainError("non-finite derivative", x);
  return j;
}

inline NodePtr detail::Parser::power() {
  NodePtr base = primary();
  skip_ws();
  if (!accept('^'))
    return base;
  skip_ws();
  const std::size_t at = pos_;
  NodePtr exponent = unary();
  if (depends_on_x(*exponent))
    throw ParseError("syntax error: exponent must not depend on x", at);
  const double r = eval_node<double>(*exponent, 0.0, 0.0);
  if (!std::isfinite(r))
    throw ParseError("syntax error: exponent is not finite", at);
  return make_node(Op::Pow, base, exponent, r);
}

inline NodePtr detail::Parser::primary() {
  skip_ws();
  if (pos_ >= text_.size())
    throw ParseError("syntax error: unexpected end of input", pos_);
  const char c = text_[pos_];
  const std::size_t start = pos_;

  if (c == '(') {
    ++pos_;
    NodePtr inner = expr();
    if (!accept(')'))
      throw ParseError("syntax error: expected ')'", pos_);
    return inner;
  }

  if ((c >= '0' && c <= '9') || c == '.') {
    double v = 0;
    auto [end, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
    if (ec != std::errc())
      throw ParseError("syntax error: malformed number", start);
    pos_ = static_cast<std::size_t>(end - text_.data());
    return make_node(Op::Const, nullptr, nullptr, v);
  }

  if (std::isalpha(static_cast<unsigned char>(c))) {
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "x")
      return make_node(Op::Var);
    static constexpr std::array<std::pair<std::string_view, Op>, 6> functions{{
        {"exp", Op::Exp}, {"log", Op::Log}, {"sqrt", Op::Sqrt},
        {"sinh", Op::Sinh}, {"cosh", Op::Cosh}, {"abs", Op::Abs},
    }};
    const auto* fn = std::find_if(functions.begin(), functions.end(),
                                  [&](const auto& entry) { return entry.first == name; });
    if (fn == functions.end())
      throw ParseError("unknown identifier '" + std::string(name) + "'", start);
    if (!accept('('))
      throw ParseError("syntax error: expected '(' after " + std::string(name), pos_);
    NodePtr arg = expr();
    if (!accept(')'))
      throw ParseError("syntax error: expected ')'", pos_);
    return make_node(fn->second, arg);
  }

  throw ParseError(std::string("syntax error: unexpected '") + c + "'", start);
}

// ---------------------------------------------------------------------------
// Domain screening over an interval
// ---------------------------------------------------------------------------

namespace detail {

struct Range {
  double lo;
  double hi;
  bool contains(double v) const { return lo <= v && v <= hi; }
};

inline Range hull(std::initializer_list<double> vs) {
  auto [mn, mx] = std::minmax_element(vs.begin(), vs.end());
  return {*mn, *mx};
}

inline Range range_ipow(Range r, long long n) {
  if (n == 0)
    return {1, 1};
  if (n < 0) {
    Range p = range_ipow(r, -n);
    if (p.contains(0))
      return {-HUGE_VAL, HUGE_VAL};
    return hull({1 / p.lo, 1 / p.hi});
  }
  const double a = ipow(r.lo, n);
  const double b = ipow(r.hi, n);
  if (n % 2 == 0 && r.contains(0))
    return {0, std::max(a, b)};
  return hull({a, b});
}

enum class Need { NonZero, Positive, NonNegative };

class DomainScreen {
public:
  DomainScreen(double lo, double hi, bool derivatives) : lo_(lo), hi_(hi), derivatives_(derivatives) {}

  Range range(const Node& n) {
    switch (n.op) {
      case Op::Const: return {n.value, n.value};
      case Op::Var: return {lo_, hi_};
      case Op::Add: {
        Range a = range(*n.lhs), b = range(*n.rhs);
        return {a.lo + b.lo, a.hi + b.hi};
      }
      case Op::Sub: {
        Range a = range(*n.lhs), b = range(*n.rhs);
        return {a.lo - b.hi, a.hi - b.lo};
      }
      case Op::Neg: {
        Range a = range(*n.lhs);
        return {-a.hi, -a.lo};
      }
      case Op::Mul: {
        Range a = range(*n.lhs), b = range(*n.rhs);
        return hull({a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi});
      }
      case Op::Div: {
        Range a = range(*n.lhs), b = range(*n.rhs);
        if (b.contains(0)) {
          localize(*n.rhs, Need::NonZero, "'/' (division by zero)");
          if (b.lo == 0 && b.hi > 0)
            b.lo = std::nextafter(0.0, 1.0);
          else if (b.hi == 0 && b.lo < 0)
            b.hi = -std::nextafter(0.0, 1.0);
          else
            return {-HUGE_VAL, HUGE_VAL};
        }
        return hull({a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi});
      }
      case Op::Pow: {
        Range a = range(*n.lhs);
        const double r = n.value;
        if (is_integer(r)) {
          if (r < 0 && a.contains(0))
            localize(*n.lhs, Need::NonZero, "'^' (zero to a negative power)");
          return range_ipow(a, static_cast<long long>(r));
        }
        if (a.lo <= 0) {
          localize(*n.lhs, Need::Positive, "'^' (non-integer power of a non-positive base)");
          a.lo = std::max(a.lo, std::nextafter(0.0, 1.0));
        }
        return hull({std::pow(a.lo, r), std::pow(a.hi, r)});
      }
      case Op::Exp: {
        Range a = range(*n.lhs);
        return {std::exp(a.lo), std::exp(a.hi)};
      }
      case Op::Log: {
        Range a = range(*n.lhs);
        if (a.lo <= 0) {
          localize(*n.lhs, Need::Positive, "log (non-positive argument)");
          a.lo = std::max(a.lo, std::nextafter(0.0, 1.0));
        }
        return {std::log(a.lo), std::log(a.hi)};
      }
      case Op::Sqrt: {
        Range a = range(*n.lhs);
        if (a.lo < 0 || (derivatives_ && a.lo <= 0)) {
          localize(*n.lhs, derivatives_ ? Need::Positive : Need::NonNegative,
                   derivatives_ ? "sqrt (non-positive argument)" : "sqrt (negative argument)");
          a.lo = std::max(a.lo, 0.0);
        }
        return {std::sqrt(a.lo), std::sqrt(a.hi)};
      }
      case Op::Sinh: {
        Range a = range(*n.lhs);
        return {std::sinh(a.lo), std::sinh(a.hi)};
      }
      case Op::Cosh: {
        Range a = range(*n.lhs);
        if (a.contains(0))
          return {1, std::max(std::cosh(a.lo), std::cosh(a.hi))};
        return hull({std::cosh(a.lo), std::cosh(a.hi)});
      }
      case Op::Abs: {
        Range a = range(*n.lhs);
        if (a.contains(0)) {
          if (derivatives_)
            localize(*n.lhs, Need::NonZero, "abs (not differentiable at zero)");
          return {0, std::max(-a.lo, a.hi)};
        }
        return hull({std::abs(a.lo), std::abs(a.hi)});
      }
    }
    throw std::logic_error("unhandled expression node");
  }

private:
  static bool violates(double g, Need need) {
    switch (need) {
      case Need::NonZero: return g == 0;
      case Need::Positive: return !(g > 0);
      case Need::NonNegative: return g < 0;
    }
    return false;
  }

  // The interval extension says the argument g of some operator may leave
  // its admissible set. Search for a concrete point; overestimates that
  // cannot be realised are let through.
  void localize(const Node& g, Need need, const char* what) {
    constexpr int kGrid = 4096;
    const double h = (hi_ - lo_) / kGrid;
    auto at = [&](int k) { return k == kGrid ? hi_ : lo_ + k * h; };
    auto value = [&](double x) { return eval_node<double>(g, x, x); };

    double prev_x = at(0);
    double prev_g = value(prev_x);
    if (violates(prev_g, need))
      throw DomainError(what, prev_x);
    int best = 0;
    double best_abs = std::abs(prev_g);
    double scale = best_abs;
    for (int k = 1; k <= kGrid; ++k) {
      const double x = at(k);
      const double gx = value(x);
      scale = std::max(scale, std::abs(gx));
      if (std::abs(gx) < best_abs) {
        best_abs = std::abs(gx);
        best = k;
      }
      if (violates(gx, need)) {
        // Bisect to the first inadmissible point after prev_x.
        double l = prev_x, r = x;
        for (int it = 0; it < 200; ++it) {
          const double m = l + (r - l) / 2;
          if (m <= l || m >= r)
            break;
          (violates(value(m), need) ? r : l) = m;
        }
        throw DomainError(what, r);
      }
      if (need == Need::NonZero && (prev_g > 0) != (gx > 0)) {
        // Sign change across a zero (or a pole) of g.
        double l = prev_x, r = x;
        const bool left_positive = prev_g > 0;
        for (int it = 0; it < 200; ++it) {
          const double m = l + (r - l) / 2;
          if (m <= l || m >= r)
            break;
          const double gm = value(m);
          if (gm == 0)
            throw DomainError(what, m);
          ((gm > 0) == left_positive ? l : r) = m;
        }
        throw DomainError(what, l + (r - l) / 2);
      }
      prev_x = x;
      prev_g = gx;
    }
    if (need == Need::NonNegative)
      return;
    // Touching zero without a sign change (e.g. a double root).
    double l = at(std::max(best - 1, 0)), r = at(std::min(best + 1, kGrid));
    const double phi = (std::sqrt(5.0) - 1) / 2;
    for (int it = 0; it < 200 && r - l > 1e-15 * std::max(1.0, std::abs(l)); ++it) {
      const double m1 = r - phi * (r - l);
      const double m2 = l + phi * (r - l);
      if (std::abs(value(m1)) < std::abs(value(m2)))
        r = m2;
      else
        l = m1;
    }
    const double xm = l + (r - l) / 2;
    if (std::abs(value(xm)) <= 1e-12 * std::max(1.0, scale))
      throw DomainError(what, xm);
  }

  double lo_;
  double hi_;
  bool derivatives_;
};

}  // namespace detail

/// Throws DomainError if f (and, when requested, its derivatives) cannot be
/// evaluated somewhere on [lo, hi], naming the operator and a failing point.
inline void check_domain(const Expr& e, double lo, double hi, bool derivatives = true) {
  detail::DomainScreen screen(lo, hi, derivatives);
  screen.range(e.root());
}

}  // namespace hh
