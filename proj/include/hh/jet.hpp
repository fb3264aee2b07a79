#pragma once

/// \file jet.hpp
/// Third-order forward-mode derivative jets. Components hold the value and
/// the first three derivatives (not Taylor coefficients).

#include <cmath>
#include <ostream>

namespace hh {

template <typename T = double>
struct Jet3 {
  T v0{};
  T v1{};
  T v2{};
  T v3{};

  constexpr Jet3() = default;
  constexpr Jet3(T value) : v0(value) {}  // NOLINT: constants promote implicitly
  constexpr Jet3(T a0, T a1, T a2, T a3) : v0(a0), v1(a1), v2(a2), v3(a3) {}

  static constexpr Jet3 variable(T x) { return {x, T(1), T(0), T(0)}; }

  constexpr Jet3& operator+=(const Jet3& o) {
    v0 += o.v0; v1 += o.v1; v2 += o.v2; v3 += o.v3;
    return *this;
  }
  constexpr Jet3& operator-=(const Jet3& o) {
    v0 -= o.v0; v1 -= o.v1; v2 -= o.v2; v3 -= o.v3;
    return *this;
  }
  constexpr Jet3& operator*=(const Jet3& o) { return *this = *this * o; }

  friend constexpr Jet3 operator-(const Jet3& a) { return {-a.v0, -a.v1, -a.v2, -a.v3}; }
  friend constexpr Jet3 operator+(Jet3 a, const Jet3& b) { return a += b; }
  friend constexpr Jet3 operator-(Jet3 a, const Jet3& b) { return a -= b; }

  // Leibniz rule truncated at third order.
  friend constexpr Jet3 operator*(const Jet3& f, const Jet3& g) {
    return {f.v0 * g.v0,
            f.v1 * g.v0 + f.v0 * g.v1,
            f.v2 * g.v0 + 2 * f.v1 * g.v1 + f.v0 * g.v2,
            f.v3 * g.v0 + 3 * f.v2 * g.v1 + 3 * f.v1 * g.v2 + f.v0 * g.v3};
  }

  friend constexpr Jet3 operator*(T c, const Jet3& f) { return {c * f.v0, c * f.v1, c * f.v2, c * f.v3}; }
  friend constexpr Jet3 operator*(const Jet3& f, T c) { return c * f; }

  friend std::ostream& operator<<(std::ostream& os, const Jet3& j) {
    return os << '(' << j.v0 << ", " << j.v1 << ", " << j.v2 << ", " << j.v3 << ')';
  }
};

/// Chain rule: h = phi(u) where d0..d3 are phi and its derivatives at u.v0.
template <typename T>
constexpr Jet3<T> compose(const Jet3<T>& u, T d0, T d1, T d2, T d3) {
  const T u1 = u.v1;
  return {d0,
          d1 * u1,
          d2 * u1 * u1 + d1 * u.v2,
          d3 * u1 * u1 * u1 + 3 * d2 * u1 * u.v2 + d1 * u.v3};
}

// Elementary functions. Domain checks live in the expression evaluator; these
// assume the argument is admissible.

template <typename T>
Jet3<T> reciprocal(const Jet3<T>& u) {
  const T r = T(1) / u.v0;
  const T r2 = r * r;
  return compose(u, r, -r2, 2 * r2 * r, -6 * r2 * r2);
}

template <typename T>
Jet3<T> operator/(const Jet3<T>& f, const Jet3<T>& g) {
  return f * reciprocal(g);
}

template <typename T>
Jet3<T> exp(const Jet3<T>& u) {
  const T e = std::exp(u.v0);
  return compose(u, e, e, e, e);
}

template <typename T>
Jet3<T> log(const Jet3<T>& u) {
  const T r = T(1) / u.v0;
  return compose(u, std::log(u.v0), r, -r * r, 2 * r * r * r);
}

template <typename T>
Jet3<T> sqrt(const Jet3<T>& u) {
  const T s = std::sqrt(u.v0);
  const T r = T(1) / u.v0;
  return compose(u, s, s * r / 2, -s * r * r / 4, 3 * s * r * r * r / 8);
}

template <typename T>
Jet3<T> sinh(const Jet3<T>& u) {
  const T s = std::sinh(u.v0);
  const T c = std::cosh(u.v0);
  return compose(u, s, c, s, c);
}

template <typename T>
Jet3<T> cosh(const Jet3<T>& u) {
  const T s = std::sinh(u.v0);
  const T c = std::cosh(u.v0);
  return compose(u, c, s, c, s);
}

/// |u| away from zero: a sign flip of the whole jet.
template <typename T>
Jet3<T> abs(const Jet3<T>& u) {
  return u.v0 < 0 ? -u : u;
}

/// u^n by repeated squaring; negative n goes through the reciprocal.
template <typename T>
Jet3<T> ipow(Jet3<T> u, long long n) {
  if (n < 0)
    return reciprocal(ipow(u, -n));
  Jet3<T> result(T(1));
  while (n > 0) {
    if (n & 1)
      result = result * u;
    n >>= 1;
    if (n > 0)
      u = u * u;
  }
  return result;
}

/// u^r for real r, u > 0.
template <typename T>
Jet3<T> pow(const Jet3<T>& u, T r) {
  const T x = u.v0;
  const T p0 = std::pow(x, r);
  const T p1 = r * p0 / x;
  const T p2 = (r - 1) * p1 / x;
  const T p3 = (r - 2) * p2 / x;
  return compose(u, p0, p1, p2, p3);
}

}  // namespace hh
