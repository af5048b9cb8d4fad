#pragma once

#include <cmath>

namespace fgeo {

/// Truncated second-order Taylor number: value, first and second derivative
/// with respect to one scalar argument. Arithmetic follows the product and
/// chain rules exactly, so composite expressions carry exact derivatives up
/// to rounding.
struct Jet2 {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;

  constexpr Jet2() = default;
  constexpr Jet2(double v) : value(v) {}  // NOLINT: constants promote implicitly
  constexpr Jet2(double v, double first, double second) : value(v), d1(first), d2(second) {}

  static constexpr Jet2 variable(double x) { return {x, 1.0, 0.0}; }
  static constexpr Jet2 constant(double x) { return {x, 0.0, 0.0}; }

  constexpr Jet2& operator+=(const Jet2& o) {
    value += o.value;
    d1 += o.d1;
    d2 += o.d2;
    return *this;
  }
  constexpr Jet2& operator-=(const Jet2& o) {
    value -= o.value;
    d1 -= o.d1;
    d2 -= o.d2;
    return *this;
  }
  constexpr Jet2& operator*=(const Jet2& o) {
    const Jet2 a = *this;
    value = a.value * o.value;
    d1 = a.d1 * o.value + a.value * o.d1;
    d2 = a.d2 * o.value + 2.0 * a.d1 * o.d1 + a.value * o.d2;
    return *this;
  }
  constexpr Jet2& operator/=(const Jet2& o);
};

// f(u) given f, f', f'' at u.value.
constexpr Jet2 compose(const Jet2& u, double f, double df, double d2f) {
  return {f, df * u.d1, d2f * u.d1 * u.d1 + df * u.d2};
}

constexpr Jet2 operator-(const Jet2& a) { return {-a.value, -a.d1, -a.d2}; }
constexpr Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
constexpr Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
constexpr Jet2 operator*(Jet2 a, const Jet2& b) { return a *= b; }

constexpr Jet2 reciprocal(const Jet2& a) {
  const double inv = 1.0 / a.value;
  return compose(a, inv, -inv * inv, 2.0 * inv * inv * inv);
}

constexpr Jet2& Jet2::operator/=(const Jet2& o) { return *this *= reciprocal(o); }
constexpr Jet2 operator/(Jet2 a, const Jet2& b) { return a /= b; }

inline Jet2 sqrt(const Jet2& a) {
  const double s = std::sqrt(a.value);
  return compose(a, s, 0.5 / s, -0.25 / (s * a.value));
}

inline Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.value);
  return compose(a, e, e, e);
}

inline Jet2 log(const Jet2& a) {
  const double inv = 1.0 / a.value;
  return compose(a, std::log(a.value), inv, -inv * inv);
}

constexpr Jet2 pow(const Jet2& a, int n) {
  if (n == 0) return Jet2(1.0);
  if (n < 0) return reciprocal(pow(a, -n));
  Jet2 r = a;
  for (int i = 1; i < n; ++i) r *= a;
  return r;
}

// Uniform access for code templated on double / Jet2.
constexpr double value_of(double x) { return x; }
constexpr double value_of(const Jet2& x) { return x.value; }

}  // namespace fgeo
