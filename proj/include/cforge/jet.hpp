#pragma once

// Forward-mode jets. A Dual<T> carries a value and one directional derivative;
// nesting Dual<Dual<double>> gives a second-order jet (truncated Taylor algebra
// with two independent infinitesimals). Every field in the library is written
// generically over the scalar so that derivatives are exact up to rounding.

#include <cmath>
#include <concepts>
#include <type_traits>

namespace cforge {

template <class T>
struct Dual {
  T v{};
  T d{};

  constexpr Dual() = default;
  constexpr Dual(double value) : v(value), d(0.0) {}  // NOLINT(google-explicit-constructor)
  template <class U>
    requires(!std::is_same_v<U, double> && std::is_convertible_v<U, T>)
  constexpr Dual(const U& value) : v(value), d(0.0) {}  // NOLINT(google-explicit-constructor)
  constexpr Dual(const T& value, const T& deriv) : v(value), d(deriv) {}

  constexpr Dual& operator+=(const Dual& o) {
    v += o.v;
    d += o.d;
    return *this;
  }
  constexpr Dual& operator-=(const Dual& o) {
    v -= o.v;
    d -= o.d;
    return *this;
  }
  constexpr Dual& operator*=(const Dual& o) {
    d = d * o.v + v * o.d;
    v *= o.v;
    return *this;
  }
};

template <class T>
struct jet_depth : std::integral_constant<int, 0> {};
template <class T>
struct jet_depth<Dual<T>> : std::integral_constant<int, 1 + jet_depth<T>::value> {};
template <class T>
inline constexpr int jet_depth_v = jet_depth<T>::value;

using J0 = double;
using J1 = Dual<J0>;
using J2 = Dual<J1>;
using J3 = Dual<J2>;

/// Deepest jet the type-erased fields are instantiated for.
inline constexpr int kMaxJetDepth = 3;

template <class T>
constexpr Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) {
  return {a.v + b.v, a.d + b.d};
}
template <class T>
constexpr Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) {
  return {a.v - b.v, a.d - b.d};
}
template <class T>
constexpr Dual<T> operator-(const Dual<T>& a) {
  return {-a.v, -a.d};
}
template <class T>
constexpr Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
  return {a.v * b.v, a.d * b.v + a.v * b.d};
}
template <class T>
constexpr Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  const T inv = T(1.0) / b.v;
  return {a.v * inv, (a.d - a.v * inv * b.d) * inv};
}

template <class T>
constexpr Dual<T> operator+(const Dual<T>& a, double s) {
  return {a.v + s, a.d};
}
template <class T>
constexpr Dual<T> operator+(double s, const Dual<T>& a) {
  return {a.v + s, a.d};
}
template <class T>
constexpr Dual<T> operator-(const Dual<T>& a, double s) {
  return {a.v - s, a.d};
}
template <class T>
constexpr Dual<T> operator-(double s, const Dual<T>& a) {
  return {s - a.v, -a.d};
}
template <class T>
constexpr Dual<T> operator*(const Dual<T>& a, double s) {
  return {a.v * s, a.d * s};
}
template <class T>
constexpr Dual<T> operator*(double s, const Dual<T>& a) {
  return {a.v * s, a.d * s};
}
template <class T>
constexpr Dual<T> operator/(const Dual<T>& a, double s) {
  return {a.v / s, a.d / s};
}
template <class T>
constexpr Dual<T> operator/(double s, const Dual<T>& a) {
  return Dual<T>(s) / a;
}

template <class T>
Dual<T> sqrt(const Dual<T>& a) {
  using std::sqrt;
  const T root = sqrt(a.v);
  return {root, a.d / (2.0 * root)};
}

/// Innermost real value of a (possibly nested) jet.
inline constexpr double value_of(double x) { return x; }
template <class T>
constexpr double value_of(const Dual<T>& x) {
  return value_of(x.v);
}

}  // namespace cforge
