#pragma once

// Ambient vectors in R^7, generic over the jet scalar.

#include <algorithm>
#include <array>
#include <cmath>
#include <type_traits>

#include <Eigen/Core>

#include "cforge/jet.hpp"

namespace cforge {

inline constexpr int kAmbientDim = 7;

template <class T>
struct Vec7 {
  using value_type = T;
  std::array<T, kAmbientDim> c{};

  constexpr T& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
  constexpr const T& operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

  static constexpr Vec7 zero() {
    Vec7 out;
    for (auto& e : out.c) e = T(0.0);
    return out;
  }
  /// Standard basis vector e_{i+1} (zero-based index).
  static constexpr Vec7 unit(int i) {
    Vec7 out = zero();
    out[i] = T(1.0);
    return out;
  }

  Vec7& operator+=(const Vec7& o) {
    for (int i = 0; i < kAmbientDim; ++i) (*this)[i] += o[i];
    return *this;
  }
  Vec7& operator-=(const Vec7& o) {
    for (int i = 0; i < kAmbientDim; ++i) (*this)[i] -= o[i];
    return *this;
  }
};

using Vec = Vec7<double>;
using Mat7 = Eigen::Matrix<double, 7, 7>;
using EVec7 = Eigen::Matrix<double, 7, 1>;

template <class T>
using scalar_of = typename std::decay_t<T>::value_type;

template <class T>
Vec7<T> operator+(Vec7<T> a, const Vec7<T>& b) {
  a += b;
  return a;
}
template <class T>
Vec7<T> operator-(Vec7<T> a, const Vec7<T>& b) {
  a -= b;
  return a;
}
template <class T>
Vec7<T> operator-(const Vec7<T>& a) {
  Vec7<T> out;
  for (int i = 0; i < kAmbientDim; ++i) out[i] = -a[i];
  return out;
}
template <class T>
Vec7<T> operator*(const T& s, const Vec7<T>& a) {
  Vec7<T> out;
  for (int i = 0; i < kAmbientDim; ++i) out[i] = s * a[i];
  return out;
}
template <class T>
  requires(!std::is_same_v<T, double>)
Vec7<T> operator*(double s, const Vec7<T>& a) {
  Vec7<T> out;
  for (int i = 0; i < kAmbientDim; ++i) out[i] = s * a[i];
  return out;
}
template <class T>
Vec7<T> operator*(const Vec7<T>& a, const T& s) {
  return s * a;
}
template <class T>
  requires(!std::is_same_v<T, double>)
Vec7<T> operator*(const Vec7<T>& a, double s) {
  return s * a;
}
template <class T>
Vec7<T> operator/(const Vec7<T>& a, const T& s) {
  Vec7<T> out;
  for (int i = 0; i < kAmbientDim; ++i) out[i] = a[i] / s;
  return out;
}
template <class T>
  requires(!std::is_same_v<T, double>)
Vec7<T> operator/(const Vec7<T>& a, double s) {
  Vec7<T> out;
  for (int i = 0; i < kAmbientDim; ++i) out[i] = a[i] / s;
  return out;
}

template <class T>
T dot(const Vec7<T>& a, const Vec7<T>& b) {
  T acc = a[0] * b[0];
  for (int i = 1; i < kAmbientDim; ++i) acc += a[i] * b[i];
  return acc;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double max_abs(const Vec& a) {
  double m = 0.0;
  for (double e : a.c) m = std::max(m, std::abs(e));
  return m;
}

/// Embeds a constant double vector into jet scalars.
template <class T>
Vec7<T> lift(const Vec& a) {
  if constexpr (std::is_same_v<T, double>) {
    return a;
  } else {
    Vec7<T> out;
    for (int i = 0; i < kAmbientDim; ++i) out[i] = T(a[i]);
    return out;
  }
}

/// Drops all infinitesimal parts.
template <class T>
Vec values_of(const Vec7<T>& a) {
  Vec out;
  for (int i = 0; i < kAmbientDim; ++i) out[i] = value_of(a[i]);
  return out;
}

inline EVec7 to_eigen(const Vec& a) { return Eigen::Map<const EVec7>(a.c.data()); }
inline Vec from_eigen(const EVec7& a) {
  Vec out;
  for (int i = 0; i < kAmbientDim; ++i) out[i] = a(i);
  return out;
}

}  // namespace cforge
