#pragma once

// Type-erased smooth tensor fields on a neighbourhood of a manifold in R^7.
//
// A field wraps a generic callable and instantiates it once per jet depth
// (double, Dual<double>, ...). Calling a field with Vec7<T> dispatches to the
// matching instantiation, so fields built from other fields can be
// differentiated again without finite differences.
//
// Two shapes cover everything: VTensor (vector valued, multilinear in `arity`
// vector arguments) and STensor (scalar valued). A vector field is a VTensor
// of arity 0, an endomorphism has arity 1, a p-form is an alternating STensor
// of arity p.

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <type_traits>
#include <utility>

#include "cforge/error.hpp"
#include "cforge/jet.hpp"
#include "cforge/vec7.hpp"

namespace cforge {

template <class T>
using Args = std::span<const Vec7<T>>;

template <class T>
using VTensorFn = std::function<Vec7<T>(const Vec7<T>&, Args<T>)>;
template <class T>
using STensorFn = std::function<T(const Vec7<T>&, Args<T>)>;

template <template <class> class Fn>
class BasicField {
 public:
  BasicField() = default;

  template <class F>
    requires(!std::is_same_v<std::decay_t<F>, BasicField>)
  explicit BasicField(F f)
      : table_(std::make_shared<const Table>(Table{Fn<J0>(f), Fn<J1>(f), Fn<J2>(f), Fn<J3>(f)})) {}

  template <class T>
  const Fn<T>& get() const {
    static_assert(jet_depth_v<T> <= kMaxJetDepth);
    if constexpr (std::is_same_v<T, J0>) {
      return table_->f0;
    } else if constexpr (std::is_same_v<T, J1>) {
      return table_->f1;
    } else if constexpr (std::is_same_v<T, J2>) {
      return table_->f2;
    } else {
      return table_->f3;
    }
  }

  explicit operator bool() const { return static_cast<bool>(table_); }

 private:
  struct Table {
    Fn<J0> f0;
    Fn<J1> f1;
    Fn<J2> f2;
    Fn<J3> f3;
  };
  std::shared_ptr<const Table> table_;
};

namespace detail {

template <class Value, template <class> class Fn>
class Tensor {
 public:
  Tensor() = default;
  template <class F>
  Tensor(int arity, F f) : arity_(arity), fn_(std::move(f)) {}

  int arity() const { return arity_; }
  explicit operator bool() const { return static_cast<bool>(fn_); }

  template <class T>
  auto eval(const Vec7<T>& x, Args<T> args) const {
    if (static_cast<int>(args.size()) != arity_) {
      throw Error(ErrorCode::InvalidArgument, "tensor evaluated with wrong argument count");
    }
    return fn_.template get<T>()(x, args);
  }

  template <class T, class... V>
  auto operator()(const Vec7<T>& x, const V&... v) const {
    static_assert((std::is_same_v<V, Vec7<T>> && ...), "arguments must share the point's scalar type");
    const std::array<Vec7<T>, sizeof...(V)> args{v...};
    return eval(x, Args<T>(args));
  }

 private:
  int arity_ = 0;
  BasicField<Fn> fn_;
};

}  // namespace detail

using VTensor = detail::Tensor<struct VectorTag, VTensorFn>;
using STensor = detail::Tensor<struct ScalarTag, STensorFn>;

/// Lifts x into Dual<T> moving along v.
template <class T>
Vec7<Dual<T>> seed_direction(const Vec7<T>& x, const Vec7<T>& v) {
  Vec7<Dual<T>> out;
  for (int i = 0; i < kAmbientDim; ++i) out[i] = Dual<T>(x[i], v[i]);
  return out;
}

/// Embeds w as a constant (zero derivative) one level up.
template <class T>
Vec7<Dual<T>> lift_const(const Vec7<T>& w) {
  Vec7<Dual<T>> out;
  for (int i = 0; i < kAmbientDim; ++i) out[i] = Dual<T>(w[i], T(0.0));
  return out;
}

template <class T>
Vec7<T> value_part(const Vec7<Dual<T>>& y) {
  Vec7<T> out;
  for (int i = 0; i < kAmbientDim; ++i) out[i] = y[i].v;
  return out;
}

template <class T>
Vec7<T> derivative_part(const Vec7<Dual<T>>& y) {
  Vec7<T> out;
  for (int i = 0; i < kAmbientDim; ++i) out[i] = y[i].d;
  return out;
}

[[noreturn]] inline void throw_jet_depth() {
  throw Error(ErrorCode::JetDepthExceeded, "derivative nesting deeper than the jet tower");
}

// Elementwise combinators.

inline VTensor operator+(const VTensor& a, const VTensor& b) {
  return VTensor(a.arity(), [a, b](const auto& x, auto args) { return a.eval(x, args) + b.eval(x, args); });
}
inline VTensor operator-(const VTensor& a, const VTensor& b) {
  return VTensor(a.arity(), [a, b](const auto& x, auto args) { return a.eval(x, args) - b.eval(x, args); });
}
inline VTensor operator*(double s, const VTensor& a) {
  return VTensor(a.arity(), [s, a](const auto& x, auto args) { return s * a.eval(x, args); });
}
inline STensor operator+(const STensor& a, const STensor& b) {
  return STensor(a.arity(), [a, b](const auto& x, auto args) { return a.eval(x, args) + b.eval(x, args); });
}
inline STensor operator-(const STensor& a, const STensor& b) {
  return STensor(a.arity(), [a, b](const auto& x, auto args) { return a.eval(x, args) - b.eval(x, args); });
}
inline STensor operator*(double s, const STensor& a) {
  return STensor(a.arity(), [s, a](const auto& x, auto args) { return s * a.eval(x, args); });
}

/// Endomorphism composition (A∘B)v = A(Bv).
inline VTensor compose(const VTensor& a, const VTensor& b) {
  return VTensor(1, [a, b](const auto& x, auto args) { return a(x, b(x, args[0])); });
}

}  // namespace cforge
