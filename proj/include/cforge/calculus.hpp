#pragma once

// Covariant calculus on embedded spheres: Levi-Civita connection via tangential
// projection of the flat derivative, connections with a deformation tensor,
// the tensor rule, brackets, exterior derivative, wedge and curvature.

#include <array>
#include <bit>
#include <functional>
#include <span>
#include <vector>

#include "cforge/field.hpp"
#include "cforge/manifold.hpp"

namespace cforge {

/// ∇ + H, where H is a vector-valued tensor of arity 2 (empty for Levi-Civita).
struct Connection {
  ManifoldDescriptor manifold;
  VTensor deformation;

  static Connection levi_civita(const ManifoldDescriptor& m) { return {m, {}}; }
  static Connection with_deformation(const ManifoldDescriptor& m, VTensor h) { return {m, std::move(h)}; }
};

/// (∇K)(v, w_1..w_k) = ∇_v(K(W_1..W_k)) - Σ K(..∇_v W_i..), with W_i = P w_i.
/// For a connection with deformation H the corrections H(v, K(..)) and
/// -Σ K(..H(v, w_i)..) are added, so every connection shares this code path.
VTensor nabla(const Connection& c, const VTensor& k);
STensor nabla(const Connection& c, const STensor& k);

/// Field x -> K(x; Y_1(x), ..., Y_k(x)).
VTensor contract(const VTensor& k, std::vector<VTensor> fields);
STensor contract(const STensor& k, std::vector<VTensor> fields);

/// ∇_X Y as a vector field.
VTensor levi_civita(const ManifoldDescriptor& m, const VTensor& x, const VTensor& y);
/// [X, Y] = P(D_X Y - D_Y X) as a vector field.
VTensor lie_bracket(const ManifoldDescriptor& m, const VTensor& x, const VTensor& y);
/// X(f) as a scalar field.
STensor directional(const VTensor& x, const STensor& f);

/// g(·,·) as a 2-tensor, and its covariant derivative for metricity checks.
STensor metric_tensor(const ManifoldDescriptor& m);

/// dα(v_0..v_p) at x by the bracket formula with projected-constant extensions:
/// Σ (-1)^i V_i(α(..V̂_i..)) + Σ_{i<j} (-1)^{i+j} α([V_i,V_j], ..).
double exterior_derivative(const ManifoldDescriptor& m, const STensor& alpha, const Vec& x,
                           std::span<const Vec> args);

namespace detail {

/// Σ over (p,q)-shuffles σ of sign(σ)·a(v_σ(1..p))·b(v_σ(p+1..p+q)).
template <class S, class V, class FA, class FB>
S shuffle_wedge(int p, int q, std::span<const V> args, const FA& a, const FB& b) {
  const int n = p + q;
  S acc = S(0.0);
  std::array<V, 8> left;
  std::array<V, 8> right;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != p) continue;
    int nl = 0;
    int nr = 0;
    int inversions = 0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        inversions += nr;
        left[static_cast<std::size_t>(nl++)] = args[static_cast<std::size_t>(i)];
      } else {
        right[static_cast<std::size_t>(nr++)] = args[static_cast<std::size_t>(i)];
      }
    }
    const S term = a(std::span<const V>(left.data(), static_cast<std::size_t>(p))) *
                   b(std::span<const V>(right.data(), static_cast<std::size_t>(q)));
    if (inversions % 2 == 0) {
      acc = acc + term;
    } else {
      acc = acc - term;
    }
  }
  return acc;
}

}  // namespace detail

/// Alternating wedge with the determinant convention (u∧v = u⊗v - v⊗u).
STensor wedge(const STensor& a, const STensor& b);

/// A form frozen at one point, for algebra on already-computed values.
struct FormAtPoint {
  int degree = 0;
  std::function<double(std::span<const Vec>)> eval;
};

FormAtPoint wedge(const FormAtPoint& a, const FormAtPoint& b);

/// R(u,v)w = ∇_U∇_V W - ∇_V∇_U W - ∇_[U,V] W.
Vec riemann(const ManifoldDescriptor& m, const Vec& x, const Vec& u, const Vec& v, const Vec& w);
/// Ric(u,v) = Σ_i g(R(e_i,u)v, e_i) over an orthonormal frame.
double ricci(const ManifoldDescriptor& m, const Vec& x, const Vec& u, const Vec& v);
/// Ricci matrix in the frame returned by orthonormal_frame(m, x).
std::vector<std::vector<double>> ricci_matrix(const ManifoldDescriptor& m, const Vec& x);
double scalar_curvature(const ManifoldDescriptor& m, const Vec& x);
/// g(R(X,Y)Y,X)/|X∧Y|²; throws DegeneratePlane when |X∧Y| < 1e-10.
double sectional(const ManifoldDescriptor& m, const Vec& x, const Vec& u, const Vec& v);

}  // namespace cforge
