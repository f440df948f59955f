#pragma once

// Round spheres in affine subspaces of R^7 and the point-level plumbing on them.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cforge/field.hpp"

namespace cforge {

inline constexpr double kOnManifoldTol = 1e-10;

struct ManifoldDescriptor {
  std::string label;
  Vec center = Vec::zero();
  double radius = 1.0;
  std::array<bool, kAmbientDim> active{true, true, true, true, true, true, true};
  /// Constant conformal factor c of the metric c·g_euclid. Connection and
  /// curvature tensor are unchanged; frames and traces see it.
  double metric_scale = 1.0;

  int dim() const {
    int n = 0;
    for (bool a : active) n += a ? 1 : 0;
    return n - 1;
  }

  /// Component of x - center inside the active subspace.
  template <class T>
  Vec7<T> offset(const Vec7<T>& x) const {
    Vec7<T> out = x;
    for (int i = 0; i < kAmbientDim; ++i) out[i] = active[i] ? x[i] - center[i] : T(0.0);
    return out;
  }

  /// Outward unit normal of the sphere through x (Euclidean).
  template <class T>
  Vec7<T> radial(const Vec7<T>& x) const {
    using std::sqrt;
    const Vec7<T> o = offset(x);
    return o / sqrt(dot(o, o));
  }

  /// Orthogonal projection onto the tangent space of the sphere through x.
  template <class T>
  Vec7<T> project(const Vec7<T>& x, const Vec7<T>& v) const {
    const Vec7<T> n = radial(x);
    Vec7<T> w = v;
    for (int i = 0; i < kAmbientDim; ++i) {
      if (!active[i]) w[i] = T(0.0);
    }
    return w - dot(w, n) * n;
  }

  /// Nearest point of the manifold.
  template <class T>
  Vec7<T> retract(const Vec7<T>& x) const {
    Vec7<T> out = radius * radial(x);
    for (int i = 0; i < kAmbientDim; ++i) out[i] = out[i] + center[i];
    return out;
  }

  template <class T>
  T inner(const Vec7<T>& u, const Vec7<T>& v) const {
    return metric_scale * dot(u, v);
  }

  /// Distance-type defect of x from the manifold.
  double defect(const Vec& x) const;
  bool contains(const Vec& x, double tol = kOnManifoldTol) const { return defect(x) < tol; }
  void require_point(const Vec& x) const;
  void require_tangent(const Vec& x, const Vec& v, double tol = kOnManifoldTol) const;

  ManifoldDescriptor with_metric_scale(double c) const {
    ManifoldDescriptor out = *this;
    out.metric_scale = metric_scale * c;
    return out;
  }
};

/// Checked projection of an ambient vector to T_xM.
Vec tangent_project(const ManifoldDescriptor& m, const Vec& x, const Vec& v);

/// Radial extension F_ext(x) = (rho/R)^k F(retract(x)), rho = |offset(x)|.
/// k = 0 is the default extension; other exponents give alternate extensions
/// that must agree with it on covariant objects at manifold points.
VTensor extend_field(const ManifoldDescriptor& m, const VTensor& f, int k = 0);
STensor extend_field(const ManifoldDescriptor& m, const STensor& f, int k = 0);

/// x -> P(x) v, a tangent vector field with constant ambient generator.
VTensor constant_field(const ManifoldDescriptor& m, const Vec& v);

/// Orthonormal basis of T_xM for the metric metric_scale·g_euclid.
/// Without a seed: Gram-Schmidt over P e_1..P e_7 with largest-residual pivoting.
/// With a seed: the same over projected Gaussian candidates.
std::vector<Vec> orthonormal_frame(const ManifoldDescriptor& m, const Vec& x);
std::vector<Vec> orthonormal_frame(const ManifoldDescriptor& m, const Vec& x, std::uint64_t seed);

/// Uniform points via normalized Gaussians in the active subspace.
std::vector<Vec> sample_points(const ManifoldDescriptor& m, int n, std::uint64_t seed);

/// Uniform random tangent vectors (Euclidean unit length) at x.
std::vector<Vec> sample_tangents(const ManifoldDescriptor& m, const Vec& x, int n, std::uint64_t seed);

/// Registry spheres: "s6" (unit S^6), "s5-geodesic" (x^7 = 0),
/// "s5-umbilical" (x^7 = √2/2, radius √2/2).
ManifoldDescriptor s6_descriptor();
ManifoldDescriptor s5_geodesic_descriptor();
ManifoldDescriptor s5_umbilical_descriptor();
/// Throws UnknownManifold.
ManifoldDescriptor descriptor_by_name(const std::string& name);
std::vector<std::string> manifold_names();

}  // namespace cforge
