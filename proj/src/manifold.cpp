#include "cforge/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace cforge {

double ManifoldDescriptor::defect(const Vec& x) const {
  double d = std::abs(norm(offset(x)) - radius);
  for (int i = 0; i < kAmbientDim; ++i) {
    if (!active[i]) d = std::max(d, std::abs(x[i] - center[i]));
  }
  return d;
}

void ManifoldDescriptor::require_point(const Vec& x) const {
  if (!contains(x)) {
    throw Error(ErrorCode::PointOffManifold, "point is not on " + label);
  }
}

void ManifoldDescriptor::require_tangent(const Vec& x, const Vec& v, double tol) const {
  require_point(x);
  double d = std::abs(dot(v, radial(x)));
  for (int i = 0; i < kAmbientDim; ++i) {
    if (!active[i]) d = std::max(d, std::abs(v[i]));
  }
  if (d > tol * std::max(1.0, norm(v))) {
    throw Error(ErrorCode::NotTangent, "vector is not tangent to " + label);
  }
}

Vec tangent_project(const ManifoldDescriptor& m, const Vec& x, const Vec& v) {
  m.require_point(x);
  return m.project(x, v);
}

VTensor extend_field(const ManifoldDescriptor& m, const VTensor& f, int k) {
  return VTensor(f.arity(), [m, f, k](const auto& x, auto args) {
    auto value = f.eval(m.retract(x), args);
    if (k == 0) return value;
    const auto o = m.offset(x);
    using T = scalar_of<decltype(x)>;
    using std::sqrt;
    const T ratio = sqrt(dot(o, o)) / m.radius;
    T s = ratio;
    for (int i = 1; i < k; ++i) s = s * ratio;
    return s * value;
  });
}

STensor extend_field(const ManifoldDescriptor& m, const STensor& f, int k) {
  return STensor(f.arity(), [m, f, k](const auto& x, auto args) {
    auto value = f.eval(m.retract(x), args);
    if (k == 0) return value;
    const auto o = m.offset(x);
    using T = scalar_of<decltype(x)>;
    using std::sqrt;
    const T ratio = sqrt(dot(o, o)) / m.radius;
    T s = ratio;
    for (int i = 1; i < k; ++i) s = s * ratio;
    return s * value;
  });
}

VTensor constant_field(const ManifoldDescriptor& m, const Vec& v) {
  return VTensor(0, [m, v](const auto& x, auto) {
    using T = scalar_of<decltype(x)>;
    return m.project(x, lift<T>(v));
  });
}

namespace {

std::vector<Vec> gram_schmidt(const ManifoldDescriptor& m, const Vec& x, std::vector<Vec> candidates) {
  const int want = m.dim();
  const double unit = std::sqrt(m.metric_scale);
  std::vector<Vec> frame;
  for (Vec& c : candidates) c = m.project(x, c);
  while (static_cast<int>(frame.size()) < want) {
    int best = -1;
    double best_norm = 1e-12;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const double n = norm(candidates[i]);
      if (n > best_norm) {
        best_norm = n;
        best = static_cast<int>(i);
      }
    }
    if (best < 0) break;
    // Second pass of orthogonalization for stability.
    Vec e = candidates[static_cast<std::size_t>(best)];
    for (const Vec& f : frame) e -= (dot(e, f) * unit * unit) * f;
    e = e / (norm(e) * unit);
    frame.push_back(e);
    candidates.erase(candidates.begin() + best);
    for (Vec& c : candidates) c -= (dot(c, e) * unit * unit) * e;
  }
  if (static_cast<int>(frame.size()) != want) {
    throw Error(ErrorCode::FrameDeficient, "could not complete a tangent frame on " + m.label);
  }
  return frame;
}

Vec gaussian_in_active(const ManifoldDescriptor& m, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec v = Vec::zero();
  for (int i = 0; i < kAmbientDim; ++i) {
    const double g = gauss(rng);
    if (m.active[i]) v[i] = g;
  }
  return v;
}

}  // namespace

std::vector<Vec> orthonormal_frame(const ManifoldDescriptor& m, const Vec& x) {
  m.require_point(x);
  std::vector<Vec> candidates;
  for (int i = 0; i < kAmbientDim; ++i) candidates.push_back(Vec::unit(i));
  return gram_schmidt(m, x, std::move(candidates));
}

std::vector<Vec> orthonormal_frame(const ManifoldDescriptor& m, const Vec& x, std::uint64_t seed) {
  m.require_point(x);
  std::mt19937_64 rng(seed);
  std::vector<Vec> candidates;
  for (int i = 0; i < m.dim() + 2; ++i) candidates.push_back(gaussian_in_active(m, rng));
  return gram_schmidt(m, x, std::move(candidates));
}

std::vector<Vec> sample_points(const ManifoldDescriptor& m, int n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "sample count must be positive");
  std::mt19937_64 rng(seed);
  std::vector<Vec> points;
  points.reserve(static_cast<std::size_t>(n));
  while (static_cast<int>(points.size()) < n) {
    const Vec g = gaussian_in_active(m, rng);
    const double len = norm(g);
    if (len < 1e-6) continue;
    Vec p = m.center;
    for (int i = 0; i < kAmbientDim; ++i) {
      if (m.active[i]) p[i] = m.center[i] + m.radius * g[i] / len;
    }
    points.push_back(p);
  }
  return points;
}

std::vector<Vec> sample_tangents(const ManifoldDescriptor& m, const Vec& x, int n, std::uint64_t seed) {
  m.require_point(x);
  std::mt19937_64 rng(seed);
  std::vector<Vec> out;
  while (static_cast<int>(out.size()) < n) {
    const Vec v = m.project(x, gaussian_in_active(m, rng));
    const double len = norm(v);
    if (len < 1e-6) continue;
    out.push_back(v / len);
  }
  return out;
}

ManifoldDescriptor s6_descriptor() {
  ManifoldDescriptor m;
  m.label = "s6";
  return m;
}

ManifoldDescriptor s5_geodesic_descriptor() {
  ManifoldDescriptor m;
  m.label = "s5-geodesic";
  m.active[6] = false;
  return m;
}

ManifoldDescriptor s5_umbilical_descriptor() {
  ManifoldDescriptor m;
  m.label = "s5-umbilical";
  m.active[6] = false;
  m.center[6] = std::sqrt(2.0) / 2.0;
  m.radius = std::sqrt(2.0) / 2.0;
  return m;
}

ManifoldDescriptor descriptor_by_name(const std::string& name) {
  if (name == "s6") return s6_descriptor();
  if (name == "s5-geodesic") return s5_geodesic_descriptor();
  if (name == "s5-umbilical") return s5_umbilical_descriptor();
  throw Error(ErrorCode::UnknownManifold, "unknown manifold '" + name + "'");
}

std::vector<std::string> manifold_names() { return {"s6", "s5-geodesic", "s5-umbilical"}; }

}  // namespace cforge
