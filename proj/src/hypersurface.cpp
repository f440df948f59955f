#include "cforge/hypersurface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cforge/octonion.hpp"

namespace cforge {

NearlyKahlerSix nearly_kahler_six() {
  const ManifoldDescriptor s6 = s6_descriptor();
  const VTensor j(1, [s6](const auto& x, auto args) {
    const auto p = s6.retract(x);
    return cross(p, s6.project(p, args[0]));
  });
  return {s6, j};
}

Vec nearly_kahler_defect(const NearlyKahlerSix& n, const Vec& x, const Vec& v) {
  n.manifold.require_tangent(x, v);
  return nabla(Connection::levi_civita(n.manifold), n.J)(x, v, v);
}

double constant_type_residual(const NearlyKahlerSix& n, const Vec& x, const Vec& u, const Vec& v) {
  const ManifoldDescriptor& m = n.manifold;
  const double s_ambient = scalar_curvature(m, x);
  const Vec d = nabla(Connection::levi_civita(m), n.J)(x, u, v);
  const double uv = m.inner(u, v);
  const double ujv = m.inner(u, n.J(x, v));
  const double rhs = (s_ambient / 30.0) * (m.inner(u, u) * m.inner(v, v) - uv * uv - ujv * ujv);
  return std::abs(m.inner(d, d) - rhs);
}

HypersurfaceEmbedding hypersurface_by_name(const std::string& name) {
  HypersurfaceEmbedding hs;
  hs.name = name;
  hs.ambient = nearly_kahler_six();
  if (name == "s5-geodesic") {
    hs.manifold = s5_geodesic_descriptor();
    hs.nu = VTensor(0, [](const auto& x, auto) {
      using T = scalar_of<decltype(x)>;
      return -Vec7<T>::unit(6);
    });
    hs.mode = Mode::NearlyCosymplectic;
  } else if (name == "s5-umbilical") {
    hs.manifold = s5_umbilical_descriptor();
    hs.nu = VTensor(0, [m = hs.manifold](const auto& x, auto) {
      using T = scalar_of<decltype(x)>;
      return m.retract(x) - std::sqrt(2.0) * Vec7<T>::unit(6);
    });
    hs.mode = Mode::NearlySasakian;
  } else {
    throw Error(ErrorCode::UnknownManifold, "no hypersurface named '" + name + "'");
  }
  return hs;
}

std::vector<std::string> hypersurface_names() { return {"s5-geodesic", "s5-umbilical"}; }

AcmStructure induce_acm(const HypersurfaceEmbedding& hs) {
  const ManifoldDescriptor m = hs.manifold;
  const VTensor j = hs.ambient.J;
  const VTensor nu = hs.nu;
  AcmStructure s;
  s.manifold = m;
  s.mode = hs.mode;
  s.phi = VTensor(1, [m, j, nu](const auto& x, auto args) {
    const auto p = m.retract(x);
    const auto jv = j(p, m.project(p, args[0]));
    const auto n = nu(p);
    return jv - dot(jv, n) * n;
  });
  s.xi = VTensor(0, [m, j, nu](const auto& x, auto) {
    const auto p = m.retract(x);
    return -j(p, nu(p));
  });
  return s;
}

AcmStructure structure_by_name(const std::string& name) { return induce_acm(hypersurface_by_name(name)); }

Vec second_fundamental_form(const HypersurfaceEmbedding& hs, const Vec& x, const Vec& u, const Vec& v) {
  const ManifoldDescriptor& m = hs.manifold;
  m.require_tangent(x, u);
  m.require_tangent(x, v);
  const Vec n = hs.nu(x);
  const auto y = seed_direction(x, u);
  const Vec d = derivative_part(m.project(y, lift_const(v)));
  return dot(d, n) * n;
}

const char* to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::NearlyCosymplecticAnsatz: return "nearly-cosymplectic";
    case ShapeKind::NearlySasakianAnsatz: return "nearly-sasakian";
  }
  return "unknown";
}

namespace {

struct AnsatzFit {
  std::vector<double> beta;
  double residual = 0.0;
};

AnsatzFit fit_ansatz(const std::vector<ShapeSample>& samples, double offset) {
  AnsatzFit fit;
  for (const ShapeSample& s : samples) {
    const Eigen::MatrixXd e = s.eta * s.eta.transpose();
    const Eigen::MatrixXd a0 = offset * Eigen::MatrixXd::Identity(s.sigma.rows(), s.sigma.cols());
    const double ee = e.squaredNorm();
    const double b = ee > 0.0 ? ((s.sigma - a0).cwiseProduct(e)).sum() / ee : 0.0;
    fit.beta.push_back(b);
    fit.residual = std::max(fit.residual, (s.sigma - a0 - b * e).norm());
  }
  return fit;
}

}  // namespace

ShapeFit fit_shape(const std::vector<ShapeSample>& samples, double tol) {
  if (samples.empty()) throw Error(ErrorCode::InvalidArgument, "no shape samples");
  const AnsatzFit nc = fit_ansatz(samples, 0.0);
  const AnsatzFit ns = fit_ansatz(samples, -1.0);
  ShapeFit out;
  out.residual_nc = nc.residual;
  out.residual_ns = ns.residual;
  if (std::min(nc.residual, ns.residual) > tol) {
    throw Error(ErrorCode::NeitherFits, "second fundamental form matches neither ansatz");
  }
  const bool ns_wins = ns.residual < nc.residual;
  const AnsatzFit& w = ns_wins ? ns : nc;
  out.kind = ns_wins ? ShapeKind::NearlySasakianAnsatz : ShapeKind::NearlyCosymplecticAnsatz;
  out.residual = w.residual;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double sum = 0.0;
  for (double b : w.beta) {
    lo = std::min(lo, b);
    hi = std::max(hi, b);
    sum += b;
  }
  out.beta_mean = sum / static_cast<double>(w.beta.size());
  out.beta_spread = hi - lo;
  return out;
}

ShapeSample shape_sample(const HypersurfaceEmbedding& hs, const Vec& x) {
  const ManifoldDescriptor& m = hs.manifold;
  const auto frame = orthonormal_frame(m, x);
  const Vec n = hs.nu(x);
  const AcmStructure s = induce_acm(hs);
  const Vec xi = s.xi(x);
  const auto dim = static_cast<Eigen::Index>(frame.size());
  ShapeSample out{Eigen::MatrixXd(dim, dim), Eigen::VectorXd(dim)};
  for (Eigen::Index a = 0; a < dim; ++a) {
    out.eta(a) = m.inner(xi, frame[static_cast<std::size_t>(a)]);
    for (Eigen::Index b = 0; b < dim; ++b) {
      const Vec sig = second_fundamental_form(hs, x, frame[static_cast<std::size_t>(a)],
                                              frame[static_cast<std::size_t>(b)]);
      out.sigma(a, b) = dot(sig, n);
    }
  }
  return out;
}

ShapeFit shape_classification(const HypersurfaceEmbedding& hs, int samples, std::uint64_t seed) {
  const int dim = hs.manifold.dim();
  if (samples < dim * dim) {
    throw Error(ErrorCode::InvalidArgument, "shape classification needs at least dim² samples");
  }
  std::vector<ShapeSample> data;
  for (const Vec& x : sample_points(hs.manifold, samples, seed)) data.push_back(shape_sample(hs, x));
  return fit_shape(data);
}

Mat7 nabla_nu_J(const HypersurfaceEmbedding& hs, const Vec& x) {
  hs.manifold.require_point(x);
  const VTensor dj = nabla(Connection::levi_civita(hs.ambient.manifold), hs.ambient.J);
  const Vec n = hs.nu(x);
  Mat7 out = Mat7::Zero();
  for (const Vec& e : orthonormal_frame(hs.manifold, x)) {
    out += to_eigen(dj(x, n, e)) * to_eigen(e).transpose();
  }
  return out;
}

double nabla_nu_J_residual(const HypersurfaceEmbedding& hs, const Vec& x) {
  const Mat7 a = nabla_nu_J(hs, x);
  const AcmStructure s = induce_acm(hs);
  const VTensor h = h_field(s);
  double r = 0.0;
  for (const Vec& e : orthonormal_frame(hs.manifold, x)) {
    r = std::max(r, max_abs(from_eigen(a * to_eigen(e)) - h(x, e)));
  }
  return r;
}

double normal_derivative_residual(const HypersurfaceEmbedding& hs, const Vec& x, double beta) {
  hs.manifold.require_point(x);
  const ManifoldDescriptor& s6 = hs.ambient.manifold;
  const AcmStructure s = induce_acm(hs);
  const Vec xi = s.xi(x);
  const bool ns = hs.mode != Mode::NearlyCosymplectic;
  double r = 0.0;
  for (const Vec& e : orthonormal_frame(hs.manifold, x)) {
    const auto y = seed_direction(x, e);
    const Vec dnu = s6.project(x, derivative_part(hs.nu(y)));
    const Vec expected = (ns ? e : Vec::zero()) - beta * dot(xi, e) * xi;
    r = std::max(r, max_abs(dnu - expected));
  }
  return r;
}

ScalarRelations scalar_relations(const HypersurfaceEmbedding& hs, const Vec& x) {
  ScalarRelations out;
  out.s_ambient = scalar_curvature(hs.ambient.manifold, x);
  out.s = scalar_curvature(hs.manifold, x);
  const AcmStructure st = induce_acm(hs);
  const VTensor h = h_field(st);
  double tr = 0.0;
  for (const Vec& e : orthonormal_frame(hs.manifold, x)) tr += st.g(h(x, h(x, e)), e);
  out.lambda2 = -tr / 4.0;
  out.lambda2_residual = std::abs(out.lambda2 - out.s_ambient / 30.0);
  const double expected =
      (hs.mode == Mode::NearlyCosymplectic ? 0.0 : 20.0) + (2.0 / 3.0) * out.s_ambient;
  out.scalar_residual = std::abs(out.s - expected);
  return out;
}

}  // namespace cforge
