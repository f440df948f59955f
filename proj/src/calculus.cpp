#include "cforge/calculus.hpp"

#include <cmath>

namespace cforge {

namespace {

constexpr int kMaxArity = 8;

template <class T>
using ArgBuf = std::array<Vec7<T>, kMaxArity>;

void check_arity(int n) {
  if (n + 1 > kMaxArity) throw Error(ErrorCode::InvalidArgument, "tensor arity too large");
}

}  // namespace

VTensor nabla(const Connection& c, const VTensor& k) {
  const int n = k.arity();
  check_arity(n);
  return VTensor(n + 1, [c, k, n](const auto& x, auto args) -> Vec7<scalar_of<decltype(x)>> {
    using T = scalar_of<decltype(x)>;
    if constexpr (jet_depth_v<T> >= kMaxJetDepth) {
      throw_jet_depth();
    } else {
      const ManifoldDescriptor& m = c.manifold;
      const Vec7<T>& v = args[0];
      const auto y = seed_direction(x, v);
      ArgBuf<Dual<T>> lifted;
      ArgBuf<T> at_x;
      for (int i = 0; i < n; ++i) {
        lifted[i] = m.project(y, lift_const(args[i + 1]));
        at_x[i] = value_part(lifted[i]);
      }
      const auto ky = k.eval(y, Args<Dual<T>>(lifted.data(), static_cast<std::size_t>(n)));
      Vec7<T> out = m.project(x, derivative_part(ky));
      if (c.deformation) out += c.deformation(x, v, value_part(ky));
      for (int i = 0; i < n; ++i) {
        const Vec7<T> saved = at_x[i];
        Vec7<T> dw = m.project(x, derivative_part(lifted[i]));
        if (c.deformation) dw += c.deformation(x, v, saved);
        at_x[i] = dw;
        out -= k.eval(x, Args<T>(at_x.data(), static_cast<std::size_t>(n)));
        at_x[i] = saved;
      }
      return out;
    }
  });
}

STensor nabla(const Connection& c, const STensor& k) {
  const int n = k.arity();
  check_arity(n);
  return STensor(n + 1, [c, k, n](const auto& x, auto args) -> scalar_of<decltype(x)> {
    using T = scalar_of<decltype(x)>;
    if constexpr (jet_depth_v<T> >= kMaxJetDepth) {
      throw_jet_depth();
    } else {
      const ManifoldDescriptor& m = c.manifold;
      const Vec7<T>& v = args[0];
      const auto y = seed_direction(x, v);
      ArgBuf<Dual<T>> lifted;
      ArgBuf<T> at_x;
      for (int i = 0; i < n; ++i) {
        lifted[i] = m.project(y, lift_const(args[i + 1]));
        at_x[i] = value_part(lifted[i]);
      }
      T out = k.eval(y, Args<Dual<T>>(lifted.data(), static_cast<std::size_t>(n))).d;
      for (int i = 0; i < n; ++i) {
        const Vec7<T> saved = at_x[i];
        Vec7<T> dw = m.project(x, derivative_part(lifted[i]));
        if (c.deformation) dw += c.deformation(x, v, saved);
        at_x[i] = dw;
        out = out - k.eval(x, Args<T>(at_x.data(), static_cast<std::size_t>(n)));
        at_x[i] = saved;
      }
      return out;
    }
  });
}

VTensor contract(const VTensor& k, std::vector<VTensor> fields) {
  if (static_cast<int>(fields.size()) != k.arity()) {
    throw Error(ErrorCode::InvalidArgument, "contract: field count does not match arity");
  }
  return VTensor(0, [k, fields](const auto& x, auto) {
    using T = scalar_of<decltype(x)>;
    ArgBuf<T> vals;
    for (std::size_t i = 0; i < fields.size(); ++i) vals[i] = fields[i](x);
    return k.eval(x, Args<T>(vals.data(), fields.size()));
  });
}

STensor contract(const STensor& k, std::vector<VTensor> fields) {
  if (static_cast<int>(fields.size()) != k.arity()) {
    throw Error(ErrorCode::InvalidArgument, "contract: field count does not match arity");
  }
  return STensor(0, [k, fields](const auto& x, auto) {
    using T = scalar_of<decltype(x)>;
    ArgBuf<T> vals;
    for (std::size_t i = 0; i < fields.size(); ++i) vals[i] = fields[i](x);
    return k.eval(x, Args<T>(vals.data(), fields.size()));
  });
}

VTensor levi_civita(const ManifoldDescriptor& m, const VTensor& x, const VTensor& y) {
  return contract(nabla(Connection::levi_civita(m), y), {x});
}

VTensor lie_bracket(const ManifoldDescriptor& m, const VTensor& xf, const VTensor& yf) {
  return VTensor(0, [m, xf, yf](const auto& x, auto) -> Vec7<scalar_of<decltype(x)>> {
    using T = scalar_of<decltype(x)>;
    if constexpr (jet_depth_v<T> >= kMaxJetDepth) {
      throw_jet_depth();
    } else {
      const Vec7<T> dxy = derivative_part(yf(seed_direction(x, xf(x))));
      const Vec7<T> dyx = derivative_part(xf(seed_direction(x, yf(x))));
      return m.project(x, dxy - dyx);
    }
  });
}

STensor directional(const VTensor& xf, const STensor& f) {
  return STensor(0, [xf, f](const auto& x, auto) -> scalar_of<decltype(x)> {
    using T = scalar_of<decltype(x)>;
    if constexpr (jet_depth_v<T> >= kMaxJetDepth) {
      throw_jet_depth();
    } else {
      return f(seed_direction(x, xf(x))).d;
    }
  });
}

STensor metric_tensor(const ManifoldDescriptor& m) {
  return STensor(2, [m](const auto&, auto a) { return m.inner(a[0], a[1]); });
}

double exterior_derivative(const ManifoldDescriptor& m, const STensor& alpha, const Vec& x,
                           std::span<const Vec> args) {
  const int p = alpha.arity();
  if (p > 3) throw Error(ErrorCode::UnsupportedDegree, "exterior derivative supports degrees 0 to 3");
  if (static_cast<int>(args.size()) != p + 1) {
    throw Error(ErrorCode::InvalidArgument, "exterior derivative needs p+1 arguments");
  }
  std::vector<VTensor> fields;
  for (const Vec& a : args) fields.push_back(constant_field(m, a));

  double acc = 0.0;
  for (int i = 0; i <= p; ++i) {
    std::vector<VTensor> others;
    for (int j = 0; j <= p; ++j) {
      if (j != i) others.push_back(fields[static_cast<std::size_t>(j)]);
    }
    const double term = directional(fields[static_cast<std::size_t>(i)], contract(alpha, others))(x);
    acc += (i % 2 == 0) ? term : -term;
  }
  ArgBuf<double> buf;
  for (int i = 0; i <= p; ++i) {
    for (int j = i + 1; j <= p; ++j) {
      buf[0] = lie_bracket(m, fields[static_cast<std::size_t>(i)], fields[static_cast<std::size_t>(j)])(x);
      int slot = 1;
      for (int l = 0; l <= p; ++l) {
        if (l != i && l != j) buf[static_cast<std::size_t>(slot++)] = args[static_cast<std::size_t>(l)];
      }
      const double term = alpha.eval(x, Args<double>(buf.data(), static_cast<std::size_t>(p)));
      acc += ((i + j) % 2 == 0) ? term : -term;
    }
  }
  return acc;
}

STensor wedge(const STensor& a, const STensor& b) {
  const int p = a.arity();
  const int q = b.arity();
  check_arity(p + q);
  return STensor(p + q, [a, b, p, q](const auto& x, auto args) {
    using T = scalar_of<decltype(x)>;
    return detail::shuffle_wedge<T>(
        p, q, args, [&](Args<T> s) { return a.eval(x, s); }, [&](Args<T> s) { return b.eval(x, s); });
  });
}

FormAtPoint wedge(const FormAtPoint& a, const FormAtPoint& b) {
  const int p = a.degree;
  const int q = b.degree;
  check_arity(p + q);
  return FormAtPoint{p + q, [a, b, p, q](std::span<const Vec> args) {
                       return detail::shuffle_wedge<double>(p, q, args, a.eval, b.eval);
                     }};
}

Vec riemann(const ManifoldDescriptor& m, const Vec& x, const Vec& u, const Vec& v, const Vec& w) {
  const VTensor uf = constant_field(m, u);
  const VTensor vf = constant_field(m, v);
  const VTensor wf = constant_field(m, w);
  const Vec a = levi_civita(m, uf, levi_civita(m, vf, wf))(x);
  const Vec b = levi_civita(m, vf, levi_civita(m, uf, wf))(x);
  const Vec c = levi_civita(m, lie_bracket(m, uf, vf), wf)(x);
  return a - b - c;
}

double ricci(const ManifoldDescriptor& m, const Vec& x, const Vec& u, const Vec& v) {
  double acc = 0.0;
  for (const Vec& e : orthonormal_frame(m, x)) acc += m.inner(riemann(m, x, e, u, v), e);
  return acc;
}

std::vector<std::vector<double>> ricci_matrix(const ManifoldDescriptor& m, const Vec& x) {
  const std::vector<Vec> frame = orthonormal_frame(m, x);
  const std::size_t n = frame.size();
  std::vector<std::vector<double>> out(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      double acc = 0.0;
      for (const Vec& e : frame) acc += m.inner(riemann(m, x, e, frame[a], frame[b]), e);
      out[a][b] = acc;
      out[b][a] = acc;
    }
  }
  return out;
}

double scalar_curvature(const ManifoldDescriptor& m, const Vec& x) {
  const auto ric = ricci_matrix(m, x);
  double s = 0.0;
  for (std::size_t i = 0; i < ric.size(); ++i) s += ric[i][i];
  return s;
}

double sectional(const ManifoldDescriptor& m, const Vec& x, const Vec& u, const Vec& v) {
  const double area2 = m.inner(u, u) * m.inner(v, v) - m.inner(u, v) * m.inner(u, v);
  if (!(area2 > 1e-20)) throw Error(ErrorCode::DegeneratePlane, "sectional curvature of a degenerate plane");
  return m.inner(riemann(m, x, u, v, v), u) / area2;
}

}  // namespace cforge
