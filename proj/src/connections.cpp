#include "cforge/connections.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cforge {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_contact_mode(const AcmStructure& s) {
  if (s.mode != Mode::NearlySasakian && s.mode != Mode::Sasakian) {
    throw Error(ErrorCode::InvalidArgument, "canonical connection needs a nearly Sasakian or Sasakian structure");
  }
}

template <class F>
double max_over_pairs(const std::vector<Vec>& a, const std::vector<Vec>& b, F f) {
  double out = 0.0;
  for (const Vec& u : a) {
    for (const Vec& v : b) out = std::max(out, f(u, v));
  }
  return out;
}

template <class F>
double max_over_triples(const std::vector<Vec>& frame, F f) {
  double out = 0.0;
  for (const Vec& u : frame) {
    for (const Vec& v : frame) {
      for (const Vec& w : frame) out = std::max(out, f(u, v, w));
    }
  }
  return out;
}

// Spanning set of D = ker η at x: the frame projected along ξ.
std::vector<Vec> horizontal_frame(const AcmStructure& s, const Vec& x) {
  const Vec xi = s.xi(x);
  std::vector<Vec> out;
  for (const Vec& e : orthonormal_frame(s.manifold, x)) out.push_back(e - s.g(xi, e) * xi);
  return out;
}

// Frame plus ξ, so that ξ-direction probes are always present.
std::vector<Vec> frame_with_xi(const AcmStructure& s, const Vec& x) {
  std::vector<Vec> out = orthonormal_frame(s.manifold, x);
  out.push_back(s.xi(x));
  return out;
}

double max_diff(const VTensor& a, const VTensor& b, const std::vector<Vec>& frame, const Vec& x) {
  return max_over_pairs(frame, frame, [&](const Vec& u, const Vec& v) { return max_abs(a(x, u, v) - b(x, u, v)); });
}

}  // namespace

CanonicalConnection canonical_connection(const AcmStructure& s, double r) {
  require_contact_mode(s);
  CanonicalConnection c;
  c.base = s;
  c.r = r;
  c.h = h_field(s);
  const ManifoldDescriptor m = s.manifold;
  const VTensor phi = s.phi;
  const VTensor xi = s.xi;
  const VTensor h = c.h;
  const VTensor nphi = nabla_phi_field(s);
  c.H = VTensor(2, [m, phi, xi, h, nphi, r](const auto& x, auto a) {
    const auto xv = xi(x);
    const auto pmh = phi(x, a[0]) - h(x, a[0]);
    return 0.5 * nphi(x, a[0], phi(x, a[1])) - (r * m.inner(xv, a[0])) * phi(x, a[1]) +
           m.inner(xv, a[1]) * pmh - (0.5 * m.inner(pmh, a[1])) * xv;
  });
  const VTensor H = c.H;
  c.tau = VTensor(1, [H, xi](const auto& x, auto a) {
    const auto xv = xi(x);
    return H(x, xv, a[0]) - H(x, a[0], xv);
  });
  return c;
}

VTensor canonical_deformation_dim5(const AcmStructure& s, double r) {
  require_contact_mode(s);
  const ManifoldDescriptor m = s.manifold;
  const VTensor phi = s.phi;
  const VTensor xi = s.xi;
  const VTensor h = h_field(s);
  return VTensor(2, [m, phi, xi, h, r](const auto& x, auto a) {
    const auto xv = xi(x);
    const auto etaX = m.inner(xv, a[0]);
    const auto pmh = phi(x, a[0]) - h(x, a[0]);
    return (0.5 * etaX) * h(x, a[1]) - (r * etaX) * phi(x, a[1]) + m.inner(xv, a[1]) * pmh -
           m.inner(pmh, a[1]) * xv;
  });
}

Vec deformation_tensor(const CanonicalConnection& c, const Vec& x, const Vec& u, const Vec& v) {
  return c.H(x, u, v);
}

Vec bar_derivative(const CanonicalConnection& c, const Vec& x, const Vec& u, const Vec& v) {
  const ManifoldDescriptor& m = c.base.manifold;
  return levi_civita(m, constant_field(m, u), constant_field(m, v))(x) + c.H(x, u, v);
}

VTensor bar_derivative_tensor(const CanonicalConnection& c, const VTensor& k) { return nabla(c.connection(), k); }
STensor bar_derivative_tensor(const CanonicalConnection& c, const STensor& k) { return nabla(c.connection(), k); }

VTensor bar_torsion_field(const CanonicalConnection& c) {
  const VTensor H = c.H;
  return VTensor(2, [H](const auto& x, auto a) { return H(x, a[0], a[1]) - H(x, a[1], a[0]); });
}

Vec bar_torsion(const CanonicalConnection& c, const Vec& x, const Vec& u, const Vec& v) {
  return c.H(x, u, v) - c.H(x, v, u);
}

Vec tau(const CanonicalConnection& c, const Vec& x, const Vec& u) { return c.tau(x, u); }

double TorsionResiduals::max() const {
  double out = 0.0;
  for (double v : {closed_form, half_form, tau_closed_form, tau_xi, tau_anticommutator, skew_on_d}) {
    if (!std::isnan(v)) out = std::max(out, v);
  }
  return out;
}

TorsionResiduals torsion_residuals(const CanonicalConnection& c, const Vec& x) {
  const AcmStructure& s = c.base;
  const double r = c.r;
  const VTensor nphi = nabla_phi_field(s);
  const Vec xi = s.xi(x);
  const auto frame = frame_with_xi(s, x);
  auto eta = [&](const Vec& v) { return s.g(xi, v); };
  auto phi = [&](const Vec& v) { return s.phi(x, v); };
  auto h = [&](const Vec& v) { return c.h(x, v); };

  TorsionResiduals out;
  out.closed_form = max_over_pairs(frame, frame, [&](const Vec& u, const Vec& v) {
    const Vec expected = nphi(x, u, phi(v)) - (r + 1.0) * (eta(u) * phi(v) - eta(v) * phi(u)) +
                         0.5 * eta(u) * h(v) - 1.5 * eta(v) * h(u) - s.g(phi(u) - h(u), v) * xi;
    return max_abs(bar_torsion(c, x, u, v) - expected);
  });
  if (r == 0.5 && s.manifold.dim() == 5) {
    out.half_form = max_over_pairs(frame, frame, [&](const Vec& u, const Vec& v) {
      const Vec expected = 1.5 * (eta(v) * (phi(u) - h(u)) - eta(u) * (phi(v) - h(v))) -
                           2.0 * s.g(phi(u) - h(u), v) * xi;
      return max_abs(bar_torsion(c, x, u, v) - expected);
    });
  } else {
    out.half_form = kNaN;
  }
  for (const Vec& u : frame) {
    out.tau_closed_form = std::max(out.tau_closed_form, max_abs(tau(c, x, u) - (1.5 * h(u) - (r + 1.0) * phi(u))));
    const Vec lhs = tau(c, x, phi(u)) + phi(tau(c, x, u));
    out.tau_anticommutator = std::max(out.tau_anticommutator, max_abs(lhs + 2.0 * (r + 1.0) * phi(phi(u))));
  }
  out.tau_xi = max_abs(tau(c, x, xi));
  const auto d = horizontal_frame(s, x);
  out.skew_on_d = max_over_triples(d, [&](const Vec& u, const Vec& v, const Vec& w) {
    return std::abs(s.g(bar_torsion(c, x, u, v), w) + s.g(bar_torsion(c, x, u, w), v));
  });
  return out;
}

DeformationResiduals deformation_residuals(const CanonicalConnection& c, const Vec& x) {
  const AcmStructure& s = c.base;
  const Vec xi = s.xi(x);
  const auto frame = frame_with_xi(s, x);
  DeformationResiduals out;
  out.xi_xi = max_abs(c.H(x, xi, xi));
  for (const Vec& u : frame) {
    out.x_xi = std::max(out.x_xi, max_abs(c.H(x, u, xi) - (s.phi(x, u) - c.h(x, u))));
  }
  out.dim5 = s.manifold.dim() == 5 ? max_diff(c.H, canonical_deformation_dim5(s, c.r), frame, x) : kNaN;
  return out;
}

ParallelismReport parallelism_report(const CanonicalConnection& c, const Vec& x) {
  const AcmStructure& s = c.base;
  s.manifold.require_point(x);
  const Connection conn = c.connection();
  const auto frame = orthonormal_frame(s.manifold, x);
  ParallelismReport out;

  const STensor ng = nabla(conn, metric_tensor(s.manifold));
  out.metric = max_over_triples(frame, [&](const Vec& u, const Vec& v, const Vec& w) { return std::abs(ng(x, u, v, w)); });
  const VTensor nphi = nabla(conn, s.phi);
  out.phi = max_over_pairs(frame, frame, [&](const Vec& u, const Vec& v) { return max_abs(nphi(x, u, v)); });
  const VTensor nxi = nabla(conn, s.xi);
  for (const Vec& u : frame) out.xi = std::max(out.xi, max_abs(nxi(x, u)));
  const VTensor nh = nabla(conn, c.h);
  out.h = max_over_pairs(frame, frame, [&](const Vec& u, const Vec& v) { return max_abs(nh(x, u, v)); });

  if (s.mode == Mode::NearlySasakian && s.manifold.dim() == 5) {
    const Su2Structure su = su2_from_nearly_sasakian(s, lambda_from_spectrum(s, x), {x});
    std::array<double, 3> om{};
    for (int i = 1; i <= 3; ++i) {
      const STensor nw = nabla(conn, su.omega(i));
      om[static_cast<std::size_t>(i - 1)] =
          max_over_triples(frame, [&](const Vec& u, const Vec& v, const Vec& w) { return std::abs(nw(x, u, v, w)); });
    }
    out.omega = om;
  }

  const VTensor nt = nabla(conn, bar_torsion_field(c));
  out.torsion = max_over_triples(frame, [&](const Vec& u, const Vec& v, const Vec& w) { return max_abs(nt(x, u, v, w)); });
  return out;
}

double bar_h_closed_form_residual(const CanonicalConnection& c, const Vec& x) {
  const AcmStructure& s = c.base;
  const VTensor nh = nabla(c.connection(), c.h);
  const Vec xi = s.xi(x);
  const auto frame = frame_with_xi(s, x);
  return max_over_pairs(frame, frame, [&](const Vec& u, const Vec& v) {
    const Vec expected = ((1.0 - 2.0 * c.r) * s.g(xi, u)) * s.phi(x, c.h(x, v));
    return max_abs(nh(x, u, v) - expected);
  });
}

double bar_h_xi_ratio(const CanonicalConnection& c, const Vec& x) {
  const AcmStructure& s = c.base;
  const VTensor nh = nabla(c.connection(), c.h);
  const Vec xi = s.xi(x);
  double num = 0.0;
  double den = 0.0;
  for (const Vec& v : orthonormal_frame(s.manifold, x)) {
    num = std::max(num, norm(nh(x, xi, v)));
    den = std::max(den, norm(s.phi(x, c.h(x, v))));
  }
  if (den == 0.0) throw Error(ErrorCode::InvalidArgument, "φh vanishes; the ratio is undefined");
  return num / den;
}

VTensor okumura_tensor(const AcmStructure& s, double r) {
  const ManifoldDescriptor m = s.manifold;
  const VTensor phi = s.phi;
  const VTensor xi = s.xi;
  return VTensor(2, [m, phi, xi, r](const auto& x, auto a) {
    const auto xv = xi(x);
    return m.inner(a[0], phi(x, a[1])) * xv - (r * m.inner(xv, a[0])) * phi(x, a[1]) +
           m.inner(xv, a[1]) * phi(x, a[0]);
  });
}

Vec okumura(const AcmStructure& s, double r, const Vec& x, const Vec& u, const Vec& v) {
  return okumura_tensor(s, r)(x, u, v);
}

std::array<double, 3> okumura_su2_check(const Su2Structure& s, double r, const Vec& x) {
  if (s.kind != Su2Kind::SasakiEinstein) {
    throw Error(ErrorCode::InvalidArgument, "Okumura check needs a Sasaki-Einstein structure");
  }
  const Connection conn = Connection::with_deformation(s.manifold, okumura_tensor(s.acm(3, Mode::Sasakian), r));
  const auto frame = orthonormal_frame(s.manifold, x);
  std::array<double, 3> out{};
  for (int i = 1; i <= 3; ++i) {
    const VTensor np = nabla(conn, s.phi_i(i));
    out[static_cast<std::size_t>(i - 1)] =
        max_over_pairs(frame, frame, [&](const Vec& u, const Vec& v) { return max_abs(np(x, u, v)); });
  }
  return out;
}

double canonical_okumura_residual(const AcmStructure& ns, double lambda, double r, const Vec& x) {
  const Deformation d = deform_ns_to_se(su2_from_nearly_sasakian(ns, lambda, {x}));
  const AcmStructure se = d.structure.acm(3, Mode::Sasakian);
  return max_diff(canonical_connection(ns, r).H, okumura_tensor(se, r), frame_with_xi(ns, x), x);
}

double sasakian_reduction_residual(const AcmStructure& sasakian, double r, const Vec& x) {
  return max_diff(canonical_connection(sasakian, r).H, okumura_tensor(sasakian, r), frame_with_xi(sasakian, x), x);
}

double torsion_skew_defect(const CanonicalConnection& c, const Vec& x) {
  const AcmStructure& s = c.base;
  return max_over_triples(frame_with_xi(s, x), [&](const Vec& u, const Vec& v, const Vec& w) {
    return std::abs(s.g(bar_torsion(c, x, u, v), w) + s.g(bar_torsion(c, x, u, w), v));
  });
}

}  // namespace cforge
