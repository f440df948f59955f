#include "cforge/su2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/QR>

#include "cforge/hypersurface.hpp"
#include "cforge/spectral.hpp"

namespace cforge {

const char* to_string(Su2Kind kind) {
  switch (kind) {
    case Su2Kind::NearlySasakian: return "nearly-sasakian";
    case Su2Kind::NearlyCosymplectic: return "nearly-cosymplectic";
    case Su2Kind::SasakiEinstein: return "sasaki-einstein";
  }
  return "unknown";
}

STensor Su2Structure::eta() const {
  return STensor(1, [m = manifold, xi = xi](const auto& x, auto args) { return m.inner(xi(x), args[0]); });
}

STensor Su2Structure::omega(int i) const {
  return STensor(2, [m = manifold, p = phi_i(i)](const auto& x, auto args) {
    return m.inner(p(x, args[0]), args[1]);
  });
}

AcmStructure Su2Structure::acm(int i, Mode mode) const { return {manifold, phi_i(i), xi, mode}; }

Su2Forms forms_of(const Su2Structure& s) { return {s.eta(), {s.omega(1), s.omega(2), s.omega(3)}}; }

double lambda_from_spectrum(const AcmStructure& s, const Vec& x) {
  const VTensor h = h_field(s);
  double tr = 0.0;
  for (const Vec& e : orthonormal_frame(s.manifold, x)) tr += s.g(h(x, h(x, e)), e);
  return std::sqrt(std::max(0.0, -tr / 4.0));
}

namespace {

void require_five(const AcmStructure& s, Mode mode, double lambda) {
  if (s.manifold.dim() != 5) throw Error(ErrorCode::InvalidArgument, "SU(2)-structures need a 5-manifold");
  if (s.mode != mode) throw Error(ErrorCode::InvalidArgument, std::string("structure is not ") + to_string(mode));
  if (lambda == 0.0) throw Error(ErrorCode::InvalidArgument, "lambda must be nonzero");
}

void check_spectrum(const AcmStructure& s, double lambda, const std::vector<Vec>& probe) {
  const VTensor h = h_field(s);
  const double l2 = lambda * lambda;
  for (const Vec& x : probe) {
    const Vec xi = s.xi(x);
    for (const Vec& e : orthonormal_frame(s.manifold, x)) {
      const Vec r = h(x, h(x, e)) + l2 * (e - s.g(xi, e) * xi);
      if (max_abs(r) > kSpectrumTol * std::max(1.0, l2)) {
        throw Error(ErrorCode::SpectrumMismatch, "h² differs from −λ²(I − η⊗ξ) for λ = " + std::to_string(lambda));
      }
    }
  }
}

std::vector<Vec> default_probe(const AcmStructure& s) { return sample_points(s.manifold, 5, 0x5eed); }

}  // namespace

Su2Structure su2_from_nearly_sasakian(const AcmStructure& s, double lambda, const std::vector<Vec>& probe) {
  require_five(s, Mode::NearlySasakian, lambda);
  check_spectrum(s, lambda, probe);
  const VTensor h = h_field(s);
  Su2Structure out;
  out.manifold = s.manifold;
  out.xi = s.xi;
  out.phi = {(1.0 / lambda) * h, (1.0 / lambda) * compose(s.phi, h), s.phi};
  out.lambda = lambda;
  out.kind = Su2Kind::NearlySasakian;
  return out;
}

Su2Structure su2_from_nearly_sasakian(const AcmStructure& s, double lambda) {
  return su2_from_nearly_sasakian(s, lambda, default_probe(s));
}

Su2Structure su2_from_nearly_cosymplectic(const AcmStructure& s, double lambda, const std::vector<Vec>& probe) {
  require_five(s, Mode::NearlyCosymplectic, lambda);
  check_spectrum(s, lambda, probe);
  const VTensor h = h_field(s);
  Su2Structure out;
  out.manifold = s.manifold;
  out.xi = s.xi;
  out.phi = {(-1.0 / lambda) * compose(s.phi, h), s.phi, (-1.0 / lambda) * h};
  out.lambda = lambda;
  out.kind = Su2Kind::NearlyCosymplectic;
  return out;
}

Su2Structure su2_from_nearly_cosymplectic(const AcmStructure& s, double lambda) {
  return su2_from_nearly_cosymplectic(s, lambda, default_probe(s));
}

namespace {

// Orthonormal frame at one point and coordinates in it.
struct Frame {
  std::vector<Vec> e;
  double c = 1.0;
  Eigen::Index n = 0;

  Frame(const ManifoldDescriptor& m, const Vec& x) : e(orthonormal_frame(m, x)), c(m.metric_scale) {
    n = static_cast<Eigen::Index>(e.size());
  }
  Eigen::VectorXd coords(const Vec& v) const {
    Eigen::VectorXd out(n);
    for (Eigen::Index a = 0; a < n; ++a) out(a) = c * dot(v, e[static_cast<std::size_t>(a)]);
    return out;
  }
};

FormAtPoint at(const STensor& f, const Vec& x) {
  return {f.arity(), [f, x](std::span<const Vec> v) { return f.eval(x, v); }};
}

FormAtPoint scaled(double k, const FormAtPoint& f) {
  return {f.degree, [k, f](std::span<const Vec> v) { return k * f.eval(v); }};
}

FormAtPoint sum(const FormAtPoint& a, const FormAtPoint& b) {
  return {a.degree, [a, b](std::span<const Vec> v) { return a.eval(v) + b.eval(v); }};
}

FormAtPoint zero_form(int degree) {
  return {degree, [](std::span<const Vec>) { return 0.0; }};
}

// Calls f on every increasing k-tuple of frame vectors.
template <class F>
void for_each_increasing(const Frame& frame, int k, F f) {
  const int n = static_cast<int>(frame.n);
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  std::vector<Vec> args(static_cast<std::size_t>(k));
  while (true) {
    for (std::size_t i = 0; i < args.size(); ++i) args[i] = frame.e[static_cast<std::size_t>(idx[i])];
    f(std::span<const Vec>(args));
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

// max over increasing frame tuples of |dα − β|, both of degree p + 1.
double equation_residual(const ManifoldDescriptor& m, const Vec& x, const Frame& f, const STensor& alpha,
                         const FormAtPoint& beta) {
  double r = 0.0;
  for_each_increasing(f, alpha.arity() + 1, [&](std::span<const Vec> args) {
    r = std::max(r, std::abs(exterior_derivative(m, alpha, x, args) - beta.eval(args)));
  });
  return r;
}

// max over increasing frame tuples of |α − β| (same degree).
double form_difference(const Frame& f, const FormAtPoint& a, const FormAtPoint& b) {
  double r = 0.0;
  for_each_increasing(f, a.degree, [&](std::span<const Vec> args) {
    r = std::max(r, std::abs(a.eval(args) - b.eval(args)));
  });
  return r;
}

struct FormsAt {
  FormAtPoint eta;
  std::array<FormAtPoint, 3> w;
  FormsAt(const Su2Structure& s, const Vec& x)
      : eta(at(s.eta(), x)), w{at(s.omega(1), x), at(s.omega(2), x), at(s.omega(3), x)} {}
  FormAtPoint eta_w(int i, double k) const { return scaled(k, wedge(eta, w[static_cast<std::size_t>(i - 1)])); }
};

}  // namespace

double Su2Algebra::max_residual() const { return std::max({omega_phi, quaternionic, squares, wedge}); }

Su2Algebra su2_algebra(const Su2Structure& s, const Vec& x, std::uint64_t seed) {
  s.manifold.require_point(x);
  const Frame f(s.manifold, x);
  const Eigen::VectorXd xi = f.coords(s.xi(x));
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(f.n, f.n);
  std::array<Eigen::MatrixXd, 3> p;
  std::array<Eigen::MatrixXd, 3> w;
  for (int i = 1; i <= 3; ++i) {
    p[static_cast<std::size_t>(i - 1)] = frame_matrix(s.manifold, s.phi_i(i), x);
    Eigen::MatrixXd m(f.n, f.n);
    const STensor om = s.omega(i);
    for (Eigen::Index a = 0; a < f.n; ++a) {
      for (Eigen::Index b = 0; b < f.n; ++b) {
        m(a, b) = om(x, f.e[static_cast<std::size_t>(a)], f.e[static_cast<std::size_t>(b)]);
      }
    }
    w[static_cast<std::size_t>(i - 1)] = m;
  }
  Su2Algebra out;
  for (std::size_t i = 0; i < 3; ++i) {
    // ω_i(e_a, e_b) = g(φ_i e_a, e_b) = P_i(b, a).
    out.omega_phi = std::max(out.omega_phi, (w[i] - p[i].transpose()).cwiseAbs().maxCoeff());
    out.squares = std::max(out.squares, (p[i] * p[i] + id - xi * xi.transpose()).cwiseAbs().maxCoeff());
  }
  const std::array<std::array<int, 3>, 3> even{{{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}};
  for (const auto& t : even) {
    const auto& pi = p[static_cast<std::size_t>(t[0])];
    const auto& pj = p[static_cast<std::size_t>(t[1])];
    const auto& pk = p[static_cast<std::size_t>(t[2])];
    out.quaternionic = std::max({out.quaternionic, (pi * pj - pk).cwiseAbs().maxCoeff(),
                                 (pj * pi + pk).cwiseAbs().maxCoeff()});
  }
  const FormsAt forms(s, x);
  const FormAtPoint v = wedge(forms.w[0], forms.w[0]);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const FormAtPoint wij = wedge(forms.w[static_cast<std::size_t>(i)], forms.w[static_cast<std::size_t>(j)]);
      out.wedge = std::max(out.wedge, form_difference(f, wij, i == j ? v : zero_form(4)));
    }
  }
  out.volume = std::abs(wedge(v, forms.eta).eval(f.e));
  // Orientation: solve X⌟ω₁ = Y⌟ω₂ for Y and evaluate ω₃(X,Y).
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  out.orientation = std::numeric_limits<double>::infinity();
  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> solve(w[1].transpose());
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXd xv(f.n);
    for (Eigen::Index a = 0; a < f.n; ++a) xv(a) = gauss(rng);
    const Eigen::VectorXd yv = solve.solve(w[0].transpose() * xv);
    out.orientation = std::min(out.orientation, xv.dot(w[2] * yv));
  }
  return out;
}

std::vector<EquationResidual> kind_equations(const Su2Structure& s, const Vec& x) {
  s.manifold.require_point(x);
  const Frame f(s.manifold, x);
  const FormsAt a(s, x);
  const ManifoldDescriptor& m = s.manifold;
  const double l = s.lambda;
  const STensor eta = s.eta();
  std::vector<EquationResidual> out;
  switch (s.kind) {
    case Su2Kind::NearlySasakian:
      out.push_back({"d_eta", "dη = −2ω₃ + 2λω₁",
                     equation_residual(m, x, f, eta, sum(scaled(-2.0, a.w[2]), scaled(2.0 * l, a.w[0])))});
      out.push_back({"d_omega1", "dω₁ = 3η∧ω₂", equation_residual(m, x, f, s.omega(1), a.eta_w(2, 3.0))});
      out.push_back({"d_omega2", "dω₂ = −3η∧ω₁ − 3λη∧ω₃",
                     equation_residual(m, x, f, s.omega(2), sum(a.eta_w(1, -3.0), a.eta_w(3, -3.0 * l)))});
      break;
    case Su2Kind::NearlyCosymplectic:
      out.push_back({"d_eta", "dη = −2λω₃", equation_residual(m, x, f, eta, scaled(-2.0 * l, a.w[2]))});
      out.push_back({"d_omega1", "dω₁ = 3λη∧ω₂", equation_residual(m, x, f, s.omega(1), a.eta_w(2, 3.0 * l))});
      out.push_back({"d_omega2", "dω₂ = −3λη∧ω₁", equation_residual(m, x, f, s.omega(2), a.eta_w(1, -3.0 * l))});
      break;
    case Su2Kind::SasakiEinstein:
      out.push_back({"d_eta", "dη = −2ω₃", equation_residual(m, x, f, eta, scaled(-2.0, a.w[2]))});
      out.push_back({"d_omega1", "dω₁ = 3η∧ω₂", equation_residual(m, x, f, s.omega(1), a.eta_w(2, 3.0))});
      out.push_back({"d_omega2", "dω₂ = −3η∧ω₁", equation_residual(m, x, f, s.omega(2), a.eta_w(1, -3.0))});
      break;
  }
  return out;
}

std::vector<EquationResidual> hypo_equations(const Su2Structure& s, const Vec& x) {
  s.manifold.require_point(x);
  const Frame f(s.manifold, x);
  const ManifoldDescriptor& m = s.manifold;
  const STensor eta = s.eta();
  return {
      {"hypo_d_omega3", "dω₃ = 0", equation_residual(m, x, f, s.omega(3), zero_form(3))},
      {"hypo_d_eta_omega1", "d(η∧ω₁) = 0", equation_residual(m, x, f, wedge(eta, s.omega(1)), zero_form(4))},
      {"hypo_d_eta_omega2", "d(η∧ω₂) = 0", equation_residual(m, x, f, wedge(eta, s.omega(2)), zero_form(4))},
  };
}

std::vector<EquationResidual> nearly_hypo_equations(const Su2Structure& s, const Vec& x) {
  s.manifold.require_point(x);
  const Frame f(s.manifold, x);
  const FormsAt a(s, x);
  const ManifoldDescriptor& m = s.manifold;
  return {
      {"nearly_hypo_d_omega1", "dω₁ = 3η∧ω₂", equation_residual(m, x, f, s.omega(1), a.eta_w(2, 3.0))},
      {"nearly_hypo_d_eta_omega3", "d(η∧ω₃) = −2ω₁∧ω₁",
       equation_residual(m, x, f, wedge(s.eta(), s.omega(3)), scaled(-2.0, wedge(a.w[0], a.w[0])))},
  };
}

std::vector<EquationResidual> structure_equation_residuals(const Su2Structure& s, const Vec& x) {
  std::vector<EquationResidual> out = kind_equations(s, x);
  for (auto& e : hypo_equations(s, x)) out.push_back(std::move(e));
  for (auto& e : nearly_hypo_equations(s, x)) out.push_back(std::move(e));
  return out;
}

namespace {

Su2Forms combine_forms(const Su2Forms& f, double ke, const std::array<std::array<double, 3>, 3>& mix) {
  Su2Forms out;
  out.eta = ke * f.eta;
  for (std::size_t i = 0; i < 3; ++i) {
    STensor acc = mix[i][0] * f.omega[0];
    acc = acc + mix[i][1] * f.omega[1];
    acc = acc + mix[i][2] * f.omega[2];
    out.omega[i] = acc;
  }
  return out;
}

void require_kind(const Su2Structure& s, Su2Kind kind) {
  if (s.kind != kind) {
    throw Error(ErrorCode::InvalidArgument, std::string("deformation expects a ") + to_string(kind) + " structure");
  }
}

}  // namespace

Deformation deform_ns_to_se(const Su2Structure& s) {
  require_kind(s, Su2Kind::NearlySasakian);
  const double l = s.lambda;
  const double q = std::sqrt(1.0 + l * l);
  Deformation d;
  Su2Structure& t = d.structure;
  t.manifold = s.manifold.with_metric_scale(1.0 + l * l);
  t.xi = (1.0 / q) * s.xi;
  t.phi = {(1.0 / q) * (s.phi[0] + l * s.phi[2]), s.phi[1], (1.0 / q) * (s.phi[2] - l * s.phi[0])};
  t.lambda = l;
  t.kind = Su2Kind::SasakiEinstein;
  d.forms = combine_forms(forms_of(s), q, {{{q, 0.0, q * l}, {0.0, q * q, 0.0}, {-q * l, 0.0, q}}});
  return d;
}

Deformation deform_se_to_ns(const Su2Structure& s, double lambda) {
  require_kind(s, Su2Kind::SasakiEinstein);
  if (lambda == 0.0) throw Error(ErrorCode::InvalidArgument, "lambda must be nonzero");
  const double l = lambda;
  const double q = std::sqrt(1.0 + l * l);
  const double q3 = q * q * q;
  Deformation d;
  Su2Structure& t = d.structure;
  t.manifold = s.manifold.with_metric_scale(1.0 / (1.0 + l * l));
  t.xi = q * s.xi;
  t.phi = {(1.0 / q) * (s.phi[0] - l * s.phi[2]), s.phi[1], (1.0 / q) * (s.phi[2] + l * s.phi[0])};
  t.lambda = l;
  t.kind = Su2Kind::NearlySasakian;
  d.forms = combine_forms(forms_of(s), 1.0 / q,
                          {{{1.0 / q3, 0.0, -l / q3}, {0.0, 1.0 / (q * q), 0.0}, {l / q3, 0.0, 1.0 / q3}}});
  return d;
}

Deformation deform_nc_to_se(const Su2Structure& s) {
  require_kind(s, Su2Kind::NearlyCosymplectic);
  const double l = s.lambda;
  Deformation d;
  Su2Structure& t = d.structure;
  t.manifold = s.manifold.with_metric_scale(l * l);
  t.xi = (1.0 / l) * s.xi;
  t.phi = s.phi;
  t.lambda = l;
  t.kind = Su2Kind::SasakiEinstein;
  const double l2 = l * l;
  d.forms = combine_forms(forms_of(s), l, {{{l2, 0.0, 0.0}, {0.0, l2, 0.0}, {0.0, 0.0, l2}}});
  return d;
}

Deformation deform_se_to_nc(const Su2Structure& s, double lambda) {
  require_kind(s, Su2Kind::SasakiEinstein);
  if (lambda == 0.0) throw Error(ErrorCode::InvalidArgument, "lambda must be nonzero");
  const double l = lambda;
  Deformation d;
  Su2Structure& t = d.structure;
  t.manifold = s.manifold.with_metric_scale(1.0 / (l * l));
  t.xi = l * s.xi;
  t.phi = s.phi;
  t.lambda = l;
  t.kind = Su2Kind::NearlyCosymplectic;
  const double k = 1.0 / (l * l);
  d.forms = combine_forms(forms_of(s), 1.0 / l, {{{k, 0.0, 0.0}, {0.0, k, 0.0}, {0.0, 0.0, k}}});
  return d;
}

double form_consistency_residual(const Deformation& d, const Vec& x) {
  const Su2Structure& s = d.structure;
  const Frame f(s.manifold, x);
  const FormsAt tensor(s, x);
  double r = form_difference(f, tensor.eta, at(d.forms.eta, x));
  for (std::size_t i = 0; i < 3; ++i) r = std::max(r, form_difference(f, tensor.w[i], at(d.forms.omega[i], x)));
  return r;
}

double structure_distance(const Su2Structure& a, const Su2Structure& b, const Vec& x) {
  double r = std::max(std::abs(a.manifold.metric_scale - b.manifold.metric_scale), std::abs(a.lambda - b.lambda));
  r = std::max(r, max_abs(a.xi(x) - b.xi(x)));
  for (const Vec& e : orthonormal_frame(a.manifold, x)) {
    for (int i = 1; i <= 3; ++i) r = std::max(r, max_abs(a.phi_i(i)(x, e) - b.phi_i(i)(x, e)));
  }
  return r;
}

double sasakian_nijenhuis_residual(const AcmStructure& s, const Vec& x) {
  const auto frame = orthonormal_frame(s.manifold, x);
  double r = 0.0;
  for (std::size_t i = 0; i < frame.size(); ++i) {
    for (std::size_t j = i + 1; j < frame.size(); ++j) r = std::max(r, max_abs(nijenhuis(s, x, frame[i], frame[j])));
  }
  return r;
}

double sasakian_contact_residual(const AcmStructure& s, const Vec& x) {
  const auto frame = orthonormal_frame(s.manifold, x);
  const STensor eta = s.eta();
  const STensor Phi = s.fundamental_form();
  double r = 0.0;
  for (std::size_t i = 0; i < frame.size(); ++i) {
    for (std::size_t j = i + 1; j < frame.size(); ++j) {
      const std::array<Vec, 2> args{frame[i], frame[j]};
      r = std::max(r, std::abs(exterior_derivative(s.manifold, eta, x, args) - 2.0 * Phi(x, frame[i], frame[j])));
    }
  }
  return r;
}

PartnerCheck se_partner_check(const Su2Structure& s, const Vec& x) {
  require_kind(s, Su2Kind::SasakiEinstein);
  s.manifold.require_point(x);
  PartnerCheck out;
  const auto frame = orthonormal_frame(s.manifold, x);
  for (int i = 1; i <= 2; ++i) {
    const AcmStructure a = s.acm(i, Mode::NearlyCosymplectic);
    double r = 0.0;
    for (const Vec& u : frame) {
      for (const Vec& v : frame) r = std::max(r, max_abs(nearly_cosymplectic_defect(a, x, u, v)));
    }
    (i == 1 ? out.phi1_nc : out.phi2_nc) = r;
  }
  const AcmStructure a3 = s.acm(3, Mode::Sasakian);
  out.phi3_nijenhuis = sasakian_nijenhuis_residual(a3, x);
  out.phi3_contact = sasakian_contact_residual(a3, x);
  return out;
}

double lie_partner_residual(const AcmStructure& ns, double lambda, const Vec& x) {
  const Deformation d = deform_ns_to_se(su2_from_nearly_sasakian(ns, lambda));
  double r = 0.0;
  for (const Vec& e : orthonormal_frame(ns.manifold, x)) {
    const Vec lie = lie_derivative_phi(ns, x, e);
    r = std::max(r, max_abs(d.structure.phi[1](x, e) - (1.0 / (3.0 * lambda)) * lie));
  }
  return r;
}

namespace {

// dω_i as a trilinear form at x, from its values on the frame.
struct Trilinear {
  const Frame* f = nullptr;
  std::vector<double> t;  // n³, fully antisymmetric

  double operator()(const Vec& u, const Vec& v, const Vec& w) const {
    const Eigen::VectorXd a = f->coords(u);
    const Eigen::VectorXd b = f->coords(v);
    const Eigen::VectorXd c = f->coords(w);
    const auto n = f->n;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) acc += t[static_cast<std::size_t>((i * n + j) * n + k)] * a(i) * b(j) * c(k);
      }
    }
    return acc;
  }
};

Trilinear freeze_d(const ManifoldDescriptor& m, const Frame& f, const STensor& form2, const Vec& x) {
  Trilinear out{&f, std::vector<double>(static_cast<std::size_t>(f.n * f.n * f.n), 0.0)};
  const auto n = f.n;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index k = 0; k < n; ++k) {
        if (i == j || j == k || i == k) continue;
        const std::array<Vec, 3> args{f.e[static_cast<std::size_t>(i)], f.e[static_cast<std::size_t>(j)],
                                      f.e[static_cast<std::size_t>(k)]};
        out.t[static_cast<std::size_t>((i * n + j) * n + k)] = exterior_derivative(m, form2, x, args);
      }
    }
  }
  return out;
}

constexpr std::array<std::array<int, 3>, 3> kEven{{{1, 2, 3}, {2, 3, 1}, {3, 1, 2}}};

}  // namespace

double nijenhuis_form_residual(const Su2Structure& s, const Vec& x) {
  s.manifold.require_point(x);
  const Frame f(s.manifold, x);
  std::array<Trilinear, 3> dw;
  for (int i = 1; i <= 3; ++i) dw[static_cast<std::size_t>(i - 1)] = freeze_d(s.manifold, f, s.omega(i), x);
  double r = 0.0;
  for (const auto& t : kEven) {
    const int i = t[0];
    const Trilinear& dj = dw[static_cast<std::size_t>(t[1] - 1)];
    const Trilinear& dk = dw[static_cast<std::size_t>(t[2] - 1)];
    const AcmStructure ai = s.acm(i, Mode::Unset);
    const VTensor& pi = s.phi_i(i);
    const VTensor& pj = s.phi_i(t[1]);
    for (const Vec& u : f.e) {
      for (const Vec& v : f.e) {
        const Vec n = nijenhuis(ai, x, u, v);
        const Vec piu = pi(x, u);
        const Vec piv = pi(x, v);
        for (const Vec& w : f.e) {
          const double lhs = s.g(n, pj(x, w));
          const double rhs = -dj(u, v, w) + dj(piu, piv, w) + dk(piu, v, w) + dk(u, piv, w);
          r = std::max(r, std::abs(lhs - rhs));
        }
      }
    }
  }
  return r;
}

double nabla_phi_form_residual(const Su2Structure& s, const Vec& x) {
  s.manifold.require_point(x);
  const Frame f(s.manifold, x);
  std::array<Trilinear, 3> dw;
  for (int i = 1; i <= 3; ++i) dw[static_cast<std::size_t>(i - 1)] = freeze_d(s.manifold, f, s.omega(i), x);
  const STensor eta = s.eta();
  const Vec xi = s.xi(x);
  auto deta = [&](const Vec& u, const Vec& v) {
    const std::array<Vec, 2> args{u, v};
    return exterior_derivative(s.manifold, eta, x, args);
  };
  auto et = [&](const Vec& u) { return s.g(xi, u); };
  double r = 0.0;
  for (const auto& t : kEven) {
    const int i = t[0];
    const Trilinear& di = dw[static_cast<std::size_t>(i - 1)];
    const Trilinear& dj = dw[static_cast<std::size_t>(t[1] - 1)];
    const Trilinear& dk = dw[static_cast<std::size_t>(t[2] - 1)];
    const VTensor& pi = s.phi_i(i);
    const VTensor& pk = s.phi_i(t[2]);
    const VTensor nphi = nabla(Connection::levi_civita(s.manifold), pi);
    for (const Vec& X : f.e) {
      const Vec pkX = pk(x, X);
      for (const Vec& Y : f.e) {
        const Vec npY = nphi(x, X, Y);
        const Vec piY = pi(x, Y);
        for (const Vec& Z : f.e) {
          const Vec piZ = pi(x, Z);
          const double lhs = 2.0 * s.g(npY, Z);
          const double rhs = -di(X, piY, piZ) + di(X, Y, Z) - dj(Y, Z, pkX) + dj(piY, piZ, pkX) + dk(Y, piZ, pkX) +
                             dk(piY, Z, pkX) + deta(piY, Z) * et(X) - deta(piZ, Y) * et(X) + deta(piY, X) * et(Z) -
                             deta(piZ, X) * et(Y);
          r = std::max(r, std::abs(lhs - rhs));
        }
      }
    }
  }
  return r;
}

AcmStructure rescaled_nearly_cosymplectic(double lambda) {
  if (lambda == 0.0) throw Error(ErrorCode::InvalidArgument, "lambda must be nonzero");
  const double l = std::abs(lambda);
  const AcmStructure base = structure_by_name("s5-geodesic");
  AcmStructure out;
  out.manifold = s5_geodesic_descriptor();
  out.manifold.label = "s5-geodesic-radius-" + std::to_string(1.0 / l);
  out.manifold.radius = 1.0 / l;
  out.mode = Mode::NearlyCosymplectic;
  // Pull back along y = λx: φ is unchanged, ξ keeps Euclidean length 1 for the new metric.
  out.phi = VTensor(1, [base, l](const auto& x, auto args) { return base.phi(l * x, args[0]); });
  out.xi = VTensor(0, [base, l](const auto& x, auto) { return base.xi(l * x); });
  return out;
}

}  // namespace cforge
