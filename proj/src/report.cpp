#include "cforge/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

#include "cforge/connections.hpp"
#include "cforge/hypersurface.hpp"
#include "cforge/spectral.hpp"
#include "cforge/su2.hpp"

namespace cforge {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Tolerances by family.
constexpr double kAxiomTol = 1e-10;
constexpr double kDefectTol = 1e-9;
constexpr double kIdentityTol = 1e-8;
constexpr double kDerivedTol = 1e-7;
constexpr double kRoundtripTol = 1e-10;
constexpr double kCurvatureTol = 1e-6;
constexpr double kRicciTol = 1e-7;
constexpr double kDeformedCurvatureTol = 1e-5;
constexpr double kOctonionTol = 1e-12;
constexpr int kOctonionPairs = 1000;

const std::vector<std::string>& all_suites() {
  static const std::vector<std::string> names{"acm-axioms", "nearly-sasakian", "nearly-cosymplectic", "su2",
                                              "deformations", "spectral",   "contact",  "curvature",
                                              "hypersurface", "connections"};
  return names;
}

bool is_hypersurface(const std::string& manifold) {
  const auto names = hypersurface_names();
  return std::find(names.begin(), names.end(), manifold) != names.end();
}

// Suites that run on a manifold as part of "all".
std::vector<std::string> default_suites(const std::string& manifold) {
  if (!is_hypersurface(manifold)) return {"curvature", "hypersurface"};
  const Mode mode = hypersurface_by_name(manifold).mode;
  std::vector<std::string> out{"acm-axioms"};
  out.push_back(mode == Mode::NearlySasakian ? "nearly-sasakian" : "nearly-cosymplectic");
  for (const char* s : {"su2", "deformations", "spectral", "contact", "curvature", "hypersurface"}) out.push_back(s);
  if (mode == Mode::NearlySasakian) out.push_back("connections");
  return out;
}

void require_applicable(const std::string& suite, const std::string& manifold) {
  if (suite == "all" || suite == "curvature" || suite == "hypersurface") return;
  if (!is_hypersurface(manifold)) {
    throw Error(ErrorCode::Config, "suite '" + suite + "' needs an almost contact structure; '" + manifold +
                                       "' has none");
  }
  if (suite == "connections" && hypersurface_by_name(manifold).mode != Mode::NearlySasakian) {
    throw Error(ErrorCode::Config, "suite 'connections' needs a nearly Sasakian structure");
  }
}

CheckGroup point_group(std::vector<CheckDef> defs, std::function<std::vector<double>(const Vec&)> f) {
  CheckGroup g;
  g.checks = std::move(defs);
  g.at_point = std::move(f);
  return g;
}

CheckGroup global_group(std::vector<CheckDef> defs, std::function<std::vector<double>(const std::vector<Vec>&)> f,
                        int points = 0) {
  CheckGroup g;
  g.checks = std::move(defs);
  g.global = std::move(f);
  g.global_points = points;
  return g;
}

// A group whose checks all fail with the given error (construction failures).
CheckGroup failed_group(std::vector<CheckDef> defs, const std::string& message) {
  return point_group(std::move(defs), [message](const Vec&) -> std::vector<double> {
    throw Error(ErrorCode::InvalidArgument, message);
  });
}

void append(std::vector<CheckGroup>& out, std::vector<CheckGroup> more) {
  for (auto& g : more) out.push_back(std::move(g));
}

std::vector<CheckGroup> from_point_checks(const std::vector<PointCheck>& checks, double tol) {
  std::vector<CheckGroup> out;
  for (const auto& c : checks) out.push_back(single(c, tol));
  return out;
}

std::vector<double> values_of(const std::vector<EquationResidual>& eqs) {
  std::vector<double> out;
  for (const auto& e : eqs) out.push_back(e.value);
  return out;
}

std::vector<CheckDef> defs_of(const std::vector<EquationResidual>& eqs, const std::string& prefix, double tol) {
  std::vector<CheckDef> out;
  for (const auto& e : eqs) out.push_back({prefix + e.name, e.formula, tol, Bound::Upper});
  return out;
}

// ---------------------------------------------------------------- suites

std::vector<CheckGroup> nearly_class_suite(const AcmStructure& s, bool sasakian) {
  std::vector<CheckGroup> out = from_point_checks(
      sasakian ? nearly_sasakian_defect_checks(s) : nearly_cosymplectic_defect_checks(s), kDefectTol);
  append(out, from_point_checks(reeb_checks(s), kDefectTol));
  const Mode wanted = sasakian ? Mode::NearlySasakian : Mode::NearlyCosymplectic;
  if (s.mode == wanted) append(out, from_point_checks(identity_suite(s), kIdentityTol));
  return out;
}

Su2Structure su2_of(const AcmStructure& s, const Vec& probe) {
  const double lambda = lambda_from_spectrum(s, probe);
  return s.mode == Mode::NearlySasakian ? su2_from_nearly_sasakian(s, lambda) : su2_from_nearly_cosymplectic(s, lambda);
}

std::vector<CheckDef> su2_defs(const AcmStructure& s, const Vec& probe) {
  const bool ns = s.mode == Mode::NearlySasakian;
  std::vector<CheckDef> defs{
      {"su2_omega_phi", "ω_i(X,Y) = g(φ_iX,Y)", 1e-9, Bound::Upper},
      {"su2_quaternionic", "φ_iφ_j = φ_k = −φ_jφ_i", 1e-9, Bound::Upper},
      {"su2_squares", "φ_i² = −I + η⊗ξ", 1e-9, Bound::Upper},
      {"su2_wedge", "ω_i∧ω_j = δ_ij v", 1e-9, Bound::Upper},
      {"su2_volume", "|v∧η| on a frame, bounded below", 0.1, Bound::Lower},
      {"su2_orientation", "ω₃(X,Y) ≥ 0 whenever X⌟ω₁ = Y⌟ω₂", -1e-9, Bound::Lower},
  };
  // Names and formulas of the equation residuals do not depend on the point.
  const Su2Structure su = su2_of(s, probe);
  for (auto& d : defs_of(kind_equations(su, probe), "su2_", kIdentityTol)) defs.push_back(d);
  const auto weak = ns ? nearly_hypo_equations(su, probe) : hypo_equations(su, probe);
  for (auto& d : defs_of(weak, "su2_", kIdentityTol)) defs.push_back(d);
  defs.push_back({"su2_nijenhuis_forms", "g(N_{φ_i}(X,Y),φ_jZ) in terms of dω and dη", kDerivedTol, Bound::Upper});
  defs.push_back({"su2_nabla_phi_forms", "2g((∇_Xφ_i)Y,Z) in terms of dω and dη", kDerivedTol, Bound::Upper});
  if (ns) defs.push_back({"su2_lie_partner", "φ̃₂ = (1/(3λ)) L_ξφ", kIdentityTol, Bound::Upper});
  return defs;
}

std::vector<CheckGroup> su2_suite(const AcmStructure& s, const Vec& probe) {
  std::vector<CheckDef> defs;
  try {
    defs = su2_defs(s, probe);
  } catch (const Error& e) {
    return {failed_group({{"su2_construction", "SU(2)-structure from the spectrum of h", 0.0, Bound::Upper}}, e.what())};
  }
  const Su2Structure su = su2_of(s, probe);
  const bool ns = s.mode == Mode::NearlySasakian;
  return {point_group(defs, [su, s, ns](const Vec& x) {
    const Su2Algebra a = su2_algebra(su, x);
    std::vector<double> v{a.omega_phi, a.quaternionic, a.squares, a.wedge, a.volume, a.orientation};
    for (double e : values_of(kind_equations(su, x))) v.push_back(e);
    for (double e : values_of(ns ? nearly_hypo_equations(su, x) : hypo_equations(su, x))) v.push_back(e);
    v.push_back(nijenhuis_form_residual(su, x));
    v.push_back(nabla_phi_form_residual(su, x));
    if (ns) v.push_back(lie_partner_residual(s, su.lambda, x));
    return v;
  })};
}

std::vector<CheckGroup> deformation_suite(const AcmStructure& s, const Vec& probe) {
  std::vector<CheckDef> defs{
      {"se_d_eta", "dη̃ = −2ω̃₃", kIdentityTol, Bound::Upper},
      {"se_d_omega1", "dω̃₁ = 3η̃∧ω̃₂", kIdentityTol, Bound::Upper},
      {"se_d_omega2", "dω̃₂ = −3η̃∧ω̃₁", kIdentityTol, Bound::Upper},
      {"se_form_consistency", "tensor-level and form-level deformations agree", kRoundtripTol, Bound::Upper},
      {"se_sasakian_nijenhuis", "[φ̃₃,φ̃₃] + dη̃⊗ξ̃ = 0", kDerivedTol, Bound::Upper},
      {"se_sasakian_contact", "dη̃ = 2Φ̃₃", kDerivedTol, Bound::Upper},
      {"se_scalar_curvature", "s̃ = 20", kDeformedCurvatureTol, Bound::Upper},
      {"se_roundtrip", "inverse deformation recovers the structure", kRoundtripTol, Bound::Upper},
      {"se_roundtrip_forms", "inverse deformation forms agree", kRoundtripTol, Bound::Upper},
      {"se_partner_phi1_nc", "(φ̃₁, ξ̃) nearly cosymplectic", kIdentityTol, Bound::Upper},
      {"se_partner_phi2_nc", "(φ̃₂, ξ̃) nearly cosymplectic", kIdentityTol, Bound::Upper},
  };
  Su2Structure su;
  try {
    su = su2_of(s, probe);
  } catch (const Error& e) {
    return {failed_group(defs, e.what())};
  }
  const bool ns = s.mode == Mode::NearlySasakian;
  const Deformation d = ns ? deform_ns_to_se(su) : deform_nc_to_se(su);
  const Deformation back = ns ? deform_se_to_ns(d.structure, su.lambda) : deform_se_to_nc(d.structure, su.lambda);
  return {point_group(defs, [su, d, back](const Vec& x) {
    std::vector<double> v = values_of(kind_equations(d.structure, x));
    v.push_back(form_consistency_residual(d, x));
    const AcmStructure se = d.structure.acm(3, Mode::Sasakian);
    v.push_back(sasakian_nijenhuis_residual(se, x));
    v.push_back(sasakian_contact_residual(se, x));
    v.push_back(std::abs(scalar_curvature(d.structure.manifold, x) - 20.0));
    v.push_back(structure_distance(back.structure, su, x));
    v.push_back(form_consistency_residual(back, x));
    const PartnerCheck p = se_partner_check(d.structure, x);
    v.push_back(p.phi1_nc);
    v.push_back(p.phi2_nc);
    return v;
  })};
}

std::vector<CheckGroup> spectral_suite(const AcmStructure& s) {
  std::vector<CheckGroup> out;
  out.push_back(point_group(
      {
          {"h2_spectrum_consistent", "0-eigenspace of dimension 2p+1, negative eigenspaces of dimension 4", 0.5,
           Bound::Upper},
          {"h2_eigenspace_stability", "eigenspaces of h² are φ- and h-invariant", kDefectTol, Bound::Upper},
          {"h2_gram_orthogonality", "X, φX, hX, hφX mutually orthogonal", kDefectTol, Bound::Upper},
      },
      [s](const Vec& x) {
        return std::vector<double>{h2_spectrum(s, x).consistent() ? 0.0 : 1.0, eigenspace_stability_residual(s, x),
                                   gram_orthogonality_residual(s, x, 3)};
      }));
  out.push_back(global_group({{"h2_spectrum_constant", "eigenvalues of h² constant", kIdentityTol, Bound::Upper}},
                             [s](const std::vector<Vec>& pts) { return std::vector<double>{spectral_constancy_residual(s, pts)}; }));
  return out;
}

std::vector<CheckGroup> contact_suite(const AcmStructure& s) {
  return {point_group({{"contact_volume", "|η∧(dη)²| bounded below", 0.5, Bound::Lower},
                       {"contact_xi_interior_deta", "ξ⌟dη = 0", kDefectTol, Bound::Upper}},
                      [s](const Vec& x) {
                        const STensor eta = s.eta();
                        const Vec xi = s.xi(x);
                        double interior = 0.0;
                        for (const Vec& e : orthonormal_frame(s.manifold, x)) {
                          const std::array<Vec, 2> args{xi, e};
                          interior = std::max(interior, std::abs(exterior_derivative(s.manifold, eta, x, args)));
                        }
                        return std::vector<double>{std::abs(contact_volume(s, x)), interior};
                      })};
}

std::vector<CheckGroup> curvature_suite(const ManifoldDescriptor& m, std::uint64_t seed) {
  // Round sphere of radius R under c·g: K = 1/(cR²), Ric = (n−1)K·g, s = n(n−1)K.
  const int n = m.dim();
  const double k = 1.0 / (m.metric_scale * m.radius * m.radius);
  return {point_group({{"scalar_curvature", "s = n(n−1)K", kCurvatureTol, Bound::Upper},
                       {"ricci_einstein", "Ric = (n−1)K g", kRicciTol, Bound::Upper},
                       {"sectional_curvature", "K(X∧Y) = K on a random plane", kRicciTol, Bound::Upper}},
                      [m, n, k, seed](const Vec& x) {
                        double ric = 0.0;
                        const auto rm = ricci_matrix(m, x);
                        for (std::size_t i = 0; i < rm.size(); ++i) {
                          for (std::size_t j = 0; j < rm.size(); ++j) {
                            ric = std::max(ric, std::abs(rm[i][j] - (i == j ? (n - 1) * k : 0.0)));
                          }
                        }
                        std::uint64_t plane_seed = seed;
                        for (int i = 0; i < kAmbientDim; ++i) {
                          plane_seed = plane_seed * 1000003u + static_cast<std::uint64_t>(std::llround(x[i] * 1e9));
                        }
                        const auto t = sample_tangents(m, x, 2, plane_seed);
                        return std::vector<double>{std::abs(scalar_curvature(m, x) - n * (n - 1) * k), ric,
                                                   std::abs(sectional(m, x, t[0], t[1]) - k)};
                      })};
}

std::vector<CheckGroup> hypersurface_suite(const std::string& manifold, std::uint64_t seed) {
  std::vector<CheckGroup> out = octonion_checks(standard_table(), kOctonionPairs, seed);
  if (!is_hypersurface(manifold)) {
    const NearlyKahlerSix nk = nearly_kahler_six();
    out.push_back(point_group(
        {{"nearly_kahler", "(∇′_XJ)X = 0 over 5 directions", kDefectTol, Bound::Upper},
         {"constant_type", "‖(∇′_XJ)Y‖² = (s′/30)(|X|²|Y|² − g(X,Y)² − g(X,JY)²)", kRicciTol, Bound::Upper}},
        [nk, seed](const Vec& x) {
          const auto t = sample_tangents(nk.manifold, x, 5, seed ^ 0x9e3779b97f4a7c15ULL);
          double defect = 0.0;
          double type = 0.0;
          for (std::size_t i = 0; i < t.size(); ++i) {
            defect = std::max(defect, max_abs(nearly_kahler_defect(nk, x, t[i])));
            type = std::max(type, std::abs(constant_type_residual(nk, x, t[i], t[(i + 1) % t.size()])));
          }
          return std::vector<double>{defect, type};
        }));
    return out;
  }
  const HypersurfaceEmbedding hs = hypersurface_by_name(manifold);
  const ShapeKind expected =
      hs.mode == Mode::NearlySasakian ? ShapeKind::NearlySasakianAnsatz : ShapeKind::NearlyCosymplecticAnsatz;
  const int dim = hs.manifold.dim();
  out.push_back(global_group(
      {{"shape_ansatz", "σ has the ansatz of the induced structure", 0.5, Bound::Upper},
       {"shape_beta", "β = 0", kDefectTol, Bound::Upper},
       {"shape_fit", "least-squares residual of the winning ansatz", kShapeFitTol, Bound::Upper}},
      [hs, expected, dim, seed](const std::vector<Vec>& pts) {
        const int n = std::max(static_cast<int>(pts.size()), dim * dim);
        const ShapeFit f = shape_classification(hs, n, seed);
        return std::vector<double>{f.kind == expected ? 0.0 : 1.0, std::abs(f.beta_mean) + f.beta_spread, f.residual};
      },
      -dim * dim));
  out.push_back(point_group(
      {{"nabla_nu_J", "∇′_νJ = h", kDefectTol, Bound::Upper},
       {"normal_derivative", "∇′_Xν from the ansatz with β = 0", kDefectTol, Bound::Upper},
       {"lambda_squared", "λ² = s′/30", kRicciTol, Bound::Upper},
       {"scalar_relation", hs.mode == Mode::NearlySasakian ? "s = 20 + (2/3)s′" : "s = (2/3)s′",
        kDeformedCurvatureTol, Bound::Upper}},
      [hs](const Vec& x) {
        const ScalarRelations r = scalar_relations(hs, x);
        return std::vector<double>{nabla_nu_J_residual(hs, x), normal_derivative_residual(hs, x), r.lambda2_residual,
                                   r.scalar_residual};
      }));
  return out;
}

std::string r_tag(double r, bool random) {
  if (random) return "r_rand";
  if (r == -1.0) return "r_m1";
  if (r == 0.0) return "r_0";
  if (r == 0.5) return "r_half";
  return "r_1";
}

std::vector<CheckGroup> connections_suite(const AcmStructure& s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double random_r = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
  std::vector<CheckGroup> out;
  for (int i = 0; i < 5; ++i) {
    const bool random = i == 4;
    const double r = random ? random_r : std::array<double, 4>{-1.0, 0.0, 0.5, 1.0}[static_cast<std::size_t>(i)];
    const std::string p = "canonical_" + r_tag(r, random) + "_";
    std::vector<CheckDef> defs{
        {p + "parallel_g", "∇̄g = 0", kIdentityTol, Bound::Upper},
        {p + "parallel_phi", "∇̄φ = 0", kIdentityTol, Bound::Upper},
        {p + "parallel_xi", "∇̄ξ = 0", kIdentityTol, Bound::Upper},
        {p + "torsion_skew_on_d", "T̄(X,Y,Z) + T̄(X,Z,Y) = 0 on ker η", kDefectTol, Bound::Upper},
        {p + "tau_anticommutator", "τφ + φτ = −2(r+1)φ²", kDefectTol, Bound::Upper},
        {p + "tau_closed_form", "τ = (3/2)h − (r+1)φ", kDefectTol, Bound::Upper},
        {p + "torsion_closed_form", "T̄ = H(X,Y) − H(Y,X) in expanded form", kDefectTol, Bound::Upper},
        {p + "deformation_dim5", "H agrees with its 5-dimensional closed form", kDefectTol, Bound::Upper},
        {p + "deformation_xi", "H(ξ,ξ) = 0, H(X,ξ) = φX − hX", kDefectTol, Bound::Upper},
        {p + "nabla_h_closed_form", "(∇̄_Xh)Y = (1−2r)η(X)φhY", kDefectTol, Bound::Upper},
    };
    const bool half = r == 0.5 && !random;
    if (half) {
      for (const char* n : {"parallel_h", "parallel_omega1", "parallel_omega2", "parallel_omega3", "parallel_torsion"}) {
        defs.push_back({p + n, "∇̄ = 0 at r = ½", kDerivedTol, Bound::Upper});
      }
      defs.push_back({p + "torsion_half_form", "T̄ at r = ½ in closed form", kDefectTol, Bound::Upper});
    }
    const bool zero = r == 0.0 && !random;
    if (zero) defs.push_back({p + "xi_h", "∇̄_ξh = φh", kDefectTol, Bound::Upper});
    const CanonicalConnection c = canonical_connection(s, r);
    out.push_back(point_group(defs, [c, half, zero](const Vec& x) {
      const Connection conn = c.connection();
      const auto frame = orthonormal_frame(c.base.manifold, x);
      std::vector<double> v;
      if (half) {
        const ParallelismReport rep = parallelism_report(c, x);
        v = {rep.metric, rep.phi, rep.xi};
      } else {
        // Only the r-independent entries are needed here.
        const STensor ng = nabla(conn, metric_tensor(c.base.manifold));
        const VTensor nphi = nabla(conn, c.base.phi);
        const VTensor nxi = nabla(conn, c.base.xi);
        double g = 0.0;
        double ph = 0.0;
        double xi = 0.0;
        for (const Vec& a : frame) {
          xi = std::max(xi, max_abs(nxi(x, a)));
          for (const Vec& b : frame) {
            ph = std::max(ph, max_abs(nphi(x, a, b)));
            for (const Vec& e : frame) g = std::max(g, std::abs(ng(x, a, b, e)));
          }
        }
        v = {g, ph, xi};
      }
      const TorsionResiduals t = torsion_residuals(c, x);
      const DeformationResiduals d = deformation_residuals(c, x);
      v.push_back(t.skew_on_d);
      v.push_back(t.tau_anticommutator);
      v.push_back(std::max(t.tau_closed_form, t.tau_xi));
      v.push_back(t.closed_form);
      v.push_back(d.dim5);
      v.push_back(std::max(d.xi_xi, d.x_xi));
      v.push_back(bar_h_closed_form_residual(c, x));
      if (half) {
        const ParallelismReport rep = parallelism_report(c, x);
        v.push_back(rep.h);
        for (double w : rep.omega.value_or(std::array<double, 3>{kNaN, kNaN, kNaN})) v.push_back(w);
        v.push_back(rep.torsion);
        v.push_back(t.half_form);
      }
      if (zero) {
        const VTensor nh = nabla(conn, c.h);
        const Vec xi = c.base.xi(x);
        double worst = 0.0;
        for (const Vec& e : frame) worst = std::max(worst, max_abs(nh(x, xi, e) - c.base.phi(x, c.h(x, e))));
        v.push_back(worst);
      }
      return v;
    }));
  }

  const std::vector<CheckDef> okumura_defs{
      {"okumura_half_parallel_phi1", "Okumura ∇̄φ₁ = 0 at r = ½ on the Sasaki-Einstein deformation", kIdentityTol,
       Bound::Upper},
      {"okumura_half_parallel_phi2", "Okumura ∇̄φ₂ = 0 at r = ½ on the Sasaki-Einstein deformation", kIdentityTol,
       Bound::Upper},
      {"okumura_half_parallel_phi3", "Okumura ∇̄φ₃ = 0 at r = ½ on the Sasaki-Einstein deformation", kIdentityTol,
       Bound::Upper},
      {"canonical_equals_okumura", "canonical H at r = ½ equals the Okumura H of the deformed structure",
       kIdentityTol, Bound::Upper},
      {"okumura_sasakian_reduction", "canonical H with h = 0 equals the Okumura H", kDefectTol, Bound::Upper},
      {"skew_torsion_nearly_sasakian", "T̄ not totally skew off ker η (r = 1)", 0.1, Bound::Lower},
      {"skew_torsion_sasakian", "T̄ totally skew for the Sasakian deformation (r = 1)", kIdentityTol, Bound::Upper},
  };
  Deformation d;
  try {
    d = deform_ns_to_se(su2_of(s, sample_points(s.manifold, 1, seed)[0]));
  } catch (const Error& e) {
    out.push_back(failed_group(okumura_defs, e.what()));
    return out;
  }
  const AcmStructure se = d.structure.acm(3, Mode::Sasakian);
  const CanonicalConnection ns_one = canonical_connection(s, 1.0);
  const CanonicalConnection se_one = canonical_connection(se, 1.0);
  out.push_back(point_group(okumura_defs, [s, d, se, ns_one, se_one](const Vec& x) {
    const auto ok = okumura_su2_check(d.structure, 0.5, x);
    return std::vector<double>{ok[0],
                               ok[1],
                               ok[2],
                               canonical_okumura_residual(s, d.structure.lambda, 0.5, x),
                               sasakian_reduction_residual(se, 0.5, x),
                               torsion_skew_defect(ns_one, x),
                               torsion_skew_defect(se_one, x)};
  }));
  return out;
}

std::vector<CheckGroup> one_suite(const std::string& suite, const std::string& manifold, std::uint64_t seed) {
  if (suite == "curvature") return curvature_suite(descriptor_by_name(manifold), seed);
  if (suite == "hypersurface") return hypersurface_suite(manifold, seed);
  const AcmStructure s = structure_by_name(manifold);
  const Vec probe = sample_points(s.manifold, 1, seed)[0];
  if (suite == "acm-axioms") return acm_axiom_checks(s);
  if (suite == "nearly-sasakian") return nearly_class_suite(s, true);
  if (suite == "nearly-cosymplectic") return nearly_class_suite(s, false);
  if (suite == "su2") return su2_suite(s, probe);
  if (suite == "deformations") return deformation_suite(s, probe);
  if (suite == "spectral") return spectral_suite(s);
  if (suite == "contact") return contact_suite(s);
  if (suite == "connections") return connections_suite(s, seed);
  throw Error(ErrorCode::Config, "unknown suite '" + suite + "'");
}

// Drops checks whose names already appeared; groups left empty are removed.
std::vector<CheckGroup> dedupe(std::vector<CheckGroup> groups) {
  std::set<std::string> seen;
  std::vector<CheckGroup> out;
  for (auto& g : groups) {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < g.checks.size(); ++i) {
      if (seen.insert(g.checks[i].name).second) keep.push_back(i);
    }
    if (keep.empty()) continue;
    if (keep.size() == g.checks.size()) {
      out.push_back(std::move(g));
      continue;
    }
    CheckGroup h;
    for (std::size_t i : keep) h.checks.push_back(g.checks[i]);
    h.global_points = g.global_points;
    auto pick = [keep](const std::vector<double>& v) {
      std::vector<double> r;
      for (std::size_t i : keep) r.push_back(v.at(i));
      return r;
    };
    if (g.at_point) {
      h.at_point = [f = g.at_point, pick](const Vec& x) { return pick(f(x)); };
    } else {
      h.global = [f = g.global, pick](const std::vector<Vec>& p) { return pick(f(p)); };
    }
    out.push_back(std::move(h));
  }
  return out;
}

bool passes(double value, double tol, Bound b) {
  if (std::isnan(value)) return false;
  return b == Bound::Upper ? value <= tol : value >= tol;
}

std::string format_sci(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

const char* to_string(ReportFormat f) { return f == ReportFormat::Json ? "json" : "text"; }

ReportFormat parse_report_format(const std::string& s) {
  if (s == "json") return ReportFormat::Json;
  if (s == "text") return ReportFormat::Text;
  throw Error(ErrorCode::Config, "report format must be json or text, got '" + s + "'");
}

std::vector<std::string> suite_names() {
  std::vector<std::string> out = all_suites();
  out.push_back("all");
  return out;
}

void validate(const SuiteConfig& c) {
  descriptor_by_name(c.manifold);
  const auto names = suite_names();
  if (std::find(names.begin(), names.end(), c.suite) == names.end()) {
    throw Error(ErrorCode::Config, "unknown suite '" + c.suite + "'");
  }
  if (c.samples < 1) throw Error(ErrorCode::Config, "samples must be at least 1");
  for (const auto& [name, tol] : c.tolerances) {
    if (!(tol > 0.0)) throw Error(ErrorCode::Config, "tolerance for '" + name + "' must be positive");
  }
  require_applicable(c.suite, c.manifold);
}

CheckGroup single(const PointCheck& c, double tolerance) {
  return point_group({{c.name, c.formula, tolerance, Bound::Upper}},
                     [f = c.eval](const Vec& x) { return std::vector<double>{f(x)}; });
}

std::vector<CheckGroup> acm_axiom_checks(const AcmStructure& s) {
  return {point_group({{"acm_phi_squared", "φ² = −I + η⊗ξ", kAxiomTol, Bound::Upper},
                       {"acm_eta_xi", "η(ξ) = 1", kAxiomTol, Bound::Upper},
                       {"acm_compatible", "g(φX,φY) = g(X,Y) − η(X)η(Y)", kAxiomTol, Bound::Upper},
                       {"acm_phi_xi", "φξ = 0", kAxiomTol, Bound::Upper},
                       {"acm_eta_phi", "η∘φ = 0", kAxiomTol, Bound::Upper}},
                      [s](const Vec& x) {
                        const AcmResiduals r = acm_residuals(s, x);
                        return std::vector<double>{r.phi_squared, r.eta_xi, r.compatible, r.phi_xi, r.eta_phi};
                      })};
}

std::vector<CheckGroup> octonion_checks(const CayleyTable& t, int pairs, std::uint64_t seed) {
  std::vector<CheckGroup> out;
  out.push_back(global_group({{"octonion_norm_composition", "|u×v|² = |u|²|v|² − ⟨u,v⟩²", kOctonionTol, Bound::Upper},
                              {"octonion_antisymmetry", "u×v = −v×u", kOctonionTol, Bound::Upper},
                              {"octonion_orthogonality", "⟨u×v,u⟩ = ⟨u×v,v⟩ = 0", kOctonionTol, Bound::Upper}},
                             [t, pairs, seed](const std::vector<Vec>&) {
                               const TableResidual r = table_consistency_residual(t, pairs, seed);
                               return std::vector<double>{r.norm_composition, r.antisymmetry, r.orthogonality};
                             },
                             pairs));
  out.push_back(global_group(
      {{"octonion_e7_pattern", "e_i×e₇ = (e₆, −e₅, −e₄, e₃, e₂, −e₁)", 0.0, Bound::Upper}},
      [t](const std::vector<Vec>&) {
        const std::array<std::pair<int, double>, 6> expected{
            {{5, 1.0}, {4, -1.0}, {3, -1.0}, {2, 1.0}, {1, 1.0}, {0, -1.0}}};
        double worst = 0.0;
        for (int i = 0; i < 6; ++i) {
          const auto [k, s] = expected[static_cast<std::size_t>(i)];
          worst = std::max(worst, max_abs(cross(t, Vec::unit(i), Vec::unit(6)) - s * Vec::unit(k)));
        }
        return std::vector<double>{worst};
      },
      6));
  return out;
}

std::vector<CheckGroup> suite_checks(const std::string& suite, const std::string& manifold, std::uint64_t seed) {
  require_applicable(suite, manifold);
  if (suite != "all") return dedupe(one_suite(suite, manifold, seed));
  std::vector<CheckGroup> out;
  for (const auto& s : default_suites(manifold)) append(out, one_suite(s, manifold, seed));
  return dedupe(std::move(out));
}

std::vector<CheckDef> list_checks(const std::string& suite, const std::string& manifold) {
  std::vector<CheckDef> out;
  for (const auto& g : suite_checks(suite, manifold, SuiteConfig{}.seed)) {
    for (const auto& d : g.checks) out.push_back(d);
  }
  return out;
}

const CheckResult* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::vector<std::string> VerificationReport::failing() const {
  std::vector<std::string> out;
  for (const auto& c : checks) {
    if (!c.pass) out.push_back(c.name);
  }
  return out;
}

VerificationReport run_checks(const SuiteConfig& c, const std::vector<CheckGroup>& groups) {
  const auto start = std::chrono::steady_clock::now();
  std::set<std::string> known;
  for (const auto& g : groups) {
    for (const auto& d : g.checks) known.insert(d.name);
  }
  for (const auto& [name, tol] : c.tolerances) {
    if (!known.count(name)) throw Error(ErrorCode::Config, "tolerance override for unknown check '" + name + "'");
  }
  const std::vector<Vec> points = sample_points(descriptor_by_name(c.manifold), c.samples, c.seed);

  VerificationReport report;
  report.config = c;
  for (const auto& g : groups) {
    const std::size_t n = g.checks.size();
    std::vector<double> agg(n, kNaN);
    std::string error;
    std::vector<bool> seen_nan(n, false);
    std::vector<bool> started(n, false);
    auto fold = [&](const std::vector<double>& v) {
      if (v.size() != n) throw Error(ErrorCode::InvalidArgument, "check group returned the wrong number of values");
      for (std::size_t i = 0; i < n; ++i) {
        if (std::isnan(v[i])) seen_nan[i] = true;
        if (seen_nan[i]) continue;
        const bool lower = g.checks[i].bound == Bound::Lower;
        agg[i] = !started[i] ? v[i] : (lower ? std::min(agg[i], v[i]) : std::max(agg[i], v[i]));
        started[i] = true;
      }
    };
    int evaluated = 0;
    try {
      if (g.at_point) {
        for (const Vec& x : points) {
          fold(g.at_point(x));
          ++evaluated;
        }
      } else {
        fold(g.global(points));
        evaluated = g.global_points > 0 ? g.global_points
                                        : std::max(static_cast<int>(points.size()), -g.global_points);
      }
    } catch (const Error& e) {
      error = e.what();
      std::fill(agg.begin(), agg.end(), kNaN);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const CheckDef& d = g.checks[i];
      CheckResult r;
      r.name = d.name;
      r.formula = d.formula;
      r.bound = d.bound;
      const auto o = c.tolerances.find(d.name);
      r.tolerance = o != c.tolerances.end() ? o->second : d.tolerance;
      r.max_residual = seen_nan[i] ? kNaN : agg[i];
      r.points_evaluated = evaluated;
      r.error = error;
      r.pass = error.empty() && passes(r.max_residual, r.tolerance, r.bound);
      report.checks.push_back(std::move(r));
    }
  }
  report.overall_pass = std::all_of(report.checks.begin(), report.checks.end(), [](const CheckResult& r) { return r.pass; });
  report.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

VerificationReport run_suite(const SuiteConfig& c) {
  validate(c);
  const auto start = std::chrono::steady_clock::now();
  VerificationReport r = run_checks(c, suite_checks(c.suite, c.manifold, c.seed));
  r.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string to_json(const VerificationReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["schema"] = kReportSchema;
  j["manifold"] = r.config.manifold;
  j["suite"] = r.config.suite;
  j["seed"] = r.config.seed;
  j["samples"] = r.config.samples;
  ordered_json tol = ordered_json::object();
  for (const auto& [name, value] : r.config.tolerances) tol[name] = value;
  j["tolerance_overrides"] = tol;
  ordered_json checks = ordered_json::array();
  for (const auto& c : r.checks) {
    ordered_json e;
    e["name"] = c.name;
    e["paper_ref"] = c.formula;
    if (std::isnan(c.max_residual)) {
      e["max_residual"] = nullptr;
    } else {
      e["max_residual"] = c.max_residual;
    }
    e["tolerance"] = c.tolerance;
    e["bound"] = c.bound == Bound::Upper ? "upper" : "lower";
    e["pass"] = c.pass;
    e["points_evaluated"] = c.points_evaluated;
    if (!c.error.empty()) e["error"] = c.error;
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  j["overall_pass"] = r.overall_pass;
  j["wall_time_ms"] = r.wall_time_ms;
  return j.dump(2) + "\n";
}

std::string to_text(const VerificationReport& r) {
  std::size_t width = 4;
  for (const auto& c : r.checks) width = std::max(width, c.name.size());
  std::ostringstream os;
  os << kReportSchema << "  manifold=" << r.config.manifold << "  suite=" << r.config.suite
     << "  samples=" << r.config.samples << "  seed=" << r.config.seed << "\n";
  char line[512];
  std::snprintf(line, sizeof line, "%-*s  %-10s  %-2s %-10s  %6s  %s\n", static_cast<int>(width), "check", "value", "",
                "bound", "points", "result");
  os << line;
  for (const auto& c : r.checks) {
    std::snprintf(line, sizeof line, "%-*s  %-10s  %-2s %-10s  %6d  %s\n", static_cast<int>(width), c.name.c_str(),
                  format_sci(c.max_residual).c_str(), c.bound == Bound::Upper ? "<=" : ">=",
                  format_sci(c.tolerance).c_str(), c.points_evaluated, c.pass ? "PASS" : "FAIL");
    os << line;
    if (!c.error.empty()) os << "    error: " << c.error << "\n";
  }
  std::snprintf(line, sizeof line, "overall: %s  (%zu checks, %zu failed)  wall_time_ms=%.1f\n",
                r.overall_pass ? "PASS" : "FAIL", r.checks.size(), r.failing().size(), r.wall_time_ms);
  os << line;
  return os.str();
}

void emit(const VerificationReport& r, ReportFormat f, const std::string& path) {
  const std::string body = f == ReportFormat::Json ? to_json(r) : to_text(r);
  if (path.empty()) {
    std::cout << body;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  out << body;
  if (!out) throw Error(ErrorCode::Io, "failed writing '" + path + "'");
}

SuiteConfig load_config_file(const std::string& path, SuiteConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read config '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Config, std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::Config, "config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "manifold") {
        base.manifold = value.get<std::string>();
      } else if (key == "suite") {
        base.suite = value.get<std::string>();
      } else if (key == "samples") {
        base.samples = value.get<int>();
      } else if (key == "seed") {
        base.seed = value.get<std::uint64_t>();
      } else if (key == "tol") {
        if (!value.is_object()) throw Error(ErrorCode::Config, "'tol' must map check names to numbers");
        for (const auto& [name, t] : value.items()) base.tolerances[name] = t.get<double>();
      } else if (key == "report") {
        base.format = parse_report_format(value.get<std::string>());
      } else if (key == "out") {
        base.out = value.get<std::string>();
      } else {
        throw Error(ErrorCode::Config, "unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Config, std::string("config value has the wrong type: ") + e.what());
  }
  return base;
}

}  // namespace cforge
