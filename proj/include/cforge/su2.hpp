#pragma once

// SU(2)-structures (η, ω₁, ω₂, ω₃) on 5-manifolds built from nearly Sasakian
// and nearly cosymplectic structures, their structure equations, and the
// deformations to and from Sasaki-Einstein data.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cforge/acm.hpp"

namespace cforge {

enum class Su2Kind { NearlySasakian, NearlyCosymplectic, SasakiEinstein };
const char* to_string(Su2Kind kind);

struct Su2Structure {
  ManifoldDescriptor manifold;  // metric_scale carries rescaled metrics
  VTensor xi;
  std::array<VTensor, 3> phi;   // φ₁, φ₂, φ₃
  double lambda = 1.0;
  Su2Kind kind = Su2Kind::NearlySasakian;

  double g(const Vec& u, const Vec& v) const { return manifold.inner(u, v); }
  STensor eta() const;
  /// ω_i(X,Y) = g(φ_i X, Y), i ∈ {1,2,3}.
  STensor omega(int i) const;
  const VTensor& phi_i(int i) const { return phi.at(static_cast<std::size_t>(i - 1)); }
  /// (φ_i, ξ, η, g) as an almost contact metric structure with the given mode.
  AcmStructure acm(int i, Mode mode) const;
};

/// Forms produced directly by the form-level deformation formulas.
struct Su2Forms {
  STensor eta;
  std::array<STensor, 3> omega;
};
Su2Forms forms_of(const Su2Structure& s);

inline constexpr double kSpectrumTol = 1e-8;

/// λ > 0 from h² = −λ²(I − η⊗ξ), i.e. λ² = −tr(h²)/4.
double lambda_from_spectrum(const AcmStructure& s, const Vec& x);

/// φ₁ = h/λ, φ₂ = φh/λ, φ₃ = φ. Checks h² = −λ²(I − η⊗ξ) on `probe` points
/// (SpectrumMismatch) and requires a nearly Sasakian 5-manifold.
Su2Structure su2_from_nearly_sasakian(const AcmStructure& s, double lambda, const std::vector<Vec>& probe);
Su2Structure su2_from_nearly_sasakian(const AcmStructure& s, double lambda);
/// φ₁ = −φh/λ, φ₂ = φ, φ₃ = −h/λ.
Su2Structure su2_from_nearly_cosymplectic(const AcmStructure& s, double lambda, const std::vector<Vec>& probe);
Su2Structure su2_from_nearly_cosymplectic(const AcmStructure& s, double lambda);

struct Su2Algebra {
  double omega_phi = 0.0;      // ω_i(X,Y) − g(φ_iX,Y)
  double quaternionic = 0.0;   // φ_iφ_j − φ_k, φ_jφ_i + φ_k
  double squares = 0.0;        // φ_i² + I − η⊗ξ
  double wedge = 0.0;          // ω_i∧ω_j − δ_ij v
  double volume = 0.0;         // |(v∧η)(frame)|, should stay away from 0
  double orientation = 0.0;    // min ω₃(X,Y) over X⌟ω₁ = Y⌟ω₂
  double max_residual() const;  // excludes volume and orientation
};
Su2Algebra su2_algebra(const Su2Structure& s, const Vec& x, std::uint64_t seed = 1);

struct EquationResidual {
  std::string name;
  std::string formula;
  double value = 0.0;
};

/// Kind-selected structure equations plus the hypo and nearly hypo conditions.
std::vector<EquationResidual> structure_equation_residuals(const Su2Structure& s, const Vec& x);
/// Only the kind-selected equations.
std::vector<EquationResidual> kind_equations(const Su2Structure& s, const Vec& x);
std::vector<EquationResidual> hypo_equations(const Su2Structure& s, const Vec& x);
std::vector<EquationResidual> nearly_hypo_equations(const Su2Structure& s, const Vec& x);

struct Deformation {
  Su2Structure structure;  // tensor-level
  Su2Forms forms;          // form-level
};

Deformation deform_ns_to_se(const Su2Structure& s);
/// Throws InvalidArgument for λ = 0.
Deformation deform_se_to_ns(const Su2Structure& s, double lambda);
Deformation deform_nc_to_se(const Su2Structure& s);
Deformation deform_se_to_nc(const Su2Structure& s, double lambda);

/// max over frame pairs of |forms_of(structure) − forms|.
double form_consistency_residual(const Deformation& d, const Vec& x);
/// Distance between two SU(2)-structures at x: φ_i, ξ, metric scale, λ.
double structure_distance(const Su2Structure& a, const Su2Structure& b, const Vec& x);

struct PartnerCheck {
  double phi1_nc = 0.0;
  double phi2_nc = 0.0;
  double phi3_nijenhuis = 0.0;
  double phi3_contact = 0.0;  // dη − 2Φ₃
};
/// Requires kind SasakiEinstein.
PartnerCheck se_partner_check(const Su2Structure& s, const Vec& x);
double sasakian_nijenhuis_residual(const AcmStructure& s, const Vec& x);
/// dη(X,Y) − 2Φ(X,Y) with Φ(X,Y) = g(X,φY).
double sasakian_contact_residual(const AcmStructure& s, const Vec& x);
/// |φ̃₂X − (1/(3λ))(L_ξφ)X| with φ̃₂ from deform_ns_to_se and φ, ξ of `ns`.
double lie_partner_residual(const AcmStructure& ns, double lambda, const Vec& x);

/// g(N_{φ_i}(X,Y),φ_jZ) versus the four-term dω expression, all even (i,j,k).
double nijenhuis_form_residual(const Su2Structure& s, const Vec& x);
/// 2g((∇_Xφ_i)Y,Z) versus the dω/dη aggregate, all even (i,j,k).
double nabla_phi_form_residual(const Su2Structure& s, const Vec& x);

/// Nearly cosymplectic structure on the round S⁵ of radius 1/λ (x⁷ = 0): the
/// homothetic copy of s5-geodesic with h² = −λ²(I − η⊗ξ).
AcmStructure rescaled_nearly_cosymplectic(double lambda);

}  // namespace cforge
