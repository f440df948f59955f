#pragma once

// Almost contact metric structures (φ, ξ, η, g) on registry spheres, the
// tensor h, and residual forms of the nearly Sasakian / nearly cosymplectic
// defining equations and their consequences.

#include <functional>
#include <string>
#include <vector>

#include "cforge/calculus.hpp"

namespace cforge {

enum class Mode { Unset, NearlySasakian, NearlyCosymplectic, Sasakian };

const char* to_string(Mode mode);

struct AcmStructure {
  ManifoldDescriptor manifold;
  VTensor phi;  // arity 1
  VTensor xi;   // arity 0
  Mode mode = Mode::Unset;

  Connection levi_civita() const { return Connection::levi_civita(manifold); }
  /// η = g(ξ, ·).
  STensor eta() const;
  /// Φ(X, Y) = g(X, φY).
  STensor fundamental_form() const;
  double g(const Vec& u, const Vec& v) const { return manifold.inner(u, v); }
};

/// hX = ∇_Xξ + φX (nearly Sasakian, Sasakian) or hX = ∇_Xξ (nearly cosymplectic).
/// Throws ModeUnset.
VTensor h_field(const AcmStructure& s);
/// (x; X, Y) -> (∇_Xφ)Y.
VTensor nabla_phi_field(const AcmStructure& s);
/// (x; X) -> ∇_Xξ.
VTensor nabla_xi_field(const AcmStructure& s);

/// Ambient 7x7 matrix of an endomorphism of T_xM (zero on the normal space).
Mat7 endomorphism_matrix(const ManifoldDescriptor& m, const VTensor& a, const Vec& x);

struct HTensor {
  Mat7 matrix;
  Mode mode = Mode::Unset;
};
HTensor compute_h(const AcmStructure& s, const Vec& x);

struct AcmResiduals {
  double phi_squared = 0.0;     // φ² + I − η⊗ξ
  double eta_xi = 0.0;          // η(ξ) − 1
  double compatible = 0.0;      // g(φX,φY) − g(X,Y) + η(X)η(Y)
  double phi_xi = 0.0;          // φξ
  double eta_phi = 0.0;         // η∘φ
  double max() const;
};
AcmResiduals acm_residuals(const AcmStructure& s, const Vec& x);

/// (∇_Xφ)Y + (∇_Yφ)X − α(2g(X,Y)ξ − η(X)Y − η(Y)X).
Vec nearly_alpha_sasakian_defect(const AcmStructure& s, double alpha, const Vec& x, const Vec& u, const Vec& v);
Vec nearly_sasakian_defect(const AcmStructure& s, const Vec& x, const Vec& u, const Vec& v);
Vec nearly_cosymplectic_defect(const AcmStructure& s, const Vec& x, const Vec& u, const Vec& v);

/// N_φ(X,Y) = (∇_{φX}φ)Y − (∇_{φY}φ)X + (∇_Xφ)φY − (∇_Yφ)φX + η(X)∇_Yξ − η(Y)∇_Xξ.
Vec nijenhuis(const AcmStructure& s, const Vec& x, const Vec& u, const Vec& v);

/// (L_ξφ)X = [ξ, φX] − φ[ξ, X] with X extended as a projected constant field.
Vec lie_derivative_phi(const AcmStructure& s, const Vec& x, const Vec& u);

/// A residual evaluated at a single point; the max over points is the check value.
struct PointCheck {
  std::string name;
  std::string formula;
  std::function<double(const Vec&)> eval;
};

/// Residuals of the defining equation of the given class, in three forms:
/// polarized defect, diagonal defect and the dΦ identity. `alpha` = 1 for
/// nearly Sasakian and 0 for nearly cosymplectic.
std::vector<PointCheck> nearly_sasakian_defect_checks(const AcmStructure& s);
std::vector<PointCheck> nearly_cosymplectic_defect_checks(const AcmStructure& s);
/// Valid for both classes: ξ Killing, ∇_ξξ = 0, ∇_ξη = 0.
std::vector<PointCheck> reeb_checks(const AcmStructure& s);
/// Algebraic properties of h: skew, anticommutes with φ, hξ = 0, η∘h = 0.
std::vector<PointCheck> h_algebra_checks(const AcmStructure& s);
/// Mode-selected consequence identities (curvature, ∇h, Lie derivative, ...).
/// Closed forms for ∇φ, ∇h, ∇(φh) are included in dimension 5.
std::vector<PointCheck> identity_suite(const AcmStructure& s);

struct NamedResidual {
  std::string name;
  double value;
};
/// Evaluates identity_suite at one point.
std::vector<NamedResidual> identity_residuals(const AcmStructure& s, const Vec& x);

/// Unit-length (for g) tangent test vectors: the orthonormal frame.
std::vector<Vec> test_frame(const AcmStructure& s, const Vec& x);

}  // namespace cforge
