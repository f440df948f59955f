#pragma once

// The canonical connection family ∇̄ = ∇ + H(r) of a nearly Sasakian (or
// Sasakian) structure, its torsion and τ, parallelism residuals, and the
// Okumura connection of a Sasakian structure.

#include <algorithm>
#include <array>
#include <optional>

#include "cforge/acm.hpp"
#include "cforge/su2.hpp"

namespace cforge {

struct CanonicalConnection {
  AcmStructure base;
  double r = 0.0;
  VTensor H;    // arity 2: (X, Y) -> H(X, Y)
  VTensor h;    // base h, arity 1
  VTensor tau;  // τX = T̄(ξ, X)

  Connection connection() const { return Connection::with_deformation(base.manifold, H); }
};

/// H(X,Y) = ½(∇_Xφ)φY − rη(X)φY + η(Y)(φ−h)X − ½g((φ−h)X,Y)ξ.
/// Requires mode NearlySasakian or Sasakian (InvalidArgument otherwise).
CanonicalConnection canonical_connection(const AcmStructure& s, double r);

/// The dimension-5 closed form ½η(X)hY − rη(X)φY + η(Y)(φX−hX) − g(φX−hX,Y)ξ.
VTensor canonical_deformation_dim5(const AcmStructure& s, double r);

Vec deformation_tensor(const CanonicalConnection& c, const Vec& x, const Vec& u, const Vec& v);
/// ∇̄_XY with Y extended as the projected constant field through v.
Vec bar_derivative(const CanonicalConnection& c, const Vec& x, const Vec& u, const Vec& v);
/// (∇̄K) through the shared tensor rule; direction is the first argument.
VTensor bar_derivative_tensor(const CanonicalConnection& c, const VTensor& k);
STensor bar_derivative_tensor(const CanonicalConnection& c, const STensor& k);

/// T̄(X,Y) = H(X,Y) − H(Y,X) as a field.
VTensor bar_torsion_field(const CanonicalConnection& c);
Vec bar_torsion(const CanonicalConnection& c, const Vec& x, const Vec& u, const Vec& v);
Vec tau(const CanonicalConnection& c, const Vec& x, const Vec& u);

struct TorsionResiduals {
  double closed_form = 0.0;      // T̄ against the expanded torsion formula
  double half_form = 0.0;        // r = ½ closed form (NaN for other r)
  double tau_closed_form = 0.0;  // τ − ((3/2)h − (r+1)φ)
  double tau_xi = 0.0;           // τξ
  double tau_anticommutator = 0.0;  // τφ + φτ + 2(r+1)φ²
  double skew_on_d = 0.0;        // T̄(X,Y,Z) + T̄(X,Z,Y), X,Y,Z ⊥ ξ
  double max() const;            // ignores NaN entries
};
TorsionResiduals torsion_residuals(const CanonicalConnection& c, const Vec& x);

/// Residuals of H itself: H(ξ,ξ), H(X,ξ) − (φX − hX), and (dimension 5) the
/// general formula against the dimension-5 closed form.
struct DeformationResiduals {
  double xi_xi = 0.0;
  double x_xi = 0.0;
  double dim5 = 0.0;  // NaN outside dimension 5
};
DeformationResiduals deformation_residuals(const CanonicalConnection& c, const Vec& x);

struct ParallelismReport {
  double metric = 0.0;
  double phi = 0.0;
  double xi = 0.0;
  double h = 0.0;
  std::optional<std::array<double, 3>> omega;  // only for nearly Sasakian 5-manifolds
  double torsion = 0.0;
  /// Largest of the entries that are expected to vanish for every r.
  double structure_max() const { return std::max({metric, phi, xi}); }
};
/// Max over orthonormal-frame tuples at x of each ∇̄-derivative.
ParallelismReport parallelism_report(const CanonicalConnection& c, const Vec& x);

/// (∇̄_Xh)Y − (1−2r)η(X)φhY over frame pairs and X = ξ.
double bar_h_closed_form_residual(const CanonicalConnection& c, const Vec& x);
/// |(∇̄_ξh)Y| / |φhY| maximized over frame vectors; equals |1 − 2r|.
double bar_h_xi_ratio(const CanonicalConnection& c, const Vec& x);

/// Okumura deformation g(X,φY)ξ − rη(X)φY + η(Y)φX of a Sasakian structure.
VTensor okumura_tensor(const AcmStructure& s, double r);
Vec okumura(const AcmStructure& s, double r, const Vec& x, const Vec& u, const Vec& v);

/// max |(∇̄φ_i)| for the Okumura connection of (φ₃, ξ, η, g) at the given r.
/// Requires kind SasakiEinstein.
std::array<double, 3> okumura_su2_check(const Su2Structure& s, double r, const Vec& x);

/// |H_canonical(X,Y) − H_okumura(X,Y)| over frame pairs, the canonical H taken
/// on `ns` and the Okumura H on the Sasakian structure (φ̃₃, ξ̃) of the
/// nearly Sasakian to Sasaki-Einstein deformation with parameter λ.
double canonical_okumura_residual(const AcmStructure& ns, double lambda, double r, const Vec& x);
/// |H_canonical − H_okumura| on a Sasakian structure (h = 0).
double sasakian_reduction_residual(const AcmStructure& sasakian, double r, const Vec& x);

/// max |T̄(X,Y,Z) + T̄(X,Z,Y)| over all frame triples, ξ directions included.
double torsion_skew_defect(const CanonicalConnection& c, const Vec& x);

}  // namespace cforge
