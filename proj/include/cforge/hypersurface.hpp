#pragma once

// The nearly Kähler S⁶ (J from the octonion cross product) and the almost
// contact structures it induces on its two registry hypersurfaces.

#include <string>
#include <vector>

#include <Eigen/Core>

#include "cforge/acm.hpp"

namespace cforge {

struct NearlyKahlerSix {
  ManifoldDescriptor manifold;
  VTensor J;  // J(x)v = x × v on tangent vectors
};

NearlyKahlerSix nearly_kahler_six();

/// (∇′_XJ)X. Throws NotTangent when X is not tangent to S⁶.
Vec nearly_kahler_defect(const NearlyKahlerSix& n, const Vec& x, const Vec& v);

/// ‖(∇′_XJ)Y‖² − (s′/30)(|X|²|Y|² − g(X,Y)² − g(X,JY)²), s′ measured.
double constant_type_residual(const NearlyKahlerSix& n, const Vec& x, const Vec& u, const Vec& v);

struct HypersurfaceEmbedding {
  std::string name;
  ManifoldDescriptor manifold;  // the S⁵
  NearlyKahlerSix ambient;
  VTensor nu;                   // unit normal inside TS⁶
  Mode mode = Mode::Unset;
};

/// "s5-geodesic" (ν = −e₇) or "s5-umbilical" (ν = x − √2 e₇). Throws UnknownManifold.
HypersurfaceEmbedding hypersurface_by_name(const std::string& name);
std::vector<std::string> hypersurface_names();

/// φX = (JX)ᵀ, ξ = −Jν, mode from the embedding.
AcmStructure induce_acm(const HypersurfaceEmbedding& hs);
/// induce_acm(hypersurface_by_name(name)).
AcmStructure structure_by_name(const std::string& name);

/// σ(X,Y) = g′(∇′_X Y, ν)ν.
Vec second_fundamental_form(const HypersurfaceEmbedding& hs, const Vec& x, const Vec& u, const Vec& v);

enum class ShapeKind { NearlyCosymplecticAnsatz, NearlySasakianAnsatz };
const char* to_string(ShapeKind kind);

/// σ coefficients S_ab = g′(σ(e_a,e_b), ν) and η_a = η(e_a) in an orthonormal frame.
struct ShapeSample {
  Eigen::MatrixXd sigma;
  Eigen::VectorXd eta;
};

struct ShapeFit {
  ShapeKind kind = ShapeKind::NearlyCosymplecticAnsatz;
  double beta_mean = 0.0;
  double beta_spread = 0.0;  // max − min over samples
  double residual = 0.0;     // of the winning ansatz, max over samples
  double residual_nc = 0.0;  // σ = β η⊗η ν
  double residual_ns = 0.0;  // σ = (−g + β η⊗η) ν
};

inline constexpr double kShapeFitTol = 1e-7;

/// Pointwise least-squares β for both ansätze; the smaller maximal residual
/// wins. Throws NeitherFits when both exceed `tol`.
ShapeFit fit_shape(const std::vector<ShapeSample>& samples, double tol = kShapeFitTol);

ShapeSample shape_sample(const HypersurfaceEmbedding& hs, const Vec& x);
/// Requires samples ≥ dim² (InvalidArgument otherwise).
ShapeFit shape_classification(const HypersurfaceEmbedding& hs, int samples, std::uint64_t seed);

/// Matrix of X -> (∇′_νJ)X on T_xM (ambient 7x7, zero on the normal space of M).
Mat7 nabla_nu_J(const HypersurfaceEmbedding& hs, const Vec& x);
/// max over a frame of |(∇′_νJ)X − hX|.
double nabla_nu_J_residual(const HypersurfaceEmbedding& hs, const Vec& x);

/// max over a frame of |∇′_Xν − (X − βη(X)ξ)| (NS) or |∇′_Xν + βη(X)ξ| (NC), β = 0.
double normal_derivative_residual(const HypersurfaceEmbedding& hs, const Vec& x, double beta = 0.0);

struct ScalarRelations {
  double s_ambient = 0.0;  // s′
  double s = 0.0;
  double lambda2 = 0.0;    // −tr(h²)/4
  double lambda2_residual = 0.0;  // |λ² − s′/30|
  double scalar_residual = 0.0;   // |s − (2/3)s′| (NC) or |s − 20 − (2/3)s′| (NS)
};
ScalarRelations scalar_relations(const HypersurfaceEmbedding& hs, const Vec& x);

}  // namespace cforge
