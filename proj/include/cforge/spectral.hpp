#pragma once

// Pointwise spectral data of h²: clustered eigenvalues, the integers p and r,
// stability of eigenspaces under φ and h, and the contact volume η∧(dη)^n.

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "cforge/acm.hpp"

namespace cforge {

inline constexpr double kClusterGap = 1e-6;

struct EigenCluster {
  double value = 0.0;
  int multiplicity = 0;
};

struct SpectralData {
  std::vector<EigenCluster> clusters;  // descending
  std::vector<double> lambdas;         // λ_i = √(−μ_i) for the negative clusters
  int p = 0;                           // multiplicity of 0 is 2p + 1
  int r = 0;                           // number of distinct negative eigenvalues
  int dim = 0;
  /// All eigenvalues ≤ 1e-9, multiplicity of 0 odd, negative multiplicities 4,
  /// and 1 + 2p + 4r = dim.
  bool consistent() const;
  std::vector<double> flattened() const;  // eigenvalues repeated by multiplicity
};

/// Groups sorted eigenvalues with consecutive gaps below `gap`. Throws
/// ClusteringAmbiguous when a chained group spreads wider than `gap`.
std::vector<EigenCluster> cluster_eigenvalues(std::vector<double> values, double gap = kClusterGap);

/// Spectrum of h² from the matrix of h in an orthonormal frame.
SpectralData spectrum_from_frame_matrix(const Eigen::MatrixXd& h, double gap = kClusterGap);

/// Matrix of an endomorphism in the g-orthonormal frame of T_xM.
Eigen::MatrixXd frame_matrix(const ManifoldDescriptor& m, const VTensor& a, const Vec& x);

SpectralData h2_spectrum(const AcmStructure& s, const Vec& x);

/// max over points of |μ_k(x) − μ_k(x_0)| over the flattened spectra.
double spectral_constancy_residual(const AcmStructure& s, const std::vector<Vec>& points);

/// Σ_μ ‖(I−P_μ)φP_μ‖ + ‖(I−P_μ)hP_μ‖ over the eigenprojectors of h² on ξ^⊥.
/// Frame-matrix form: xi is the coordinate vector of ξ.
double eigenspace_stability_residual(const Eigen::MatrixXd& phi, const Eigen::MatrixXd& h, const Eigen::VectorXd& xi,
                                     double gap = kClusterGap);
double eigenspace_stability_residual(const AcmStructure& s, const Vec& x);

/// Largest normalized off-diagonal Gram entry of {X, φX, hX, hφX} for a random
/// unit X in the first negative eigenspace of h² (0 when there is none).
double gram_orthogonality_residual(const AcmStructure& s, const Vec& x, std::uint64_t seed);

/// η∧(dη)^n on the orthonormal frame (dim = 2n + 1), for any 1-form η.
double contact_volume(const ManifoldDescriptor& m, const STensor& eta, const Vec& x);
double contact_volume(const AcmStructure& s, const Vec& x);

}  // namespace cforge
