#include <gtest/gtest.h>

#include <cmath>

#include "cforge/hypersurface.hpp"
#include "cforge/spectral.hpp"

using namespace cforge;

namespace {

constexpr std::uint64_t kSeed = 4242;

// Block-diagonal model of dimension 1 + 2p + 4r: ξ = e_0, φ a standard complex
// structure on ξ^⊥, and h = λ_i·(φ-anticommuting skew block) on each 4-block.
struct Synthetic {
  Eigen::MatrixXd phi;
  Eigen::MatrixXd h;
  Eigen::VectorXd xi;
};

Synthetic synthetic(int p, const std::vector<double>& lambdas) {
  const int n = 1 + 2 * p + 4 * static_cast<int>(lambdas.size());
  Synthetic s{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Unit(n, 0)};
  int k = 1;
  for (int i = 0; i < p; ++i, k += 2) {
    s.phi(k + 1, k) = 1.0;
    s.phi(k, k + 1) = -1.0;
  }
  for (double l : lambdas) {
    // φ = J₁ (e_a -> e_b, e_c -> e_d), h = λ J₂ (e_a -> e_c, e_b -> −e_d); J₁J₂ = −J₂J₁.
    const int a = k;
    const int b = k + 1;
    const int c = k + 2;
    const int d = k + 3;
    s.phi(b, a) = 1.0;
    s.phi(a, b) = -1.0;
    s.phi(d, c) = 1.0;
    s.phi(c, d) = -1.0;
    s.h(c, a) = l;
    s.h(a, c) = -l;
    s.h(d, b) = -l;
    s.h(b, d) = l;
    k += 4;
  }
  return s;
}

}  // namespace

TEST(Spectral, RegistrySpectra) {
  for (const auto& name : hypersurface_names()) {
    const AcmStructure s = structure_by_name(name);
    for (const Vec& x : sample_points(s.manifold, 5, kSeed)) {
      const SpectralData d = h2_spectrum(s, x);
      ASSERT_EQ(d.clusters.size(), 2u) << name;
      EXPECT_NEAR(d.clusters[0].value, 0.0, 1e-9);
      EXPECT_EQ(d.clusters[0].multiplicity, 1);
      EXPECT_NEAR(d.clusters[1].value, -1.0, 1e-9);
      EXPECT_EQ(d.clusters[1].multiplicity, 4);
      EXPECT_EQ(d.p, 0);
      EXPECT_EQ(d.r, 1);
      EXPECT_TRUE(d.consistent());
    }
  }
}

TEST(Spectral, SyntheticMultiEigenvalue) {
  const Synthetic s = synthetic(2, {0.5, 1.5});
  // The model itself: φ and h anticommute, h skew.
  EXPECT_LT((s.phi * s.h + s.h * s.phi).norm(), 1e-15);
  EXPECT_LT((s.h + s.h.transpose()).norm(), 1e-15);
  const SpectralData d = spectrum_from_frame_matrix(s.h);
  ASSERT_EQ(d.clusters.size(), 3u);
  EXPECT_EQ(d.clusters[0].multiplicity, 5);
  EXPECT_NEAR(d.clusters[1].value, -0.25, 1e-12);
  EXPECT_NEAR(d.clusters[2].value, -2.25, 1e-12);
  EXPECT_EQ(d.p, 2);
  EXPECT_EQ(d.r, 2);
  EXPECT_EQ(d.dim, 13);
  EXPECT_TRUE(d.consistent());
  EXPECT_LT(eigenspace_stability_residual(s.phi, s.h, s.xi), 1e-12);
}

TEST(Spectral, StabilityDetectsMixing) {
  Synthetic s = synthetic(0, {0.5, 1.5});
  // Rotating φ between the two eigenspaces breaks invariance.
  s.phi(5, 1) += 0.3;
  s.phi(1, 5) -= 0.3;
  EXPECT_GT(eigenspace_stability_residual(s.phi, s.h, s.xi), 0.1);
}

TEST(Spectral, ClusteringAmbiguousThrows) {
  try {
    cluster_eigenvalues({0.0, -0.6e-6, -1.2e-6});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ClusteringAmbiguous);
  }
  const auto c = cluster_eigenvalues({-1.0, 0.0, -1.0 + 1e-9});
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[1].multiplicity, 2);
}

TEST(Spectral, InconsistentMultiplicityFlagged) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(3, 3);
  h(1, 2) = 1.0;
  h(2, 1) = -1.0;
  EXPECT_FALSE(spectrum_from_frame_matrix(h).consistent());
}

TEST(Spectral, Constancy) {
  for (const auto& name : hypersurface_names()) {
    const AcmStructure s = structure_by_name(name);
    const auto pts = sample_points(s.manifold, 20, kSeed);
    EXPECT_LT(spectral_constancy_residual(s, pts), 1e-8) << name;
    EXPECT_EQ(spectral_constancy_residual(s, {pts[0]}), 0.0);
  }
}

TEST(Spectral, EigenspaceStabilityOnRegistry) {
  for (const auto& name : hypersurface_names()) {
    const AcmStructure s = structure_by_name(name);
    for (const Vec& x : sample_points(s.manifold, 5, kSeed)) {
      EXPECT_LT(eigenspace_stability_residual(s, x), 1e-9) << name;
      EXPECT_LT(gram_orthogonality_residual(s, x, 3), 1e-9) << name;
    }
  }
}

TEST(Spectral, ContactVolume) {
  for (const auto& name : hypersurface_names()) {
    const AcmStructure s = structure_by_name(name);
    for (const Vec& x : sample_points(s.manifold, 5, kSeed)) {
      const double v = contact_volume(s, x);
      EXPECT_GT(std::abs(v), 0.5) << name;
      // Oracle: η∧(dη)² on an orthonormal frame equals ±2·Pf(dη|ξ^⊥) when ι_ξdη = 0.
      const auto frame = orthonormal_frame(s.manifold, x);
      const Vec xi = s.xi(x);
      std::vector<Vec> d;
      for (const Vec& e : frame) d.push_back(e - dot(e, xi) * xi);
      std::vector<Vec> basis;
      for (const Vec& c : d) {
        Vec w = c;
        for (const Vec& b : basis) w -= dot(w, b) * b;
        if (norm(w) > 1e-6) basis.push_back(w / norm(w));
      }
      ASSERT_EQ(basis.size(), 4u);
      double m[4][4];
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
          const std::array<Vec, 2> args{basis[static_cast<std::size_t>(i)], basis[static_cast<std::size_t>(j)]};
          m[i][j] = exterior_derivative(s.manifold, s.eta(), x, args);
        }
      }
      const double pf = m[0][1] * m[2][3] - m[0][2] * m[1][3] + m[0][3] * m[1][2];
      EXPECT_NEAR(std::abs(v), 2.0 * std::abs(pf), 1e-8) << name;
    }
  }
}

TEST(Spectral, ClosedFormHasZeroContactVolume) {
  const ManifoldDescriptor m = s5_umbilical_descriptor();
  const STensor dx1(1, [](const auto&, auto args) { return args[0][0]; });
  for (const Vec& x : sample_points(m, 5, kSeed)) EXPECT_LT(std::abs(contact_volume(m, dx1, x)), 1e-10);
}

TEST(Spectral, SasakianCandidateSingleEigenspace) {
  const AcmStructure ns = structure_by_name("s5-umbilical");
  AcmStructure se;
  se.manifold = ns.manifold.with_metric_scale(2.0);
  se.phi = (1.0 / std::sqrt(2.0)) * (ns.phi - h_field(ns));
  se.xi = (1.0 / std::sqrt(2.0)) * ns.xi;
  se.mode = Mode::Sasakian;
  const Vec x = sample_points(se.manifold, 1, kSeed)[0];
  const SpectralData d = h2_spectrum(se, x);
  ASSERT_EQ(d.clusters.size(), 1u);
  EXPECT_EQ(d.clusters[0].multiplicity, 5);
  EXPECT_EQ(eigenspace_stability_residual(se, x) < 1e-9, true);
}
