#include <gtest/gtest.h>

#include <random>

#include "cforge/octonion.hpp"

using namespace cforge;

namespace {

Vec e(int i) { return Vec::unit(i - 1); }

}  // namespace

TEST(Cross, ProductsWithE7FollowReebPattern) {
  // Coefficients of x^1∂6 − x^2∂5 − x^3∂4 + x^4∂3 + x^5∂2 − x^6∂1.
  const std::array<std::pair<int, double>, 6> expected{
      {{6, 1.0}, {5, -1.0}, {4, -1.0}, {3, 1.0}, {2, 1.0}, {1, -1.0}}};
  for (int i = 1; i <= 6; ++i) {
    const auto [k, s] = expected[static_cast<std::size_t>(i - 1)];
    const Vec w = cross(e(i), e(7));
    EXPECT_EQ(w.c, (s * e(k)).c) << "e" << i << " x e7";
  }
}

TEST(Cross, SpecificProducts) {
  EXPECT_EQ(cross(e(1), e(7)).c, e(6).c);
  EXPECT_EQ(cross(e(2), e(7)).c, (-e(5)).c);
  EXPECT_EQ(cross(e(3), e(7)).c, (-e(4)).c);
  const Vec u{{0.3, -1.2, 0.7, 2.0, 0.1, -0.4, 1.5}};
  EXPECT_LT(max_abs(cross(u, u)), 1e-15);
}

TEST(Cross, BasisPairsExact) {
  const TableResidual r = basis_pair_residual(standard_table());
  EXPECT_EQ(r.norm_composition, 0.0);
  EXPECT_EQ(r.antisymmetry, 0.0);
  EXPECT_EQ(r.orthogonality, 0.0);
}

TEST(Cross, RandomPairsSatisfyNormComposition) {
  const TableResidual r = table_consistency_residual(100, 1);
  EXPECT_LT(r.norm_composition, 1e-12);
  EXPECT_LT(r.antisymmetry, 1e-12);
  EXPECT_LT(r.orthogonality, 1e-12);
  const TableResidual again = table_consistency_residual(100, 1);
  EXPECT_EQ(r.max(), again.max());
}

TEST(Cross, DoubleCrossIdentity) {
  // u×(u×v) = −|u|²v + ⟨u,v⟩u holds for every 7-dimensional cross product.
  std::mt19937_64 rng(77);
  std::normal_distribution<double> g;
  for (int s = 0; s < 200; ++s) {
    Vec u;
    Vec v;
    for (int i = 0; i < 7; ++i) {
      u[i] = g(rng);
      v[i] = g(rng);
    }
    const Vec lhs = cross(u, cross(u, v));
    const Vec rhs = dot(u, v) * u - dot(u, u) * v;
    EXPECT_LT(max_abs(lhs - rhs), 1e-12 * dot(u, u) * norm(v) + 1e-13);
  }
}

TEST(Cross, FlippedLineBreaksNormComposition) {
  const CayleyTable bad =
      table_from_lines({{{1, 2, 3}, {1, 4, 5}, {1, 7, 6}, {2, 5, 7}, {2, 6, 4}, {3, 4, 7}, {3, 6, 5}}});
  const TableResidual r = table_consistency_residual(bad, 100, 1);
  EXPECT_GT(r.norm_composition, 0.05);
}

TEST(Cross, IncompleteLinesRejected) {
  EXPECT_THROW(
      table_from_lines({{{1, 2, 3}, {1, 2, 3}, {1, 7, 6}, {2, 5, 7}, {2, 4, 6}, {3, 4, 7}, {3, 6, 5}}}), Error);
}

TEST(Cross, WorksOnJets) {
  const Vec u{{0.3, -1.2, 0.7, 2.0, 0.1, -0.4, 1.5}};
  const Vec v{{1.0, 0.2, -0.3, 0.5, 0.9, -1.1, 0.4}};
  const Vec w{{0.2, 0.4, 0.6, -0.8, 1.0, -1.2, 1.4}};
  // Bilinearity: d/dt cross(u + t w, v) = cross(w, v).
  Vec7<J1> ut;
  Vec7<J1> vt;
  for (int i = 0; i < 7; ++i) {
    ut[i] = J1(u[i], w[i]);
    vt[i] = J1(v[i]);
  }
  const Vec7<J1> r = cross(ut, vt);
  const Vec oracle = cross(w, v);
  for (int i = 0; i < 7; ++i) EXPECT_NEAR(r[i].d, oracle[i], 1e-15);
}
