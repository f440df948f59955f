#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cforge/connections.hpp"
#include "cforge/hypersurface.hpp"

using namespace cforge;

namespace {

constexpr std::uint64_t kSeed = 777;

std::vector<double> tested_r() {
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  return {-1.0, 0.0, 0.5, 1.0, dist(rng)};
}

AcmStructure ns() { return structure_by_name("s5-umbilical"); }

Deformation se_deformation() { return deform_ns_to_se(su2_from_nearly_sasakian(ns(), 1.0)); }

// (∇̄_Xφ)Y = ∇̄_X(φV) − φ∇̄_XV from ∇_XY + H(X,Y), V the projected constant field.
Vec bar_nabla_phi_direct(const CanonicalConnection& c, const Vec& x, const Vec& u, const Vec& v) {
  const ManifoldDescriptor& m = c.base.manifold;
  const VTensor uf = constant_field(m, u);
  const VTensor phi_v = contract(c.base.phi, {constant_field(m, v)});
  const Vec bar_phi_v = levi_civita(m, uf, phi_v)(x) + c.H(x, u, c.base.phi(x, v));
  return bar_phi_v - c.base.phi(x, bar_derivative(c, x, u, v));
}

}  // namespace

TEST(Connections, RequiresContactMode) {
  EXPECT_THROW(canonical_connection(structure_by_name("s5-geodesic"), 0.5), Error);
}

TEST(Connections, DeformationTensorValues) {
  for (double r : tested_r()) {
    const CanonicalConnection c = canonical_connection(ns(), r);
    for (const Vec& x : sample_points(c.base.manifold, 3, kSeed)) {
      const DeformationResiduals d = deformation_residuals(c, x);
      EXPECT_LT(d.xi_xi, 1e-12) << r;
      EXPECT_LT(d.x_xi, 1e-10) << r;
      EXPECT_LT(d.dim5, 1e-9) << r;
      // H(X,ξ) = −∇_Xξ.
      const Vec xi = c.base.xi(x);
      for (const Vec& e : orthonormal_frame(c.base.manifold, x)) {
        EXPECT_LT(max_abs(c.H(x, e, xi) + nabla_xi_field(c.base)(x, e)), 1e-10);
      }
    }
  }
}

TEST(Connections, BarDerivativeMatchesTensorRule) {
  const CanonicalConnection c = canonical_connection(ns(), 0.3);
  const Vec x = sample_points(c.base.manifold, 1, kSeed)[0];
  const VTensor nphi = bar_derivative_tensor(c, c.base.phi);
  const auto t = sample_tangents(c.base.manifold, x, 2, 9);
  EXPECT_LT(max_abs(nphi(x, t[0], t[1]) - bar_nabla_phi_direct(c, x, t[0], t[1])), 1e-12);
  // ∇̄_Xξ straight from the definition.
  const VTensor xi = c.base.xi;
  const Vec direct = levi_civita(c.base.manifold, constant_field(c.base.manifold, t[0]), xi)(x) + c.H(x, t[0], xi(x));
  EXPECT_LT(max_abs(direct), 1e-10);
}

TEST(Connections, StructureParallelForEveryR) {
  for (double r : tested_r()) {
    const CanonicalConnection c = canonical_connection(ns(), r);
    for (const Vec& x : sample_points(c.base.manifold, 2, kSeed)) {
      const ParallelismReport p = parallelism_report(c, x);
      EXPECT_LT(p.metric, 1e-9) << r;
      EXPECT_LT(p.phi, 1e-9) << r;
      EXPECT_LT(p.xi, 1e-9) << r;
    }
  }
}

TEST(Connections, TorsionAndTau) {
  for (double r : tested_r()) {
    const CanonicalConnection c = canonical_connection(ns(), r);
    for (const Vec& x : sample_points(c.base.manifold, 3, kSeed)) {
      const TorsionResiduals t = torsion_residuals(c, x);
      EXPECT_LT(t.closed_form, 1e-9) << r;
      EXPECT_LT(t.tau_closed_form, 1e-9) << r;
      EXPECT_LT(t.tau_xi, 1e-12) << r;
      EXPECT_LT(t.tau_anticommutator, 1e-9) << r;
      EXPECT_LT(t.skew_on_d, 1e-9) << r;
      EXPECT_EQ(std::isnan(t.half_form), r != 0.5);
      if (r == 0.5) EXPECT_LT(t.half_form, 1e-9);
    }
  }
}

TEST(Connections, HParallelOnlyAtHalf) {
  for (double r : tested_r()) {
    const CanonicalConnection c = canonical_connection(ns(), r);
    const Vec x = sample_points(c.base.manifold, 1, kSeed)[0];
    EXPECT_LT(bar_h_closed_form_residual(c, x), 1e-9) << r;
    EXPECT_NEAR(bar_h_xi_ratio(c, x), std::abs(1.0 - 2.0 * r), 1e-9) << r;
    const ParallelismReport p = parallelism_report(c, x);
    if (r == 0.5) {
      EXPECT_LT(p.h, 1e-8);
    } else {
      EXPECT_GT(p.h, 0.1 * std::abs(1.0 - 2.0 * r));
    }
  }
}

TEST(Connections, XiDerivativeOfHAtZero) {
  const CanonicalConnection c = canonical_connection(ns(), 0.0);
  const VTensor nh = bar_derivative_tensor(c, c.h);
  for (const Vec& x : sample_points(c.base.manifold, 3, kSeed)) {
    const Vec xi = c.base.xi(x);
    for (const Vec& e : orthonormal_frame(c.base.manifold, x)) {
      EXPECT_LT(max_abs(nh(x, xi, e) - c.base.phi(x, c.h(x, e))), 1e-9);
    }
  }
}

TEST(Connections, HalfParallelizesSu2AndTorsion) {
  const CanonicalConnection c = canonical_connection(ns(), 0.5);
  for (const Vec& x : sample_points(c.base.manifold, 2, kSeed)) {
    const ParallelismReport p = parallelism_report(c, x);
    ASSERT_TRUE(p.omega.has_value());
    for (double w : *p.omega) EXPECT_LT(w, 1e-8);
    EXPECT_LT(p.torsion, 1e-7);
    // The deformed Sasaki-Einstein forms are parallel too.
    const Su2Structure se = se_deformation().structure;
    for (int i = 1; i <= 3; ++i) {
      const STensor nw = bar_derivative_tensor(c, se.omega(i));
      for (const Vec& u : orthonormal_frame(c.base.manifold, x)) {
        for (const Vec& v : orthonormal_frame(c.base.manifold, x)) {
          EXPECT_LT(std::abs(nw(x, u, v, c.base.xi(x))), 1e-8);
          EXPECT_LT(std::abs(nw(x, c.base.xi(x), u, v)), 1e-8);
        }
      }
    }
  }
  // At other r the ω₁, ω₂ forms are not parallel.
  const Vec x = sample_points(c.base.manifold, 1, kSeed)[0];
  const ParallelismReport q = parallelism_report(canonical_connection(ns(), 1.0), x);
  EXPECT_GT((*q.omega)[0], 0.1);
}

TEST(Connections, OkumuraOnSasakiEinstein) {
  const Su2Structure se = se_deformation().structure;
  for (const Vec& x : sample_points(se.manifold, 3, kSeed)) {
    for (double v : okumura_su2_check(se, 0.5, x)) EXPECT_LT(v, 1e-8);
    // φ₃ stays parallel for every r, the partners only at r = ½.
    const auto other = okumura_su2_check(se, 1.0, x);
    EXPECT_LT(other[2], 1e-8);
    EXPECT_GT(other[0], 0.1);
  }
  EXPECT_THROW(okumura_su2_check(su2_from_nearly_sasakian(ns(), 1.0), 0.5, sample_points(se.manifold, 1, kSeed)[0]),
               Error);
}

TEST(Connections, CanonicalIsOkumuraOfDeformation) {
  for (const Vec& x : sample_points(ns().manifold, 3, kSeed)) {
    EXPECT_LT(canonical_okumura_residual(ns(), 1.0, 0.5, x), 1e-8);
    EXPECT_GT(canonical_okumura_residual(ns(), 1.0, 0.0, x), 0.1);
  }
}

TEST(Connections, SasakianReductionToOkumura) {
  const AcmStructure se = se_deformation().structure.acm(3, Mode::Sasakian);
  for (double r : tested_r()) {
    const Vec x = sample_points(se.manifold, 1, kSeed)[0];
    EXPECT_LT(sasakian_reduction_residual(se, r, x), 1e-9) << r;
    const Vec xi = se.xi(x);
    EXPECT_LT(max_abs(okumura(se, r, x, xi, xi)), 1e-14);
  }
}

TEST(Connections, SkewTorsionOnlyForSasakian) {
  const CanonicalConnection c = canonical_connection(ns(), 1.0);
  const CanonicalConnection s = canonical_connection(se_deformation().structure.acm(3, Mode::Sasakian), 1.0);
  for (const Vec& x : sample_points(c.base.manifold, 3, kSeed)) {
    EXPECT_GT(torsion_skew_defect(c, x), 0.1);
    EXPECT_LT(torsion_skew_defect(s, x), 1e-8);
    EXPECT_LT(parallelism_report(s, x).structure_max(), 1e-8);
  }
}
