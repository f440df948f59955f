#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "cforge/calculus.hpp"
#include "cforge/manifold.hpp"

using namespace cforge;

namespace {

// Linear field x -> A x with A a 7x7 matrix given row-major.
VTensor linear_field(const ManifoldDescriptor& m, const Mat7& a) {
  return VTensor(0, [m, a](const auto& x, auto) {
    using T = scalar_of<decltype(x)>;
    Vec7<T> out = Vec7<T>::zero();
    for (int i = 0; i < 7; ++i) {
      for (int j = 0; j < 7; ++j) out[i] = out[i] + a(i, j) * x[j];
    }
    return m.project(x, out);
  });
}

Mat7 random_skew(std::mt19937_64& rng, const ManifoldDescriptor& m) {
  std::normal_distribution<double> g;
  Mat7 a = Mat7::Zero();
  for (int i = 0; i < 7; ++i) {
    for (int j = i + 1; j < 7; ++j) {
      if (!m.active[i] || !m.active[j]) continue;
      a(i, j) = g(rng);
      a(j, i) = -a(i, j);
    }
  }
  return a;
}

// Skew rotations about the center keep the sphere invariant, so A(x - c) is tangent.
VTensor rotation_field(const ManifoldDescriptor& m, const Mat7& a) {
  return VTensor(0, [m, a](const auto& x, auto) {
    using T = scalar_of<decltype(x)>;
    const Vec7<T> o = m.offset(x);
    Vec7<T> out = Vec7<T>::zero();
    for (int i = 0; i < 7; ++i) {
      for (int j = 0; j < 7; ++j) out[i] = out[i] + a(i, j) * o[j];
    }
    return out;
  });
}

std::vector<ManifoldDescriptor> all_spheres() {
  return {s6_descriptor(), s5_geodesic_descriptor(), s5_umbilical_descriptor()};
}

}  // namespace

TEST(TangentProject, RadialDirectionVanishes) {
  const auto m = s6_descriptor();
  EXPECT_LT(max_abs(tangent_project(m, Vec::unit(0), Vec::unit(0))), 1e-15);
  const Vec t = tangent_project(m, Vec::unit(0), Vec::unit(1));
  EXPECT_LT(max_abs(t - Vec::unit(1)), 1e-15);
}

TEST(TangentProject, IdempotentAndSymmetric) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (const auto& m : all_spheres()) {
    const auto pts = sample_points(m, 50, 11);
    for (const Vec& x : pts) {
      Vec v;
      Vec w;
      for (int i = 0; i < 7; ++i) {
        v[i] = g(rng);
        w[i] = g(rng);
      }
      const Vec pv = tangent_project(m, x, v);
      EXPECT_LT(max_abs(tangent_project(m, x, pv) - pv), 1e-14);
      EXPECT_NEAR(dot(pv, w), dot(v, tangent_project(m, x, w)), 1e-13);
    }
  }
}

TEST(TangentProject, OffManifoldPointThrows) {
  const auto m = s6_descriptor();
  try {
    tangent_project(m, 1.1 * Vec::unit(0), Vec::unit(1));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PointOffManifold);
  }
}

TEST(Sampling, DeterministicAndOnManifold) {
  const auto m = s6_descriptor();
  const auto a = sample_points(m, 5, 42);
  const auto b = sample_points(m, 5, 42);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].c, b[i].c);
    EXPECT_LT(std::abs(norm(a[i]) - 1.0), 1e-12);
  }
  const auto u = s5_umbilical_descriptor();
  for (const Vec& x : sample_points(u, 100, 7)) {
    EXPECT_EQ(x[6], std::sqrt(2.0) / 2.0);
    EXPECT_LT(u.defect(x), 1e-12);
  }
  EXPECT_THROW(sample_points(m, 0, 1), Error);
}

TEST(Frame, SpansTangentSpaceAndIsOrthonormal) {
  const auto m = s6_descriptor();
  const auto frame = orthonormal_frame(m, Vec::unit(6));
  ASSERT_EQ(frame.size(), 6u);
  for (const Vec& e : frame) EXPECT_LT(std::abs(e[6]), 1e-15);
  for (const auto& mm : all_spheres()) {
    for (const Vec& x : sample_points(mm, 10, 5)) {
      for (int seeded = 0; seeded < 2; ++seeded) {
        const auto f = seeded ? orthonormal_frame(mm, x, 99) : orthonormal_frame(mm, x);
        ASSERT_EQ(static_cast<int>(f.size()), mm.dim());
        for (std::size_t i = 0; i < f.size(); ++i) {
          for (std::size_t j = 0; j < f.size(); ++j) {
            EXPECT_NEAR(dot(f[i], f[j]), i == j ? 1.0 : 0.0, 1e-12);
          }
          EXPECT_LT(std::abs(dot(f[i], mm.radial(x))), 1e-12);
        }
      }
    }
  }
}

TEST(Frame, DeterministicBitwise) {
  const auto m = s5_umbilical_descriptor();
  const Vec x = sample_points(m, 1, 8)[0];
  const auto a = orthonormal_frame(m, x, 17);
  const auto b = orthonormal_frame(m, x, 17);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].c, b[i].c);
}

TEST(Frame, ScaledMetricFrameIsOrthonormalForScaledMetric) {
  const auto m = s5_umbilical_descriptor().with_metric_scale(2.0);
  const Vec x = sample_points(m, 1, 2)[0];
  const auto f = orthonormal_frame(m, x);
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = 0; j < f.size(); ++j) EXPECT_NEAR(m.inner(f[i], f[j]), i == j ? 1.0 : 0.0, 1e-12);
  }
}

TEST(Jets, MatchCentralFiniteDifferences) {
  const auto m = s5_umbilical_descriptor();
  std::mt19937_64 rng(20);
  const Mat7 a = random_skew(rng, m);
  // A nonlinear field: cubic in x.
  const VTensor f(0, [a](const auto& x, auto) {
    using T = scalar_of<decltype(x)>;
    Vec7<T> out = Vec7<T>::zero();
    for (int i = 0; i < 7; ++i) {
      for (int j = 0; j < 7; ++j) out[i] = out[i] + a(i, j) * x[j] * x[(i + j) % 7] * x[i];
    }
    return out;
  });
  std::normal_distribution<double> g;
  for (int probe = 0; probe < 20; ++probe) {
    Vec x;
    Vec v;
    for (int i = 0; i < 7; ++i) {
      x[i] = g(rng);
      v[i] = g(rng);
    }
    const Vec jet = derivative_part(f(seed_direction(x, v)));
    const double h = 1e-5;
    const Vec fd = (f(x + h * v) - f(x - h * v)) / (2.0 * h);
    EXPECT_LT(max_abs(jet - fd), 1e-6 * std::max(1.0, max_abs(jet)));
  }
}

TEST(LeviCivita, GreatCircleIsGeodesic) {
  const auto m = s6_descriptor();
  Mat7 a = Mat7::Zero();
  a(1, 0) = 1.0;
  a(0, 1) = -1.0;
  const VTensor x = rotation_field(m, a);
  EXPECT_LT(max_abs(x(Vec::unit(0)) - Vec::unit(1)), 1e-15);
  EXPECT_LT(max_abs(levi_civita(m, x, x)(Vec::unit(0))), 1e-14);
}

TEST(LeviCivita, TorsionFreeAndMetric) {
  std::mt19937_64 rng(4);
  for (const auto& m : all_spheres()) {
    const VTensor x = linear_field(m, Mat7::Random());
    const VTensor y = linear_field(m, Mat7::Random());
    const VTensor z = linear_field(m, Mat7::Random());
    const STensor g = metric_tensor(m);
    const STensor gyz = contract(g, {y, z});
    for (const Vec& p : sample_points(m, 20, 6)) {
      const Vec torsion = levi_civita(m, x, y)(p) - levi_civita(m, y, x)(p) - lie_bracket(m, x, y)(p);
      EXPECT_LT(max_abs(torsion), 1e-10);
      const double lhs = directional(x, gyz)(p);
      const double rhs = m.inner(levi_civita(m, x, y)(p), z(p)) + m.inner(y(p), levi_civita(m, x, z)(p));
      EXPECT_NEAR(lhs, rhs, 1e-10);
      // (∇g) = 0 through the tensor rule.
      const STensor ng = nabla(Connection::levi_civita(m), g);
      EXPECT_NEAR(ng(p, x(p), y(p), z(p)), 0.0, 1e-10);
    }
  }
}

TEST(LieBracket, MatchesMatrixCommutator) {
  std::mt19937_64 rng(9);
  const auto m = s6_descriptor();
  const Mat7 a = random_skew(rng, m);
  const Mat7 b = random_skew(rng, m);
  const VTensor x = rotation_field(m, a);
  const VTensor y = rotation_field(m, b);
  // [Ax, Bx] = (BA - AB)x for linear fields.
  const VTensor oracle = rotation_field(m, b * a - a * b);
  for (const Vec& p : sample_points(m, 20, 1)) {
    EXPECT_LT(max_abs(lie_bracket(m, x, y)(p) - oracle(p)), 1e-12);
    EXPECT_LT(max_abs(lie_bracket(m, x, x)(p)), 1e-15);
  }
}

TEST(LieBracket, JacobiIdentity) {
  for (const auto& m : all_spheres()) {
    const VTensor x = linear_field(m, Mat7::Random());
    const VTensor y = linear_field(m, Mat7::Random());
    const VTensor z = linear_field(m, Mat7::Random());
    const VTensor jac = lie_bracket(m, x, lie_bracket(m, y, z)) + lie_bracket(m, y, lie_bracket(m, z, x)) +
                        lie_bracket(m, z, lie_bracket(m, x, y));
    for (const Vec& p : sample_points(m, 10, 2)) EXPECT_LT(max_abs(jac(p)), 1e-9);
  }
}

TEST(Extension, AgreesOnManifoldAndRescalesOff) {
  const auto m = s5_geodesic_descriptor();
  const VTensor xi(0, [](const auto& x, auto) {
    using T = scalar_of<decltype(x)>;
    Vec7<T> out = Vec7<T>::zero();
    out[5] = x[0];
    out[0] = -x[5];
    return out;
  });
  const VTensor e0 = extend_field(m, xi);
  const VTensor e1 = extend_field(m, xi, 1);
  EXPECT_LT(max_abs(e0(Vec::unit(0)) - xi(Vec::unit(0))), 1e-15);
  // At 1.1 e1 the retraction is e1; exponent 1 scales by 1.1.
  EXPECT_LT(max_abs(e0(1.1 * Vec::unit(0)) - Vec::unit(5)), 1e-15);
  EXPECT_LT(max_abs(e1(1.1 * Vec::unit(0)) - 1.1 * Vec::unit(5)), 1e-15);
  for (const Vec& p : sample_points(m, 10, 3)) {
    const Vec q = 1.3 * p;
    EXPECT_LT(max_abs(m.project(q, e1(q)) - e1(q)), 1e-12);
  }
}

TEST(Extension, CovariantDerivativeIsIndependentOfExtension) {
  const auto m = s5_umbilical_descriptor();
  std::mt19937_64 rng(12);
  const Mat7 a = random_skew(rng, m);
  const VTensor endo(1, [m, a](const auto& x, auto args) {
    using T = scalar_of<decltype(x)>;
    const Vec7<T>& v = args[0];
    Vec7<T> out = Vec7<T>::zero();
    for (int i = 0; i < 7; ++i) {
      for (int j = 0; j < 7; ++j) out[i] = out[i] + a(i, j) * v[j] * x[(i + 2 * j) % 7];
    }
    return m.project(x, out);
  });
  const Connection lc = Connection::levi_civita(m);
  const VTensor d0 = nabla(lc, extend_field(m, endo, 0));
  const VTensor d1 = nabla(lc, extend_field(m, endo, 1));
  for (const Vec& p : sample_points(m, 10, 4)) {
    const auto frame = orthonormal_frame(m, p);
    for (const Vec& u : frame) {
      for (const Vec& v : frame) EXPECT_LT(max_abs(d0(p, u, v) - d1(p, u, v)), 1e-10);
    }
  }
}

TEST(Forms, WedgeMatchesPermutationSum) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  Mat7 b = Mat7::Zero();
  for (int i = 0; i < 7; ++i) {
    for (int j = i + 1; j < 7; ++j) {
      b(i, j) = g(rng);
      b(j, i) = -b(i, j);
    }
  }
  Vec a;
  for (int i = 0; i < 7; ++i) a[i] = g(rng);
  const STensor one(1, [a](const auto& x, auto args) {
    using T = scalar_of<decltype(x)>;
    return dot(lift<T>(a), args[0]);
  });
  const STensor two(2, [b](const auto& x, auto args) {
    using T = scalar_of<decltype(x)>;
    T acc = T(0.0);
    for (int i = 0; i < 7; ++i) {
      for (int j = 0; j < 7; ++j) acc = acc + b(i, j) * args[0][i] * args[1][j];
    }
    return acc;
  });
  const STensor w = wedge(one, two);
  std::vector<Vec> vs(3);
  for (auto& v : vs) {
    for (int i = 0; i < 7; ++i) v[i] = g(rng);
  }
  // Oracle: (1/(1!2!)) Σ_σ sgn(σ) a(v_σ0) b(v_σ1, v_σ2).
  std::array<int, 3> perm{0, 1, 2};
  double oracle = 0.0;
  do {
    int inv = 0;
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) inv += perm[i] > perm[j] ? 1 : 0;
    }
    const double term = one(Vec::zero(), vs[perm[0]]) * two(Vec::zero(), vs[perm[1]], vs[perm[2]]);
    oracle += (inv % 2 ? -1.0 : 1.0) * term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  oracle /= 2.0;
  EXPECT_NEAR(w(Vec::zero(), vs[0], vs[1], vs[2]), oracle, 1e-12);
  // u∧v = u⊗v - v⊗u.
  const STensor uv = wedge(one, one);
  EXPECT_NEAR(uv(Vec::zero(), vs[0], vs[1]), 0.0, 1e-12);
}

TEST(Forms, ExteriorDerivativeOfExactFormVanishes) {
  for (const auto& m : all_spheres()) {
    // df for f = x^1 x^2 + x^3, evaluated on ambient vectors.
    const STensor df(1, [](const auto& x, auto args) {
      const auto& v = args[0];
      return x[1] * v[0] + x[0] * v[1] + v[2];
    });
    for (const Vec& p : sample_points(m, 10, 9)) {
      const auto f = orthonormal_frame(m, p);
      const std::array<Vec, 2> args{f[0], f[1]};
      EXPECT_LT(std::abs(exterior_derivative(m, df, p, args)), 1e-10);
    }
  }
}

TEST(Forms, ExteriorDerivativeMatchesCovariantFormula) {
  // dα(X,Y,Z) = (∇_Xα)(Y,Z) - (∇_Yα)(X,Z) + (∇_Zα)(X,Y) for torsion-free ∇.
  const auto m = s5_umbilical_descriptor();
  std::mt19937_64 rng(31);
  const Mat7 b = random_skew(rng, m);
  const STensor alpha(2, [b](const auto& x, auto args) {
    using T = scalar_of<decltype(x)>;
    T acc = T(0.0);
    for (int i = 0; i < 7; ++i) {
      for (int j = 0; j < 7; ++j) acc = acc + b(i, j) * args[0][i] * args[1][j] * (x[i] + x[j] * x[0]);
    }
    return acc;
  });
  const STensor na = nabla(Connection::levi_civita(m), alpha);
  for (const Vec& p : sample_points(m, 10, 10)) {
    const auto f = orthonormal_frame(m, p);
    const std::array<Vec, 3> args{f[0], f[2], f[4]};
    const double oracle = na(p, f[0], f[2], f[4]) - na(p, f[2], f[0], f[4]) + na(p, f[4], f[0], f[2]);
    EXPECT_NEAR(exterior_derivative(m, alpha, p, args), oracle, 1e-10);
  }
}

TEST(Forms, UnsupportedDegreeThrows) {
  const auto m = s6_descriptor();
  const STensor four(4, [](const auto& x, auto) { return x[0]; });
  const std::array<Vec, 5> args{};
  try {
    exterior_derivative(m, four, Vec::unit(0), args);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedDegree);
  }
}

TEST(Curvature, RoundSphereOracle) {
  for (const auto& m : all_spheres()) {
    const double k = 1.0 / (m.radius * m.radius);
    for (const Vec& p : sample_points(m, 10, 13)) {
      const auto t = sample_tangents(m, p, 3, 14);
      const Vec r = riemann(m, p, t[0], t[1], t[2]);
      const Vec oracle = k * (dot(t[1], t[2]) * t[0] - dot(t[0], t[2]) * t[1]);
      EXPECT_LT(max_abs(r - oracle), 1e-8);
      EXPECT_LT(max_abs(riemann(m, p, t[0], t[0], t[2])), 1e-12);
      const Vec bianchi = r + riemann(m, p, t[1], t[2], t[0]) + riemann(m, p, t[2], t[0], t[1]);
      EXPECT_LT(max_abs(bianchi), 1e-8);
    }
  }
}

TEST(Curvature, ScalarRicciSectional) {
  const Vec p6 = sample_points(s6_descriptor(), 1, 1)[0];
  EXPECT_NEAR(scalar_curvature(s6_descriptor(), p6), 30.0, 1e-6);
  const auto geo = s5_geodesic_descriptor();
  const Vec pg = sample_points(geo, 1, 1)[0];
  EXPECT_NEAR(scalar_curvature(geo, pg), 20.0, 1e-6);
  const auto ric = ricci_matrix(geo, pg);
  for (std::size_t i = 0; i < ric.size(); ++i) {
    for (std::size_t j = 0; j < ric.size(); ++j) EXPECT_NEAR(ric[i][j], i == j ? 4.0 : 0.0, 1e-7);
  }
  const auto umb = s5_umbilical_descriptor();
  const Vec pu = sample_points(umb, 1, 1)[0];
  EXPECT_NEAR(scalar_curvature(umb, pu), 40.0, 1e-6);
  const auto t = sample_tangents(umb, pu, 2, 3);
  EXPECT_NEAR(sectional(umb, pu, t[0], t[1]), 2.0, 1e-7);
  EXPECT_THROW(sectional(umb, pu, t[0], 2.0 * t[0]), Error);
  // c·g: scalar curvature divides by c, Ricci unchanged.
  EXPECT_NEAR(scalar_curvature(umb.with_metric_scale(2.0), pu), 20.0, 1e-6);
}

TEST(Jets, DepthExhaustionThrows) {
  const auto m = s6_descriptor();
  const Connection lc = Connection::levi_civita(m);
  VTensor f = constant_field(m, Vec::unit(1));
  for (int i = 0; i < 4; ++i) f = nabla(lc, f);
  const Vec p = Vec::unit(0);
  const Vec u = Vec::unit(2);
  try {
    f(p, u, u, u, u);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::JetDepthExceeded);
  }
}
