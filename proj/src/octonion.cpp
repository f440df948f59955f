#include "cforge/octonion.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "cforge/error.hpp"

namespace cforge {

CayleyTable table_from_lines(const std::array<std::array<int, 3>, 7>& lines) {
  CayleyTable t;
  for (const auto& line : lines) {
    for (int r = 0; r < 3; ++r) {
      const int a = line[static_cast<std::size_t>(r)] - 1;
      const int b = line[static_cast<std::size_t>((r + 1) % 3)] - 1;
      const int c = line[static_cast<std::size_t>((r + 2) % 3)] - 1;
      if (a < 0 || a > 6 || b < 0 || b > 6 || c < 0 || c > 6) {
        throw Error(ErrorCode::InvalidArgument, "Fano line index out of range");
      }
      t.sign[a][b] = 1;
      t.index[a][b] = c;
      t.sign[b][a] = -1;
      t.index[b][a] = c;
    }
  }
  for (int i = 0; i < 7; ++i) {
    for (int j = 0; j < 7; ++j) {
      if (i != j && t.sign[i][j] == 0) throw Error(ErrorCode::InvalidArgument, "Fano lines do not cover all pairs");
    }
  }
  return t;
}

const CayleyTable& standard_table() {
  static const CayleyTable table = table_from_lines(
      {{{1, 2, 3}, {1, 4, 5}, {1, 7, 6}, {2, 5, 7}, {2, 4, 6}, {3, 4, 7}, {3, 6, 5}}});
  return table;
}

double TableResidual::max() const { return std::max({norm_composition, antisymmetry, orthogonality}); }

namespace {

void accumulate(const CayleyTable& t, const Vec& u, const Vec& v, TableResidual& r) {
  const double uu = dot(u, u);
  const double vv = dot(v, v);
  if (uu == 0.0 || vv == 0.0) return;
  const Vec w = cross(t, u, v);
  const double uv = dot(u, v);
  r.norm_composition = std::max(r.norm_composition, std::abs(dot(w, w) - uu * vv + uv * uv) / (uu * vv));
  r.antisymmetry = std::max(r.antisymmetry, norm(w + cross(t, v, u)) / std::sqrt(uu * vv));
  r.orthogonality = std::max({r.orthogonality, std::abs(dot(w, u)) / (uu * std::sqrt(vv)),
                              std::abs(dot(w, v)) / (vv * std::sqrt(uu))});
}

}  // namespace

TableResidual table_consistency_residual(const CayleyTable& t, int samples, std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorCode::InvalidArgument, "samples must be at least 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  TableResidual r;
  for (int s = 0; s < samples; ++s) {
    Vec u;
    Vec v;
    for (int i = 0; i < 7; ++i) u[i] = g(rng);
    for (int i = 0; i < 7; ++i) v[i] = g(rng);
    accumulate(t, u, v, r);
  }
  return r;
}

TableResidual table_consistency_residual(int samples, std::uint64_t seed) {
  return table_consistency_residual(standard_table(), samples, seed);
}

TableResidual basis_pair_residual(const CayleyTable& t) {
  TableResidual r;
  for (int i = 0; i < 7; ++i) {
    for (int j = 0; j < 7; ++j) accumulate(t, Vec::unit(i), Vec::unit(j), r);
  }
  return r;
}

}  // namespace cforge
