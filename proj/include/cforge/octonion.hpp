#pragma once

// Cross product on Im(O) = R^7 from a Fano-plane multiplication table.

#include <array>
#include <cstdint>

#include "cforge/error.hpp"
#include "cforge/vec7.hpp"

namespace cforge {

/// e_i × e_j = sign[i][j] · e_{index[i][j]} (zero-based; sign 0 on the diagonal).
struct CayleyTable {
  std::array<std::array<int, 7>, 7> sign{};
  std::array<std::array<int, 7>, 7> index{};
};

/// Builds the table from seven oriented lines (a,b,c), 1-based, meaning
/// e_a×e_b = e_c and cyclic.
CayleyTable table_from_lines(const std::array<std::array<int, 3>, 7>& lines);

/// Compiled-in table. Oriented lines 123, 145, 176, 257, 246, 347, 365: one of
/// the four completions that keep e_i×e_7 fixed as
///   e1×e7 = e6, e2×e7 = -e5, e3×e7 = -e4, e4×e7 = e3, e5×e7 = e2, e6×e7 = -e1
/// and satisfy norm composition.
const CayleyTable& standard_table();

template <class T>
Vec7<T> cross(const CayleyTable& t, const Vec7<T>& u, const Vec7<T>& v) {
  Vec7<T> out = Vec7<T>::zero();
  for (int i = 0; i < 7; ++i) {
    for (int j = 0; j < 7; ++j) {
      const int s = t.sign[i][j];
      if (s == 0) continue;
      const int k = t.index[i][j];
      if (s > 0) {
        out[k] += u[i] * v[j];
      } else {
        out[k] -= u[i] * v[j];
      }
    }
  }
  return out;
}

template <class T>
Vec7<T> cross(const Vec7<T>& u, const Vec7<T>& v) {
  return cross(standard_table(), u, v);
}

struct TableResidual {
  /// max |‖u×v‖² − ‖u‖²‖v‖² + ⟨u,v⟩²| / (‖u‖²‖v‖²)
  double norm_composition = 0.0;
  /// max ‖u×v + v×u‖ / (‖u‖‖v‖)
  double antisymmetry = 0.0;
  /// max |⟨u×v, u⟩| / (‖u‖²‖v‖), same for v
  double orthogonality = 0.0;

  double max() const;
};

/// Random Gaussian pairs, deterministic in the seed. samples >= 1.
TableResidual table_consistency_residual(const CayleyTable& t, int samples, std::uint64_t seed);
TableResidual table_consistency_residual(int samples, std::uint64_t seed);
/// Same quantities over all 49 basis pairs.
TableResidual basis_pair_residual(const CayleyTable& t);

}  // namespace cforge
