#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace formflow {

constexpr int kMaxDim = 6;

/// Periodic structured grid on a flat torus of even dimension 2n (n = 1, 2, 3).
/// Points are ordered row-major with axis 0 slowest, so snapshots are
/// bit-reproducible.
struct GridSpec {
  int dim = 0;
  std::array<int, kMaxDim> sizes{};
  std::array<double, kMaxDim> lengths{};

  GridSpec() = default;
  GridSpec(int dim_, const std::vector<int>& sizes_, const std::vector<double>& lengths_);

  double spacing(int axis) const { return lengths[axis] / sizes[axis]; }
  double min_spacing() const;
  double cell_volume() const;

  std::int64_t npoints() const {
    std::int64_t n = 1;
    for (int a = 0; a < dim; ++a) n *= sizes[a];
    return n;
  }

  /// Point stride of axis a (axis 0 slowest).
  std::int64_t stride(int axis) const {
    std::int64_t s = 1;
    for (int a = axis + 1; a < dim; ++a) s *= sizes[a];
    return s;
  }

  /// Coordinate of grid point index along axis: x_a = i_a * h_a.
  double coord(std::int64_t point, int axis) const {
    std::int64_t s = stride(axis);
    std::int64_t i = (point / s) % sizes[axis];
    return static_cast<double>(i) * spacing(axis);
  }

  bool operator==(const GridSpec& o) const {
    if (dim != o.dim) return false;
    for (int a = 0; a < dim; ++a)
      if (sizes[a] != o.sizes[a] || lengths[a] != o.lengths[a]) return false;
    return true;
  }
};

inline std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

/// Index tables for degree-p forms in dimension D: strictly increasing
/// multi-indices, lookup with antisymmetric sign, complement pairing for the
/// Hodge star, and term lists for the exterior derivative and interior
/// product. Cached per (D, p).
struct FormIndexTable {
  int dim = 0;
  int degree = 0;
  int ncomp = 0;
  // increasing multi-indices, packed: idx[c * degree + m]
  std::vector<int> idx;
  // complement component position and permutation sign of (K, J) where
  // K = complement(J): star_pos[j] = position of K, star_sign[j] = sgn(K, J)
  std::vector<int> star_pos;
  std::vector<double> star_sign;

  // exterior derivative terms: for output component c of the (p+1)-form,
  // term m in [0, p+1): differentiate input component dsub_pos[c][m] along
  // axis daxis[c][m] with sign dsign[c][m].
  struct DTerm {
    int axis;
    int in_comp;
    double sign;
  };
  std::vector<std::vector<DTerm>> d_terms;  // built on the table of degree p+1 from degree p

  // interior product terms: for output component c of the (p-1)-form and
  // vector slot a: (pos, sign) of the p-form component containing (a, J_c),
  // or pos < 0 when a is already in J_c.
  struct ITerm {
    int in_comp;
    double sign;
  };
  std::vector<ITerm> iota_terms;  // [c * dim + a]

  const int* comp(int c) const { return idx.data() + static_cast<std::size_t>(c) * degree; }

  /// Position and sign of an arbitrary index tuple (0 if repeated index).
  std::pair<int, double> lookup(const int* tuple) const;

  static const FormIndexTable& get(int dim, int degree);
};

double permutation_sign(const int* seq, int n);

}  // namespace formflow
