#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "formflow/grid.hpp"

namespace formflow {

/// Component-major storage: one contiguous plane of npoints values per
/// component. Snapshot files use point-major order (see snapshot.hpp).

struct ScalarField {
  GridSpec grid;
  std::vector<double> v;

  ScalarField() = default;
  explicit ScalarField(const GridSpec& g) : grid(g), v(g.npoints(), 0.0) {}
};

/// Antisymmetric covariant tensor of degree p; stored components are the
/// values on the coordinate basis for strictly increasing multi-indices:
/// alpha = sum_{i1<...<ip} a_I dx^I, a_I = alpha(e_{i1}, ..., e_{ip}).
struct FormField {
  GridSpec grid;
  int degree = 0;
  int ncomp = 0;
  std::vector<double> data;

  FormField() = default;
  FormField(const GridSpec& g, int p)
      : grid(g), degree(p), ncomp(static_cast<int>(binomial(g.dim, p))), data() {
    if (p < 0 || p > g.dim) throw std::invalid_argument("FormField: bad degree");
    data.assign(static_cast<std::size_t>(ncomp) * grid.npoints(), 0.0);
  }

  double* plane(int c) { return data.data() + static_cast<std::size_t>(c) * grid.npoints(); }
  const double* plane(int c) const {
    return data.data() + static_cast<std::size_t>(c) * grid.npoints();
  }
  double& at(int c, std::int64_t pt) { return plane(c)[pt]; }
  double at(int c, std::int64_t pt) const { return plane(c)[pt]; }

  const FormIndexTable& table() const { return FormIndexTable::get(grid.dim, degree); }
};

/// Tensor of valence (p upper, q lower); components indexed by upper indices
/// first, all in [0, dim): comp = ((u1*dim + u2)...)*dim + l1 ...
struct TensorField {
  GridSpec grid;
  int p_up = 0;
  int q_low = 0;
  int ncomp = 0;
  std::vector<double> data;

  TensorField() = default;
  TensorField(const GridSpec& g, int p, int q) : grid(g), p_up(p), q_low(q) {
    std::int64_t n = 1;
    for (int i = 0; i < p + q; ++i) n *= g.dim;
    ncomp = static_cast<int>(n);
    data.assign(static_cast<std::size_t>(ncomp) * grid.npoints(), 0.0);
  }

  double* plane(int c) { return data.data() + static_cast<std::size_t>(c) * grid.npoints(); }
  const double* plane(int c) const {
    return data.data() + static_cast<std::size_t>(c) * grid.npoints();
  }
  double& at(int c, std::int64_t pt) { return plane(c)[pt]; }
  double at(int c, std::int64_t pt) const { return plane(c)[pt]; }
};

// --- plane-level stencils (periodic, O(h^2) centered) ---

/// out = d(in)/dx_a, one component plane.
void diff_plane(const GridSpec& g, const double* in, double* out, int axis);
/// out += coef * d(in)/dx_a.
void diff_plane_acc(const GridSpec& g, const double* in, double* out, int axis, double coef);
/// out = 3-point second difference along one axis.
void diff2_plane(const GridSpec& g, const double* in, double* out, int axis);
/// out += coef * second difference; a == b uses the 3-point stencil, a != b
/// composes centered differences.
void diff2_plane_acc(const GridSpec& g, const double* in, double* out, int axis_a, int axis_b,
                     double coef);

// --- whole-field operations ---

ScalarField partial(const ScalarField& f, int axis);
FormField partial(const FormField& f, int axis);
TensorField partial(const TensorField& f, int axis);

ScalarField second_partial(const ScalarField& f, int axis_a, int axis_b);
FormField second_partial(const FormField& f, int axis_a, int axis_b);
TensorField second_partial(const TensorField& f, int axis_a, int axis_b);

/// Rectangle rule on the periodic grid; spectrally accurate for smooth data.
double integrate(const ScalarField& density);

double max_abs(const std::vector<double>& v);
inline double max_abs(const ScalarField& f) { return max_abs(f.v); }
inline double max_abs(const FormField& f) { return max_abs(f.data); }
inline double max_abs(const TensorField& f) { return max_abs(f.data); }

void axpy(double a, const std::vector<double>& x, std::vector<double>& y);   // y += a x
void scale(std::vector<double>& x, double a);

bool all_finite(const std::vector<double>& v);

}  // namespace formflow
