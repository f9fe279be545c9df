#include "formflow/fields.hpp"

#include <algorithm>
#include <stdexcept>

namespace formflow {

namespace {

struct AxisLoop {
  std::int64_t n_outer;
  std::int64_t n_ax;
  std::int64_t n_inner;
};

AxisLoop axis_loop(const GridSpec& g, int axis) {
  if (axis < 0 || axis >= g.dim) throw std::out_of_range("axis out of range");
  AxisLoop l{1, g.sizes[axis], 1};
  for (int a = 0; a < axis; ++a) l.n_outer *= g.sizes[a];
  for (int a = axis + 1; a < g.dim; ++a) l.n_inner *= g.sizes[a];
  return l;
}

}  // namespace

void diff_plane_acc(const GridSpec& g, const double* in, double* out, int axis, double coef) {
  const AxisLoop l = axis_loop(g, axis);
  const double c = coef / (2.0 * g.spacing(axis));
  for (std::int64_t o = 0; o < l.n_outer; ++o) {
    const std::int64_t base = o * l.n_ax * l.n_inner;
    for (std::int64_t i = 0; i < l.n_ax; ++i) {
      const std::int64_t ip = (i + 1 == l.n_ax) ? 0 : i + 1;
      const std::int64_t im = (i == 0) ? l.n_ax - 1 : i - 1;
      const double* rp = in + base + ip * l.n_inner;
      const double* rm = in + base + im * l.n_inner;
      double* ro = out + base + i * l.n_inner;
      for (std::int64_t r = 0; r < l.n_inner; ++r) ro[r] += c * (rp[r] - rm[r]);
    }
  }
}

void diff_plane(const GridSpec& g, const double* in, double* out, int axis) {
  std::fill(out, out + g.npoints(), 0.0);
  diff_plane_acc(g, in, out, axis, 1.0);
}

void diff2_plane(const GridSpec& g, const double* in, double* out, int axis) {
  const AxisLoop l = axis_loop(g, axis);
  const double h = g.spacing(axis);
  const double c = 1.0 / (h * h);
  for (std::int64_t o = 0; o < l.n_outer; ++o) {
    const std::int64_t base = o * l.n_ax * l.n_inner;
    for (std::int64_t i = 0; i < l.n_ax; ++i) {
      const std::int64_t ip = (i + 1 == l.n_ax) ? 0 : i + 1;
      const std::int64_t im = (i == 0) ? l.n_ax - 1 : i - 1;
      const double* rp = in + base + ip * l.n_inner;
      const double* rm = in + base + im * l.n_inner;
      const double* r0 = in + base + i * l.n_inner;
      double* ro = out + base + i * l.n_inner;
      for (std::int64_t r = 0; r < l.n_inner; ++r) ro[r] = c * (rp[r] - 2.0 * r0[r] + rm[r]);
    }
  }
}

void diff2_plane_acc(const GridSpec& g, const double* in, double* out, int axis_a, int axis_b,
                     double coef) {
  const std::int64_t n = g.npoints();
  std::vector<double> tmp(n);
  if (axis_a == axis_b) {
    diff2_plane(g, in, tmp.data(), axis_a);
  } else {
    std::vector<double> t1(n, 0.0);
    diff_plane_acc(g, in, t1.data(), axis_b, 1.0);
    std::fill(tmp.begin(), tmp.end(), 0.0);
    diff_plane_acc(g, t1.data(), tmp.data(), axis_a, 1.0);
  }
  for (std::int64_t i = 0; i < n; ++i) out[i] += coef * tmp[i];
}

ScalarField partial(const ScalarField& f, int axis) {
  ScalarField out(f.grid);
  diff_plane(f.grid, f.v.data(), out.v.data(), axis);
  return out;
}

FormField partial(const FormField& f, int axis) {
  FormField out(f.grid, f.degree);
  for (int c = 0; c < f.ncomp; ++c) diff_plane(f.grid, f.plane(c), out.plane(c), axis);
  return out;
}

TensorField partial(const TensorField& f, int axis) {
  TensorField out(f.grid, f.p_up, f.q_low);
  for (int c = 0; c < f.ncomp; ++c) diff_plane(f.grid, f.plane(c), out.plane(c), axis);
  return out;
}

ScalarField second_partial(const ScalarField& f, int axis_a, int axis_b) {
  ScalarField out(f.grid);
  diff2_plane_acc(f.grid, f.v.data(), out.v.data(), axis_a, axis_b, 1.0);
  return out;
}

FormField second_partial(const FormField& f, int axis_a, int axis_b) {
  FormField out(f.grid, f.degree);
  for (int c = 0; c < f.ncomp; ++c)
    diff2_plane_acc(f.grid, f.plane(c), out.plane(c), axis_a, axis_b, 1.0);
  return out;
}

TensorField second_partial(const TensorField& f, int axis_a, int axis_b) {
  TensorField out(f.grid, f.p_up, f.q_low);
  for (int c = 0; c < f.ncomp; ++c)
    diff2_plane_acc(f.grid, f.plane(c), out.plane(c), axis_a, axis_b, 1.0);
  return out;
}

double integrate(const ScalarField& density) {
  double s = 0.0;
  for (double x : density.v) s += x;
  return s * density.grid.cell_volume();
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void axpy(double a, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

void scale(std::vector<double>& x, double a) {
  for (double& v : x) v *= a;
}

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace formflow
