#include "formflow/hermitian.hpp"

#include <algorithm>
#include <cmath>

#include "formflow/detail/pointload.hpp"
#include "formflow/smallmat.hpp"

namespace formflow {

using detail::load_antisym;
using detail::load_mat;
using detail::store_antisym;
using detail::store_mat;

namespace {

template <int D>
void build_metric(const TensorField& g_in, MetricField& out) {
  const std::int64_t n = g_in.grid.npoints();
  out.g = g_in;
  out.g_inv = TensorField(g_in.grid, 2, 0);
  out.sqrt_det = ScalarField(g_in.grid);
  bool spd = true;
  double gm[D * D], L[D * D], gi[D * D];
  for (std::int64_t pt = 0; pt < n; ++pt) {
    load_mat<D>(g_in, pt, gm);
    if (!sym_cholesky<D>(gm, L)) {
      spd = false;
      out.sqrt_det.v[pt] = 0.0;
      continue;
    }
    const double det = det_from_chol<D>(L);
    out.sqrt_det.v[pt] = std::sqrt(det);
    sym_inverse_from_chol<D>(L, gi);
    store_mat<D>(out.g_inv, pt, gi);
  }
  out.spd = spd;
}

template <int D>
void build_pair(const FormField& omega, const TensorField& j, const PairOptions& opt,
                HermitianPair& out) {
  const GridSpec& grid = omega.grid;
  const std::int64_t n = grid.npoints();
  out.omega = omega;
  out.j = j;
  out.pf = ScalarField(grid);
  TensorField g(grid, 0, 2);
  if (opt.with_omega_inv) out.omega_inv = TensorField(grid, 2, 0);

  double om[D * D], jm[D * D], oj[D * D], gm[D * D], tmp[D * D], tmp2[D * D];
  double compat = 0.0, jsq = 0.0, minpf = std::numeric_limits<double>::infinity();
  for (std::int64_t pt = 0; pt < n; ++pt) {
    load_antisym<D>(omega, pt, om);
    load_mat<D>(j, pt, jm);

    mat_mul<D>(om, jm, oj);  // omega(e_i, J e_j)
    for (int i = 0; i < D; ++i)
      for (int jj = 0; jj < D; ++jj) gm[i * D + jj] = 0.5 * (oj[i * D + jj] + oj[jj * D + i]);
    store_mat<D>(g, pt, gm);

    const double pf = pfaffian<D>(om);
    out.pf.v[pt] = pf;
    minpf = std::min(minpf, std::abs(pf));

    // compatibility defect: omega_{J-} = (omega - J^T omega J)/2
    mat_mul<D>(om, jm, tmp);  // om * J
    double jt[D * D];
    mat_transpose<D>(jm, jt);
    mat_mul<D>(jt, tmp, tmp2);  // J^T om J
    for (int i = 0; i < D; ++i)
      for (int k = i + 1; k < D; ++k)
        compat = std::max(compat, 0.5 * std::abs(om[i * D + k] - tmp2[i * D + k]));

    // J^2 + Id
    mat_mul<D>(jm, jm, tmp);
    for (int i = 0; i < D; ++i)
      for (int k = 0; k < D; ++k)
        jsq = std::max(jsq, std::abs(tmp[i * D + k] + ((i == k) ? 1.0 : 0.0)));

    if (opt.with_omega_inv) {
      if (mat_inverse<D>(om, tmp)) store_mat<D>(out.omega_inv, pt, tmp);
      // a singular omega also shows up as min_abs_pf = 0
    }
  }
  build_metric<D>(g, out.metric);
  out.compat_inf = compat;
  out.j_sq_defect = jsq;
  out.min_abs_pf = minpf;
  if (!out.metric.spd || !(minpf > opt.eps_nd)) {
    out.status = PairStatus::invalid;
  } else if (compat <= opt.tol_c) {
    out.status = PairStatus::compatible;
  } else {
    out.status = PairStatus::tamed;
  }
}

template <int D>
void invariant_impl(const FormField& beta, const TensorField& j, double sign, FormField& out) {
  const std::int64_t n = beta.grid.npoints();
  double bm[D * D], jm[D * D], jt[D * D], t1[D * D], t2[D * D];
  for (std::int64_t pt = 0; pt < n; ++pt) {
    load_antisym<D>(beta, pt, bm);
    load_mat<D>(j, pt, jm);
    mat_transpose<D>(jm, jt);
    mat_mul<D>(bm, jm, t1);
    mat_mul<D>(jt, t1, t2);  // beta(J., J.)
    for (int i = 0; i < D * D; ++i) t1[i] = 0.5 * (bm[i] + sign * t2[i]);
    store_antisym<D>(out, pt, t1);
  }
}

template <int D>
void endo_from_bilinear_impl(const MetricField& metric, const TensorField& m, TensorField& out) {
  const std::int64_t n = m.grid.npoints();
  double mm[D * D], gi[D * D], k[D * D];
  for (std::int64_t pt = 0; pt < n; ++pt) {
    load_mat<D>(m, pt, mm);
    load_mat<D>(metric.g_inv, pt, gi);
    // K^a_i = m_{ij} g^{ja}
    for (int a = 0; a < D; ++a)
      for (int i = 0; i < D; ++i) {
        double s = 0.0;
        for (int jj = 0; jj < D; ++jj) s += mm[i * D + jj] * gi[jj * D + a];
        k[a * D + i] = s;
      }
    store_mat<D>(out, pt, k);
  }
}

template <int D>
void bilinear_from_endo_impl(const MetricField& metric, const TensorField& kfield,
                             TensorField& out) {
  const std::int64_t n = kfield.grid.npoints();
  double km[D * D], gm[D * D], m[D * D];
  for (std::int64_t pt = 0; pt < n; ++pt) {
    load_mat<D>(kfield, pt, km);
    load_mat<D>(metric.g, pt, gm);
    // m_{ij} = g(K e_i, e_j) = K^a_i g_{aj}
    for (int i = 0; i < D; ++i)
      for (int jj = 0; jj < D; ++jj) {
        double s = 0.0;
        for (int a = 0; a < D; ++a) s += km[a * D + i] * gm[a * D + jj];
        m[i * D + jj] = s;
      }
    store_mat<D>(out, pt, m);
  }
}

template <int D>
void project_anti_j_impl(const TensorField& k, const TensorField& j, TensorField& out) {
  const std::int64_t n = k.grid.npoints();
  double km[D * D], jm[D * D], t1[D * D], t2[D * D];
  for (std::int64_t pt = 0; pt < n; ++pt) {
    load_mat<D>(k, pt, km);
    load_mat<D>(j, pt, jm);
    mat_mul<D>(km, jm, t1);
    mat_mul<D>(jm, t1, t2);  // J K J
    for (int i = 0; i < D * D; ++i) t1[i] = 0.5 * (km[i] + t2[i]);
    store_mat<D>(out, pt, t1);
  }
}

template <int D>
bool retract_impl(const TensorField& j_raw, TensorField& out, double* defect) {
  const std::int64_t n = j_raw.grid.npoints();
  double jm[D * D], s[D * D], x[D * D], x2[D * D], t[D * D], t2[D * D];
  double maxdef = 0.0;
  for (std::int64_t pt = 0; pt < n; ++pt) {
    load_mat<D>(j_raw, pt, jm);
    mat_mul<D>(jm, jm, s);
    for (int i = 0; i < D * D; ++i) s[i] = -s[i];  // S = -J^2, ~ Id near a.c. structures
    double trace = 0.0;
    for (int i = 0; i < D; ++i) trace += s[i * D + i];
    const double c = trace / D;
    if (!(c > 0.0)) return false;
    const double inv_c = 1.0 / c;
    for (int i = 0; i < D * D; ++i) s[i] *= inv_c;  // S' with spectrum near 1

    // Newton-Schulz for S'^{-1/2}: X <- X (3 I - S' X^2) / 2
    for (int i = 0; i < D * D; ++i) x[i] = (i % (D + 1) == 0) ? 1.0 : 0.0;
    bool ok = false;
    for (int it = 0; it < 50; ++it) {
      mat_mul<D>(x, x, x2);
      mat_mul<D>(s, x2, t);  // S' X^2
      double res = 0.0;
      for (int i = 0; i < D; ++i)
        for (int k = 0; k < D; ++k)
          res = std::max(res, std::abs(t[i * D + k] - ((i == k) ? 1.0 : 0.0)));
      if (res < 1e-14) {
        ok = true;
        break;
      }
      for (int i = 0; i < D * D; ++i) t[i] = 0.5 * (((i % (D + 1) == 0) ? 3.0 : 0.0) - t[i]);
      mat_mul<D>(x, t, t2);
      for (int i = 0; i < D * D; ++i) x[i] = t2[i];
      if (!std::isfinite(x[0])) return false;
    }
    if (!ok) return false;

    const double inv_sqrt_c = 1.0 / std::sqrt(c);
    mat_mul<D>(jm, x, t);
    for (int i = 0; i < D * D; ++i) t[i] *= inv_sqrt_c;
    store_mat<D>(out, pt, t);

    mat_mul<D>(t, t, t2);
    for (int i = 0; i < D; ++i)
      for (int k = 0; k < D; ++k)
        maxdef = std::max(maxdef, std::abs(t2[i * D + k] + ((i == k) ? 1.0 : 0.0)));
  }
  *defect = maxdef;
  return true;
}

#define FORMFLOW_DISPATCH(fn, dim, ...)      \
  switch (dim) {                             \
    case 2: fn<2>(__VA_ARGS__); break;       \
    case 4: fn<4>(__VA_ARGS__); break;       \
    case 6: fn<6>(__VA_ARGS__); break;       \
    default: throw std::invalid_argument("unsupported dim"); \
  }

}  // namespace

MetricField::MetricField(const TensorField& g_in) {
  FORMFLOW_DISPATCH(build_metric, g_in.grid.dim, g_in, *this);
}

AlmostComplexField::AlmostComplexField(TensorField j_in) : j(std::move(j_in)) {
  sq_defect = j_squared_defect(j);
}

HermitianPair make_hermitian_pair(const FormField& omega, const TensorField& j,
                                  const PairOptions& opt) {
  if (omega.degree != 2) throw std::invalid_argument("make_hermitian_pair: omega must be degree 2");
  HermitianPair out;
  FORMFLOW_DISPATCH(build_pair, omega.grid.dim, omega, j, opt, out);
  return out;
}

FormField invariant_part(const FormField& beta, const TensorField& j) {
  if (beta.degree != 2) throw std::invalid_argument("invariant_part: degree must be 2");
  FormField out(beta.grid, 2);
  FORMFLOW_DISPATCH(invariant_impl, beta.grid.dim, beta, j, 1.0, out);
  return out;
}

FormField anti_invariant_part(const FormField& beta, const TensorField& j) {
  if (beta.degree != 2) throw std::invalid_argument("anti_invariant_part: degree must be 2");
  FormField out(beta.grid, 2);
  FORMFLOW_DISPATCH(invariant_impl, beta.grid.dim, beta, j, -1.0, out);
  return out;
}

TensorField metric_from_pair(const FormField& omega, const TensorField& j) {
  HermitianPair p = make_hermitian_pair(omega, j, PairOptions{.with_omega_inv = false});
  if (!p.metric.spd)
    throw NotTamedError("metric_from_pair: symmetrized form not positive definite");
  return p.metric.g;
}

TensorField endo_from_bilinear(const MetricField& metric, const TensorField& m) {
  TensorField out(m.grid, 1, 1);
  FORMFLOW_DISPATCH(endo_from_bilinear_impl, m.grid.dim, metric, m, out);
  return out;
}

TensorField bilinear_from_endo(const MetricField& metric, const TensorField& k) {
  TensorField out(k.grid, 0, 2);
  FORMFLOW_DISPATCH(bilinear_from_endo_impl, k.grid.dim, metric, k, out);
  return out;
}

namespace {

template <int D>
void variation_impl(const HermitianPair& pair, const VariationPair& var, VariationDefects& out) {
  const std::int64_t n = pair.omega.grid.npoints();
  double om[D * D], jm[D * D], jt[D * D], km[D * D], th[D * D];
  double t1[D * D], t2[D * D], t3[D * D];
  double d_anti = 0.0, d_pair = 0.0;
  for (std::int64_t pt = 0; pt < n; ++pt) {
    load_antisym<D>(pair.omega, pt, om);
    load_mat<D>(pair.j, pt, jm);
    load_mat<D>(var.k, pt, km);
    load_antisym<D>(var.theta, pt, th);
    mat_transpose<D>(jm, jt);

    mat_mul<D>(jm, km, t1);
    mat_mul<D>(km, jm, t2);
    for (int i = 0; i < D * D; ++i) d_anti = std::max(d_anti, std::abs(t1[i] + t2[i]));

    // omega(Kx, Jy) + omega(Jx, Ky) vs theta(x,y) - theta(Jx,Jy)
    double kt[D * D];
    mat_transpose<D>(km, kt);
    mat_mul<D>(om, jm, t1);
    mat_mul<D>(kt, t1, t2);  // K^T om J : omega(Kx, Jy)
    mat_mul<D>(om, km, t1);
    mat_mul<D>(jt, t1, t3);  // J^T om K : omega(Jx, Ky)
    double rhs1[D * D];
    mat_mul<D>(th, jm, t1);
    mat_mul<D>(jt, t1, rhs1);  // theta(Jx, Jy)
    for (int i = 0; i < D * D; ++i)
      d_pair = std::max(d_pair, std::abs(t2[i] + t3[i] - th[i] + rhs1[i]));
  }
  out.anti_commute = d_anti;
  out.pairing = d_pair;
}

}  // namespace

VariationDefects check_variation(const HermitianPair& pair, const VariationPair& var) {
  VariationDefects out{};
  FORMFLOW_DISPATCH(variation_impl, pair.omega.grid.dim, pair, var, out);
  return out;
}

AlmostComplexField retract_almost_complex(const TensorField& j_raw) {
  TensorField out(j_raw.grid, 1, 1);
  double defect = 0.0;
  bool ok = false;
  switch (j_raw.grid.dim) {
    case 2: ok = retract_impl<2>(j_raw, out, &defect); break;
    case 4: ok = retract_impl<4>(j_raw, out, &defect); break;
    case 6: ok = retract_impl<6>(j_raw, out, &defect); break;
    default: throw std::invalid_argument("unsupported dim");
  }
  if (!ok)
    throw RetractionDivergedError(
        "retract_almost_complex: Newton iteration did not converge; J drifted too far");
  AlmostComplexField acs;
  acs.j = std::move(out);
  acs.sq_defect = defect;
  return acs;
}

double j_squared_defect(const TensorField& j) {
  const int dim = j.grid.dim;
  const std::int64_t n = j.grid.npoints();
  double m = 0.0;
  std::vector<double> jm(dim * dim), t(dim * dim);
  for (std::int64_t pt = 0; pt < n; ++pt) {
    for (int c = 0; c < dim * dim; ++c) jm[c] = j.plane(c)[pt];
    for (int i = 0; i < dim; ++i)
      for (int k = 0; k < dim; ++k) {
        double s = 0.0;
        for (int a = 0; a < dim; ++a) s += jm[i * dim + a] * jm[a * dim + k];
        t[i * dim + k] = s + ((i == k) ? 1.0 : 0.0);
      }
    for (int c = 0; c < dim * dim; ++c) m = std::max(m, std::abs(t[c]));
  }
  return m;
}

TensorField project_anti_j(const TensorField& k, const TensorField& j) {
  TensorField out(k.grid, 1, 1);
  FORMFLOW_DISPATCH(project_anti_j_impl, k.grid.dim, k, j, out);
  return out;
}

}  // namespace formflow
