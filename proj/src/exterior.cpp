#include "formflow/exterior.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "formflow/detail/pointload.hpp"
#include "formflow/smallmat.hpp"

namespace formflow {

namespace {

inline double minor_det(const double* m, int dim, const int* rows, const int* cols, int k) {
  switch (k) {
    case 0: return 1.0;
    case 1: return m[rows[0] * dim + cols[0]];
    case 2:
      return m[rows[0] * dim + cols[0]] * m[rows[1] * dim + cols[1]] -
             m[rows[0] * dim + cols[1]] * m[rows[1] * dim + cols[0]];
    case 3: {
      const double a = m[rows[0] * dim + cols[0]], b = m[rows[0] * dim + cols[1]],
                   c = m[rows[0] * dim + cols[2]];
      const double d = m[rows[1] * dim + cols[0]], e = m[rows[1] * dim + cols[1]],
                   f = m[rows[1] * dim + cols[2]];
      const double g = m[rows[2] * dim + cols[0]], h = m[rows[2] * dim + cols[1]],
                   i = m[rows[2] * dim + cols[2]];
      return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
    }
    default: {
      // k = 4 only occurs for p = q = 4 raises, which the Jacobi branch avoids
      double sub = 0.0;
      double sign = 1.0;
      int r2[4], c2[4];
      for (int j = 0; j < k; ++j) {
        int w = 0;
        for (int t = 1; t < k; ++t) r2[w++] = rows[t];
        w = 0;
        for (int t = 0; t < k; ++t)
          if (t != j) c2[w++] = cols[t];
        sub += sign * m[rows[0] * dim + cols[j]] * minor_det(m, dim, r2, c2, k - 1);
        sign = -sign;
      }
      return sub;
    }
  }
}

/// Raise the components of a degree-p form at one point. Uses direct minors
/// of g^{-1} when p <= dim - p, otherwise Jacobi's complementary-minor
/// identity det(g^{-1}[I,K]) = sgn(I,I^c) sgn(K,K^c) det(g[K^c,I^c]) / det g.
struct RaisePlan {
  int dim, p;
  const FormIndexTable* tab;
  const FormIndexTable* ctab;  // complement degree table (for Jacobi branch)
  bool jacobi;

  explicit RaisePlan(int dim_, int p_) : dim(dim_), p(p_) {
    tab = &FormIndexTable::get(dim, p);
    ctab = &FormIndexTable::get(dim, dim - p);
    jacobi = (dim - p) < p;
  }

  void apply(const double* ginv, const double* g, double inv_det, const double* in,
             double* out) const {
    const int nc = tab->ncomp;
    for (int c = 0; c < nc; ++c) out[c] = 0.0;
    if (!jacobi) {
      for (int i = 0; i < nc; ++i) {
        const int* rows = tab->comp(i);
        {
          const double d = minor_det(ginv, dim, rows, rows, p);
          out[i] += d * in[i];
        }
        for (int k = i + 1; k < nc; ++k) {
          const double d = minor_det(ginv, dim, rows, tab->comp(k), p);
          out[i] += d * in[k];
          out[k] += d * in[i];
        }
      }
    } else {
      const int q = dim - p;
      for (int i = 0; i < nc; ++i) {
        const int* rows_i = ctab->comp(tab->star_pos[i]);  // I^c
        const double sgn_i = tab->star_sign[i];
        {
          const double d = sgn_i * sgn_i * minor_det(g, dim, rows_i, rows_i, q) * inv_det;
          out[i] += d * in[i];
        }
        for (int k = i + 1; k < nc; ++k) {
          const int* cols_k = ctab->comp(tab->star_pos[k]);  // K^c
          const double d =
              sgn_i * tab->star_sign[k] * minor_det(g, dim, cols_k, rows_i, q) * inv_det;
          out[i] += d * in[k];
          out[k] += d * in[i];
        }
      }
    }
  }
};

constexpr int kMaxComp = 20;  // C(6,3)

}  // namespace

FormField exterior_d(const FormField& alpha) {
  const GridSpec& g = alpha.grid;
  if (alpha.degree >= g.dim) throw std::invalid_argument("exterior_d: degree overflow");
  FormField out(g, alpha.degree + 1);
  const FormIndexTable& t = out.table();
  for (int c = 0; c < out.ncomp; ++c)
    for (const auto& term : t.d_terms[c])
      diff_plane_acc(g, alpha.plane(term.in_comp), out.plane(c), term.axis, term.sign);
  return out;
}

FormField raise_form(const FormField& alpha, const MetricField& m) {
  const GridSpec& grid = alpha.grid;
  FormField out(grid, alpha.degree);
  const RaisePlan plan(grid.dim, alpha.degree);
  const std::int64_t n = grid.npoints();
  const int nc = alpha.ncomp;
  const int dd = grid.dim * grid.dim;
  std::vector<double> gi(dd), gm(dd);
  double in[kMaxComp], res[kMaxComp];
  for (std::int64_t pt = 0; pt < n; ++pt) {
    for (int c = 0; c < dd; ++c) gi[c] = m.g_inv.plane(c)[pt];
    for (int c = 0; c < dd; ++c) gm[c] = m.g.plane(c)[pt];
    const double sq = m.sqrt_det.v[pt];
    const double inv_det = 1.0 / (sq * sq);
    for (int c = 0; c < nc; ++c) in[c] = alpha.plane(c)[pt];
    plan.apply(gi.data(), gm.data(), inv_det, in, res);
    for (int c = 0; c < nc; ++c) out.plane(c)[pt] = res[c];
  }
  return out;
}

FormField hodge_star(const FormField& alpha, const MetricField& m) {
  const GridSpec& grid = alpha.grid;
  const int p = alpha.degree;
  FormField out(grid, grid.dim - p);
  const FormIndexTable& t = alpha.table();
  const RaisePlan plan(grid.dim, p);
  const std::int64_t n = grid.npoints();
  const int nc = alpha.ncomp;
  const int dd = grid.dim * grid.dim;
  std::vector<double> gi(dd), gm(dd);
  double in[kMaxComp], res[kMaxComp];
  for (std::int64_t pt = 0; pt < n; ++pt) {
    for (int c = 0; c < dd; ++c) gi[c] = m.g_inv.plane(c)[pt];
    for (int c = 0; c < dd; ++c) gm[c] = m.g.plane(c)[pt];
    const double sq = m.sqrt_det.v[pt];
    const double inv_det = 1.0 / (sq * sq);
    for (int c = 0; c < nc; ++c) in[c] = alpha.plane(c)[pt];
    plan.apply(gi.data(), gm.data(), inv_det, in, res);
    for (int c = 0; c < nc; ++c) out.plane(t.star_pos[c])[pt] = sq * t.star_sign[c] * res[c];
  }
  return out;
}

FormField codiff(const FormField& alpha, const MetricField& m) {
  if (alpha.degree < 1) throw std::invalid_argument("codiff: degree must be >= 1");
  FormField s1 = hodge_star(alpha, m);
  FormField s2 = exterior_d(s1);
  FormField out = hodge_star(s2, m);
  scale(out.data, -1.0);  // d* = -*d* in even dimensions
  return out;
}

FormField dstar_d(const FormField& omega, const MetricField& m) {
  return codiff(exterior_d(omega), m);
}

FormField hodge_laplacian(const FormField& alpha, const MetricField& m) {
  FormField out(alpha.grid, alpha.degree);
  if (alpha.degree < alpha.grid.dim) {
    FormField a = dstar_d(alpha, m);
    axpy(1.0, a.data, out.data);
  }
  if (alpha.degree >= 1) {
    FormField b = exterior_d(codiff(alpha, m));
    axpy(1.0, b.data, out.data);
  }
  return out;
}

FormField wedge(const FormField& a, const FormField& b) {
  const GridSpec& grid = a.grid;
  const int p = a.degree, q = b.degree;
  if (p + q > grid.dim) throw std::invalid_argument("wedge: degree overflow");
  FormField out(grid, p + q);
  const FormIndexTable& tout = out.table();
  const FormIndexTable& ta = a.table();
  const FormIndexTable& tb = b.table();
  const std::int64_t n = grid.npoints();
  // enumerate position-subsets of size p once per output component
  std::vector<int> sel(p);
  for (int c = 0; c < out.ncomp; ++c) {
    const int* T = tout.comp(c);
    // iterate subsets of {0..p+q-1} of size p
    for (int m = 0; m < p; ++m) sel[m] = m;
    while (true) {
      std::array<int, kMaxDim> ia{}, ib{}, order{};
      std::array<bool, kMaxDim> used{};
      for (int m = 0; m < p; ++m) {
        ia[m] = T[sel[m]];
        used[sel[m]] = true;
        order[m] = sel[m];
      }
      int w = 0;
      for (int r = 0; r < p + q; ++r)
        if (!used[r]) {
          ib[w] = T[r];
          order[p + w] = r;
          ++w;
        }
      const double sgn = permutation_sign(order.data(), p + q);
      auto [pa, sa] = ta.lookup(ia.data());
      auto [pb, sb] = tb.lookup(ib.data());
      if (pa >= 0 && pb >= 0) {
        const double coef = sgn * sa * sb;
        const double* va = a.plane(pa);
        const double* vb = b.plane(pb);
        double* vo = out.plane(c);
        for (std::int64_t i = 0; i < n; ++i) vo[i] += coef * va[i] * vb[i];
      }
      // next subset
      if (p == 0) break;
      int mpos = p - 1;
      while (mpos >= 0 && sel[mpos] == p + q - p + mpos) --mpos;
      if (mpos < 0) break;
      ++sel[mpos];
      for (int j = mpos + 1; j < p; ++j) sel[j] = sel[j - 1] + 1;
    }
    if (p == 0) {
      // scalar times form
      const double* va = a.plane(0);
      const double* vb = b.plane(c);
      double* vo = out.plane(c);
      for (std::int64_t i = 0; i < n; ++i) vo[i] = va[i] * vb[i];
    }
  }
  return out;
}

ScalarField inner_density(const FormField& a, const FormField& b, const MetricField& m) {
  if (a.degree != b.degree) throw std::invalid_argument("inner_density: degree mismatch");
  FormField br = raise_form(b, m);
  ScalarField out(a.grid);
  const std::int64_t n = a.grid.npoints();
  for (int c = 0; c < a.ncomp; ++c) {
    const double* pa = a.plane(c);
    const double* pb = br.plane(c);
    for (std::int64_t i = 0; i < n; ++i) out.v[i] += pa[i] * pb[i];
  }
  return out;
}

double l2_inner(const FormField& a, const FormField& b, const MetricField& m) {
  ScalarField d = inner_density(a, b, m);
  double s = 0.0;
  for (std::int64_t i = 0; i < a.grid.npoints(); ++i) s += d.v[i] * m.sqrt_det.v[i];
  return s * a.grid.cell_volume();
}

ScalarField pfaffian_density(const FormField& omega) {
  if (omega.degree != 2) throw std::invalid_argument("pfaffian_density: degree must be 2");
  const GridSpec& grid = omega.grid;
  ScalarField out(grid);
  const std::int64_t n = grid.npoints();
  double om[kMaxDim * kMaxDim];
  for (std::int64_t pt = 0; pt < n; ++pt) {
    switch (grid.dim) {
      case 2:
        detail::load_antisym<2>(omega, pt, om);
        out.v[pt] = pfaffian<2>(om);
        break;
      case 4:
        detail::load_antisym<4>(omega, pt, om);
        out.v[pt] = pfaffian<4>(om);
        break;
      default:
        detail::load_antisym<6>(omega, pt, om);
        out.v[pt] = pfaffian<6>(om);
        break;
    }
  }
  return out;
}

Energies energies(const HermitianPair& pair) {
  Energies e;
  FormField dw = exterior_d(pair.omega);
  e.h0 = l2_inner(dw, dw, pair.metric);
  FormField dsw = codiff(pair.omega, pair.metric);
  e.h1 = l2_inner(dsw, dsw, pair.metric);
  double v = 0.0;
  for (double x : pair.pf.v) v += x;
  e.volume = v * pair.omega.grid.cell_volume();
  return e;
}

FormField interior_product(const TensorField& x, const FormField& alpha) {
  const GridSpec& grid = alpha.grid;
  if (alpha.degree < 1) throw std::invalid_argument("interior_product: degree must be >= 1");
  FormField out(grid, alpha.degree - 1);
  const FormIndexTable& t = alpha.table();
  const std::int64_t n = grid.npoints();
  for (int c = 0; c < out.ncomp; ++c) {
    double* vo = out.plane(c);
    for (int a = 0; a < grid.dim; ++a) {
      const auto& term = t.iota_terms[static_cast<std::size_t>(c) * grid.dim + a];
      if (term.in_comp < 0) continue;
      const double* vx = x.plane(a);
      const double* vin = alpha.plane(term.in_comp);
      const double s = term.sign;
      for (std::int64_t i = 0; i < n; ++i) vo[i] += s * vx[i] * vin[i];
    }
  }
  return out;
}

FormField lie_derivative_form(const TensorField& x, const FormField& alpha) {
  const GridSpec& grid = alpha.grid;
  FormField out(grid, alpha.degree);
  if (alpha.degree >= 1) {
    FormField d_iota = exterior_d(interior_product(x, alpha));
    axpy(1.0, d_iota.data, out.data);
  }
  if (alpha.degree < grid.dim) {
    FormField iota_d = interior_product(x, exterior_d(alpha));
    axpy(1.0, iota_d.data, out.data);
  }
  return out;
}

TensorField lie_derivative_j(const TensorField& x, const TensorField& j) {
  const GridSpec& grid = j.grid;
  const int dim = grid.dim;
  TensorField out(grid, 1, 1);
  const std::int64_t n = grid.npoints();
  // X^k d_k J^j_i
  for (int k = 0; k < dim; ++k) {
    TensorField dj = partial(j, k);
    const double* vx = x.plane(k);
    for (int c = 0; c < out.ncomp; ++c) {
      const double* vd = dj.plane(c);
      double* vo = out.plane(c);
      for (std::int64_t i = 0; i < n; ++i) vo[i] += vx[i] * vd[i];
    }
  }
  // - J^k_i d_k X^j + J^j_k d_i X^k
  std::vector<TensorField> dx;
  dx.reserve(dim);
  for (int a = 0; a < dim; ++a) dx.push_back(partial(x, a));
  for (int jj = 0; jj < dim; ++jj)
    for (int i = 0; i < dim; ++i) {
      double* vo = out.plane(jj * dim + i);
      for (int k = 0; k < dim; ++k) {
        const double* vjk = j.plane(k * dim + i);      // J^k_i
        const double* vdx = dx[k].plane(jj);           // d_k X^j
        const double* vjj = j.plane(jj * dim + k);     // J^j_k
        const double* vdi = dx[i].plane(k);            // d_i X^k
        for (std::int64_t ptn = 0; ptn < n; ++ptn)
          vo[ptn] += -vjk[ptn] * vdx[ptn] + vjj[ptn] * vdi[ptn];
      }
    }
  return out;
}

TensorField covariant_grad_2form(const FormField& omega, const TensorField& gamma) {
  const GridSpec& grid = omega.grid;
  const int dim = grid.dim;
  TensorField out(grid, 0, 3);  // [k][i][j]
  const std::int64_t n = grid.npoints();
  const FormIndexTable& t = omega.table();
  // partial derivatives of the full antisymmetric matrix
  for (int k = 0; k < dim; ++k) {
    FormField dom = partial(omega, k);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        double* vo = out.plane((k * dim + i) * dim + j);
        if (i == j) continue;
        int tuple[2] = {i, j};
        auto [pos, sgn] = t.lookup(tuple);
        const double* vd = dom.plane(pos);
        for (std::int64_t ptn = 0; ptn < n; ++ptn) vo[ptn] = sgn * vd[ptn];
      }
  }
  // - Gamma^a_{ki} w_{aj} - Gamma^a_{kj} w_{ia}
  for (int k = 0; k < dim; ++k)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        double* vo = out.plane((k * dim + i) * dim + j);
        for (int a = 0; a < dim; ++a) {
          const double* g1 = gamma.plane((a * dim + k) * dim + i);
          const double* g2 = gamma.plane((a * dim + k) * dim + j);
          int t1[2] = {a, j};
          int t2[2] = {i, a};
          auto [p1, s1] = t.lookup(t1);
          auto [p2, s2] = t.lookup(t2);
          const double* w1 = (p1 >= 0) ? omega.plane(p1) : nullptr;
          const double* w2 = (p2 >= 0) ? omega.plane(p2) : nullptr;
          for (std::int64_t ptn = 0; ptn < n; ++ptn) {
            double acc = 0.0;
            if (w1) acc -= g1[ptn] * s1 * w1[ptn];
            if (w2) acc -= g2[ptn] * s2 * w2[ptn];
            vo[ptn] += acc;
          }
        }
      }
  return out;
}

namespace {

/// nabla_p T_{qij} for a (0,3) field T: partial minus three Gamma corrections.
TensorField covariant_grad_03(const TensorField& tin, const TensorField& gamma) {
  const GridSpec& grid = tin.grid;
  const int dim = grid.dim;
  TensorField out(grid, 0, 4);  // [p][q][i][j]
  const std::int64_t n = grid.npoints();
  for (int p = 0; p < dim; ++p) {
    TensorField dt = partial(tin, p);
    for (int c = 0; c < tin.ncomp; ++c) {
      const double* vd = dt.plane(c);
      double* vo = out.plane(p * tin.ncomp + c);
      for (std::int64_t i = 0; i < n; ++i) vo[i] = vd[i];
    }
  }
  for (int p = 0; p < dim; ++p)
    for (int q = 0; q < dim; ++q)
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
          double* vo = out.plane(((p * dim + q) * dim + i) * dim + j);
          for (int a = 0; a < dim; ++a) {
            const double* gpq = gamma.plane((a * dim + p) * dim + q);
            const double* gpi = gamma.plane((a * dim + p) * dim + i);
            const double* gpj = gamma.plane((a * dim + p) * dim + j);
            const double* t_aij = tin.plane((a * dim + i) * dim + j);
            const double* t_qaj = tin.plane((q * dim + a) * dim + j);
            const double* t_qia = tin.plane((q * dim + i) * dim + a);
            for (std::int64_t ptn = 0; ptn < n; ++ptn)
              vo[ptn] -=
                  gpq[ptn] * t_aij[ptn] + gpi[ptn] * t_qaj[ptn] + gpj[ptn] * t_qia[ptn];
          }
        }
  return out;
}

}  // namespace

FormField codiff_covariant(const FormField& alpha, const MetricField& m,
                           const TensorField& gamma) {
  const GridSpec& grid = alpha.grid;
  const int dim = grid.dim;
  if (alpha.degree != 2 && alpha.degree != 3)
    throw std::invalid_argument("codiff_covariant: degree must be 2 or 3");
  FormField out(grid, alpha.degree - 1);
  const std::int64_t n = grid.npoints();
  const FormIndexTable& tin = alpha.table();
  const FormIndexTable& tout = out.table();

  if (alpha.degree == 2) {
    TensorField grad = covariant_grad_2form(alpha, gamma);  // [k][l][j]
    for (int c = 0; c < out.ncomp; ++c) {
      const int j = tout.comp(c)[0];
      double* vo = out.plane(c);
      for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l) {
          const double* gi = m.g_inv.plane(k * dim + l);
          const double* gr = grad.plane((k * dim + l) * dim + j);
          for (std::int64_t i = 0; i < n; ++i) vo[i] -= gi[i] * gr[i];
        }
    }
    return out;
  }

  // degree 3: (d*eta)_{jk} = -g^{pq} nabla_q eta_{pjk}
  // build nabla eta as full (0,4) [q][p][j][k] via lookup on the 3-form
  TensorField grad(grid, 0, 4);
  for (int q = 0; q < dim; ++q) {
    FormField de = partial(alpha, q);
    for (int p = 0; p < dim; ++p)
      for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k) {
          int tuple[3] = {p, j, k};
          auto [pos, sgn] = tin.lookup(tuple);
          double* vo = grad.plane(((q * dim + p) * dim + j) * dim + k);
          if (pos >= 0) {
            const double* vd = de.plane(pos);
            for (std::int64_t i = 0; i < n; ++i) vo[i] = sgn * vd[i];
          }
        }
  }
  // Gamma corrections: -G^a_{qp} eta_{ajk} - G^a_{qj} eta_{pak} - G^a_{qk} eta_{pja}
  for (int q = 0; q < dim; ++q)
    for (int p = 0; p < dim; ++p)
      for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k) {
          double* vo = grad.plane(((q * dim + p) * dim + j) * dim + k);
          for (int a = 0; a < dim; ++a) {
            int tu1[3] = {a, j, k};
            int tu2[3] = {p, a, k};
            int tu3[3] = {p, j, a};
            auto [p1, s1] = tin.lookup(tu1);
            auto [p2, s2] = tin.lookup(tu2);
            auto [p3, s3] = tin.lookup(tu3);
            const double* g1 = gamma.plane((a * dim + q) * dim + p);
            const double* g2 = gamma.plane((a * dim + q) * dim + j);
            const double* g3 = gamma.plane((a * dim + q) * dim + k);
            const double* e1 = (p1 >= 0) ? alpha.plane(p1) : nullptr;
            const double* e2 = (p2 >= 0) ? alpha.plane(p2) : nullptr;
            const double* e3 = (p3 >= 0) ? alpha.plane(p3) : nullptr;
            for (std::int64_t i = 0; i < n; ++i) {
              double acc = 0.0;
              if (e1) acc += g1[i] * s1 * e1[i];
              if (e2) acc += g2[i] * s2 * e2[i];
              if (e3) acc += g3[i] * s3 * e3[i];
              vo[i] -= acc;
            }
          }
        }
  for (int c = 0; c < out.ncomp; ++c) {
    const int j = tout.comp(c)[0];
    const int k = tout.comp(c)[1];
    double* vo = out.plane(c);
    for (int p = 0; p < dim; ++p)
      for (int q = 0; q < dim; ++q) {
        const double* gi = m.g_inv.plane(p * dim + q);
        const double* gr = grad.plane(((q * dim + p) * dim + j) * dim + k);
        for (std::int64_t i = 0; i < n; ++i) vo[i] -= gi[i] * gr[i];
      }
  }
  return out;
}

FormField dstar_d_covariant(const FormField& omega, const MetricField& m,
                            const TensorField& gamma) {
  const GridSpec& grid = omega.grid;
  const int dim = grid.dim;
  TensorField grad = covariant_grad_2form(omega, gamma);      // [q][i][j]
  TensorField hess = covariant_grad_03(grad, gamma);          // [p][q][i][j]
  FormField out(grid, 2);
  const FormIndexTable& t = out.table();
  const std::int64_t n = grid.npoints();
  auto hp = [&](int p, int q, int i, int j) {
    return hess.plane(((p * dim + q) * dim + i) * dim + j);
  };
  for (int c = 0; c < out.ncomp; ++c) {
    const int i = t.comp(c)[0];
    const int j = t.comp(c)[1];
    double* vo = out.plane(c);
    for (int p = 0; p < dim; ++p)
      for (int q = 0; q < dim; ++q) {
        const double* gi = m.g_inv.plane(p * dim + q);
        const double* h1 = hp(p, q, i, j);
        const double* h2 = hp(p, i, q, j);
        const double* h3 = hp(p, j, q, i);
        // (d*d w)_{ij} = -g^{pq}(nab_p nab_q w_ij - nab_p nab_i w_qj + nab_p nab_j w_qi)
        for (std::int64_t ptn = 0; ptn < n; ++ptn)
          vo[ptn] -= gi[ptn] * (h1[ptn] - h2[ptn] + h3[ptn]);
      }
  }
  return out;
}

}  // namespace formflow
