#include "formflow/curvature.hpp"

#include <algorithm>
#include <cmath>

#include "formflow/detail/pointload.hpp"
#include "formflow/exterior.hpp"
#include "formflow/smallmat.hpp"

namespace formflow {

TensorField christoffel(const MetricField& m) {
  const GridSpec& grid = m.g.grid;
  const int dim = grid.dim;
  const std::int64_t n = grid.npoints();
  TensorField out(grid, 1, 2);  // [k][i][j]

  std::vector<TensorField> dg;
  dg.reserve(dim);
  for (int a = 0; a < dim; ++a) dg.push_back(partial(m.g, a));

  for (int k = 0; k < dim; ++k)
    for (int i = 0; i < dim; ++i)
      for (int j = i; j < dim; ++j) {
        double* vo = out.plane((k * dim + i) * dim + j);
        for (int l = 0; l < dim; ++l) {
          const double* gi = m.g_inv.plane(k * dim + l);
          const double* d_i = dg[i].plane(l * dim + j);
          const double* d_j = dg[j].plane(l * dim + i);
          const double* d_l = dg[l].plane(i * dim + j);
          for (std::int64_t pt = 0; pt < n; ++pt)
            vo[pt] += 0.5 * gi[pt] * (d_i[pt] + d_j[pt] - d_l[pt]);
        }
        if (j != i) {
          const double* src = vo;
          double* vs = out.plane((k * dim + j) * dim + i);
          for (std::int64_t pt = 0; pt < n; ++pt) vs[pt] = src[pt];
        }
      }
  return out;
}

namespace {

/// Periodic neighbor of a point along one axis.
inline std::int64_t shift_point(const GridSpec& g, std::int64_t pt, int axis, int dir) {
  const std::int64_t s = g.stride(axis);
  const std::int64_t na = g.sizes[axis];
  const std::int64_t i = (pt / s) % na;
  std::int64_t ni = i + dir;
  if (ni < 0) ni += na;
  if (ni >= na) ni -= na;
  return pt + (ni - i) * s;
}

/// Assemble R_{ijkl} at one point into r[((i*d+j)*d+k)*d+l] from the
/// Christoffel field (centered differences on its planes) and the metric.
void riemann_point(const GridSpec& grid, const TensorField& gamma, const TensorField& g,
                   std::int64_t pt, double* r) {
  const int d = grid.dim;
  double dG[6 * 6 * 6 * 6];  // [i][p][j][k] = d_i Gamma^p_{jk}
  for (int i = 0; i < d; ++i) {
    const std::int64_t pp = shift_point(grid, pt, i, +1);
    const std::int64_t pm = shift_point(grid, pt, i, -1);
    const double c = 1.0 / (2.0 * grid.spacing(i));
    for (int comp = 0; comp < gamma.ncomp; ++comp) {
      const double* pl = gamma.plane(comp);
      dG[i * d * d * d + comp] = c * (pl[pp] - pl[pm]);
    }
  }
  double gm[6 * 6], Gm[6 * 6 * 6];
  for (int c = 0; c < d * d; ++c) gm[c] = g.plane(c)[pt];
  for (int c = 0; c < d * d * d; ++c) Gm[c] = gamma.plane(c)[pt];

  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (j <= i) continue;
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          double rp = 0.0;
          for (int p = 0; p < d; ++p) {
            double term = dG[i * d * d * d + (p * d + j) * d + k] -
                          dG[j * d * d * d + (p * d + i) * d + k];
            for (int a = 0; a < d; ++a)
              term += Gm[(p * d + i) * d + a] * Gm[(a * d + j) * d + k] -
                      Gm[(p * d + j) * d + a] * Gm[(a * d + i) * d + k];
            rp += term * gm[p * d + l];
          }
          r[((i * d + j) * d + k) * d + l] = rp;
          r[((j * d + i) * d + k) * d + l] = -rp;
        }
    }
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      for (int l = 0; l < d; ++l) r[((j * d + j) * d + k) * d + l] = 0.0;
}

}  // namespace

TensorField riemann(const MetricField& m, const TensorField& gamma) {
  const GridSpec& grid = m.g.grid;
  const int d = grid.dim;
  TensorField out(grid, 0, 4);
  const std::int64_t n = grid.npoints();
  std::vector<double> r(static_cast<std::size_t>(d) * d * d * d);
  for (std::int64_t pt = 0; pt < n; ++pt) {
    riemann_point(grid, gamma, m.g, pt, r.data());
    for (int c = 0; c < out.ncomp; ++c) out.plane(c)[pt] = r[c];
  }
  return out;
}

TensorField ricci(const MetricField& m, const TensorField& gamma) {
  const GridSpec& grid = m.g.grid;
  const int d = grid.dim;
  TensorField out(grid, 0, 2);
  const std::int64_t n = grid.npoints();
  std::vector<double> r(static_cast<std::size_t>(d) * d * d * d);
  std::vector<double> gi(static_cast<std::size_t>(d) * d);
  for (std::int64_t pt = 0; pt < n; ++pt) {
    riemann_point(grid, gamma, m.g, pt, r.data());
    for (int c = 0; c < d * d; ++c) gi[c] = m.g_inv.plane(c)[pt];
    for (int j = 0; j < d; ++j)
      for (int k = j; k < d; ++k) {
        double s = 0.0;
        for (int i = 0; i < d; ++i)
          for (int l = 0; l < d; ++l) s += gi[i * d + l] * r[((i * d + j) * d + k) * d + l];
        // contraction of an exact-curvature expression; symmetrize away the
        // O(h^2) stencil asymmetry
        double s2 = 0.0;
        for (int i = 0; i < d; ++i)
          for (int l = 0; l < d; ++l) s2 += gi[i * d + l] * r[((i * d + k) * d + j) * d + l];
        const double v = 0.5 * (s + s2);
        out.plane(j * d + k)[pt] = v;
        out.plane(k * d + j)[pt] = v;
      }
  }
  return out;
}

TensorField b_tensor(const HermitianPair& pair, const TensorField& ric) {
  const GridSpec& grid = pair.omega.grid;
  const int d = grid.dim;
  TensorField out(grid, 1, 1);
  const std::int64_t n = grid.npoints();
  for (int k = 0; k < d; ++k)
    for (int j = 0; j < d; ++j) {
      double* vo = out.plane(k * d + j);
      for (int a = 0; a < d; ++a) {
        const double* gka = pair.metric.g_inv.plane(k * d + a);
        for (int b = 0; b < d; ++b) {
          const double* jba = pair.j.plane(b * d + a);
          const double* jbj = pair.j.plane(b * d + j);
          const double* rbj = ric.plane(b * d + j);
          const double* rba = ric.plane(b * d + a);
          for (std::int64_t pt = 0; pt < n; ++pt)
            vo[pt] += gka[pt] * (jba[pt] * rbj[pt] + jbj[pt] * rba[pt]);
        }
      }
    }
  return out;
}

TensorField predicted_metric_variation(const FormField& theta, const TensorField& j) {
  const GridSpec& grid = theta.grid;
  const int d = grid.dim;
  TensorField out(grid, 0, 2);
  const std::int64_t n = grid.npoints();
  const FormIndexTable& t = theta.table();
  for (int i = 0; i < d; ++i)
    for (int jj = i; jj < d; ++jj) {
      double* vo = out.plane(i * d + jj);
      for (int k = 0; k < d; ++k) {
        int t1[2] = {i, k};
        int t2[2] = {jj, k};
        auto [p1, s1] = t.lookup(t1);
        auto [p2, s2] = t.lookup(t2);
        const double* jk_j = j.plane(k * d + jj);
        const double* jk_i = j.plane(k * d + i);
        const double* th1 = (p1 >= 0) ? theta.plane(p1) : nullptr;
        const double* th2 = (p2 >= 0) ? theta.plane(p2) : nullptr;
        for (std::int64_t pt = 0; pt < n; ++pt) {
          double acc = 0.0;
          if (th1) acc += 0.5 * s1 * th1[pt] * jk_j[pt];
          if (th2) acc += 0.5 * s2 * th2[pt] * jk_i[pt];
          vo[pt] += acc;
        }
      }
      if (jj != i) {
        const double* src = vo;
        double* vs = out.plane(jj * d + i);
        for (std::int64_t pt = 0; pt < n; ++pt) vs[pt] = src[pt];
      }
    }
  return out;
}

TensorField predicted_connection_variation(const MetricField& m, const TensorField& gamma,
                                           const TensorField& h) {
  const GridSpec& grid = m.g.grid;
  const int d = grid.dim;
  const std::int64_t n = grid.npoints();
  // nabla_i h_{lj} = d_i h_{lj} - G^a_{il} h_{aj} - G^a_{ij} h_{la}
  TensorField nh(grid, 0, 3);  // [i][l][j]
  for (int i = 0; i < d; ++i) {
    TensorField dh = partial(h, i);
    for (int l = 0; l < d; ++l)
      for (int j = 0; j < d; ++j) {
        double* vo = nh.plane((i * d + l) * d + j);
        const double* vd = dh.plane(l * d + j);
        for (std::int64_t pt = 0; pt < n; ++pt) vo[pt] = vd[pt];
        for (int a = 0; a < d; ++a) {
          const double* g1 = gamma.plane((a * d + i) * d + l);
          const double* g2 = gamma.plane((a * d + i) * d + j);
          const double* h1 = h.plane(a * d + j);
          const double* h2 = h.plane(l * d + a);
          for (std::int64_t pt = 0; pt < n; ++pt)
            vo[pt] -= g1[pt] * h1[pt] + g2[pt] * h2[pt];
        }
      }
  }
  TensorField out(grid, 1, 2);  // [k][i][j]
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double* vo = out.plane((k * d + i) * d + j);
        for (int l = 0; l < d; ++l) {
          const double* gi = m.g_inv.plane(k * d + l);
          const double* a1 = nh.plane((i * d + l) * d + j);
          const double* a2 = nh.plane((j * d + l) * d + i);
          const double* a3 = nh.plane((l * d + i) * d + j);
          for (std::int64_t pt = 0; pt < n; ++pt)
            vo[pt] += 0.5 * gi[pt] * (a1[pt] + a2[pt] - a3[pt]);
        }
      }
  return out;
}

CurvatureMonitors curvature_monitors(const HermitianPair& pair) {
  const GridSpec& grid = pair.omega.grid;
  const int d = grid.dim;
  const std::int64_t n = grid.npoints();
  CurvatureMonitors mon;
  mon.min_eig_g = std::numeric_limits<double>::infinity();

  TensorField gamma = christoffel(pair.metric);
  TensorField grad = covariant_grad_2form(pair.omega, gamma);  // [k][i][j]

  std::vector<double> r(static_cast<std::size_t>(d) * d * d * d);
  std::vector<double> t1(r.size()), t2(r.size());
  std::vector<double> gi(static_cast<std::size_t>(d) * d), gm(gi.size());
  std::vector<double> gr(static_cast<std::size_t>(d) * d * d), gam(gr.size());

  for (std::int64_t pt = 0; pt < n; ++pt) {
    for (int c = 0; c < d * d; ++c) gi[c] = pair.metric.g_inv.plane(c)[pt];
    for (int c = 0; c < d * d; ++c) gm[c] = pair.metric.g.plane(c)[pt];
    mon.min_eig_g = std::min(mon.min_eig_g, sym_min_eigenvalue(gm.data(), d));

    // |Rm|^2: assemble, raise all four indices, contract
    riemann_point(grid, gamma, pair.metric.g, pt, r.data());
    const int d2 = d * d, d3 = d * d * d;
    // raise index 0
    for (int i = 0; i < d; ++i)
      for (int rest = 0; rest < d3; ++rest) {
        double s = 0.0;
        for (int a = 0; a < d; ++a) s += gi[i * d + a] * r[a * d3 + rest];
        t1[i * d3 + rest] = s;
      }
    // raise index 1
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int rest = 0; rest < d2; ++rest) {
          double s = 0.0;
          for (int a = 0; a < d; ++a) s += gi[j * d + a] * t1[i * d3 + a * d2 + rest];
          t2[i * d3 + j * d2 + rest] = s;
        }
    // raise index 2
    for (int ij = 0; ij < d2; ++ij)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          double s = 0.0;
          for (int a = 0; a < d; ++a) s += gi[k * d + a] * t2[ij * d2 + a * d + l];
          t1[ij * d2 + k * d + l] = s;
        }
    // raise index 3 and contract with r
    double rm2 = 0.0;
    for (int ijk = 0; ijk < d3; ++ijk)
      for (int l = 0; l < d; ++l) {
        double s = 0.0;
        for (int a = 0; a < d; ++a) s += gi[l * d + a] * t1[ijk * d + a];
        rm2 += s * r[ijk * d + l];
      }
    mon.max_rm = std::max(mon.max_rm, std::sqrt(std::max(0.0, rm2)));

    // |nabla omega|^2: sequential index raises then contract
    for (int c = 0; c < d3; ++c) gr[c] = grad.plane(c)[pt];
    for (int k = 0; k < d; ++k)
      for (int rest = 0; rest < d2; ++rest) {
        double s = 0.0;
        for (int a = 0; a < d; ++a) s += gi[k * d + a] * gr[a * d2 + rest];
        t1[k * d2 + rest] = s;
      }
    for (int k = 0; k < d; ++k)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          double s = 0.0;
          for (int a = 0; a < d; ++a) s += gi[i * d + a] * t1[k * d2 + a * d + j];
          t2[(k * d + i) * d + j] = s;
        }
    double go2 = 0.0;
    for (int ki = 0; ki < d2; ++ki)
      for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int a = 0; a < d; ++a) s += gi[j * d + a] * t2[ki * d + a];
        go2 += s * gr[ki * d + j];
      }
    mon.max_grad_omega = std::max(mon.max_grad_omega, std::sqrt(std::max(0.0, go2)));

    // |nabla^2 omega|^2: nab_p (grad)_{qij} assembled on the fly
    for (int c = 0; c < d3; ++c) gam[c] = gamma.plane(c)[pt];
    double h2 = 0.0;
    // hess[p][qij]
    for (int p = 0; p < d; ++p) {
      const std::int64_t pp = shift_point(grid, pt, p, +1);
      const std::int64_t pm = shift_point(grid, pt, p, -1);
      const double cd = 1.0 / (2.0 * grid.spacing(p));
      for (int q = 0; q < d; ++q)
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) {
            const double* pl = grad.plane((q * d + i) * d + j);
            double v = cd * (pl[pp] - pl[pm]);
            for (int a = 0; a < d; ++a) {
              v -= gam[(a * d + p) * d + q] * gr[(a * d + i) * d + j];
              v -= gam[(a * d + p) * d + i] * gr[(q * d + a) * d + j];
              v -= gam[(a * d + p) * d + j] * gr[(q * d + i) * d + a];
            }
            t1[(p * d + q) * d2 + i * d + j] = v;
          }
    }
    // raise four indices of t1 against itself (reuse the Rm contraction)
    for (int i = 0; i < d; ++i)
      for (int rest = 0; rest < d3; ++rest) {
        double s = 0.0;
        for (int a = 0; a < d; ++a) s += gi[i * d + a] * t1[a * d3 + rest];
        t2[i * d3 + rest] = s;
      }
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int rest = 0; rest < d2; ++rest) {
          double s = 0.0;
          for (int a = 0; a < d; ++a) s += gi[j * d + a] * t2[i * d3 + a * d2 + rest];
          r[i * d3 + j * d2 + rest] = s;
        }
    for (int ij = 0; ij < d2; ++ij)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          double s = 0.0;
          for (int a = 0; a < d; ++a) s += gi[k * d + a] * r[ij * d2 + a * d + l];
          t2[ij * d2 + k * d + l] = s;
        }
    for (int ijk = 0; ijk < d3; ++ijk)
      for (int l = 0; l < d; ++l) {
        double s = 0.0;
        for (int a = 0; a < d; ++a) s += gi[l * d + a] * t2[ijk * d + a];
        h2 += s * t1[ijk * d + l];
      }
    mon.max_hess_omega = std::max(mon.max_hess_omega, std::sqrt(std::max(0.0, h2)));
  }
  return mon;
}

}  // namespace formflow
