#pragma once

#include <cmath>
#include <cstring>

namespace formflow {

// Pointwise dense kernels on D x D matrices held in row-major stack arrays.
// D is 2, 4 or 6; templating gives the compiler fixed trip counts in the hot
// per-point loops.

template <int D>
inline void mat_mul(const double* a, const double* b, double* out) {
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) {
      double s = 0.0;
      for (int k = 0; k < D; ++k) s += a[i * D + k] * b[k * D + j];
      out[i * D + j] = s;
    }
}

template <int D>
inline void mat_transpose(const double* a, double* out) {
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) out[j * D + i] = a[i * D + j];
}

/// Cholesky g = L L^T for symmetric positive definite g; returns false if a
/// pivot is not strictly positive.
template <int D>
inline bool sym_cholesky(const double* g, double* L) {
  double a[D * D];
  std::memcpy(a, g, sizeof(a));
  for (int j = 0; j < D; ++j) {
    double d = a[j * D + j];
    for (int k = 0; k < j; ++k) d -= L[j * D + k] * L[j * D + k];
    if (!(d > 0.0)) return false;
    const double lj = std::sqrt(d);
    L[j * D + j] = lj;
    for (int k = j + 1; k < D; ++k) L[j * D + k] = 0.0;
    for (int i = j + 1; i < D; ++i) {
      double s = a[i * D + j];
      for (int k = 0; k < j; ++k) s -= L[i * D + k] * L[j * D + k];
      L[i * D + j] = s / lj;
    }
  }
  return true;
}

template <int D>
inline double det_from_chol(const double* L) {
  double d = 1.0;
  for (int i = 0; i < D; ++i) d *= L[i * D + i];
  return d * d;
}

/// Inverse of SPD g from its Cholesky factor.
template <int D>
inline void sym_inverse_from_chol(const double* L, double* out) {
  // invert L (lower triangular), then out = L^-T L^-1
  double Li[D * D];
  for (int i = 0; i < D; ++i) {
    for (int j = 0; j < D; ++j) Li[i * D + j] = 0.0;
    Li[i * D + i] = 1.0 / L[i * D + i];
    for (int j = 0; j < i; ++j) {
      double s = 0.0;
      for (int k = j; k < i; ++k) s += L[i * D + k] * Li[k * D + j];
      Li[i * D + j] = -s / L[i * D + i];
    }
  }
  for (int i = 0; i < D; ++i)
    for (int j = 0; j <= i; ++j) {
      double s = 0.0;
      for (int k = i; k < D; ++k) s += Li[k * D + i] * Li[k * D + j];
      out[i * D + j] = s;
      out[j * D + i] = s;
    }
}

/// General inverse by Gauss-Jordan with partial pivoting; returns false if
/// singular to working precision.
template <int D>
inline bool mat_inverse(const double* a_in, double* out) {
  double a[D * D];
  std::memcpy(a, a_in, sizeof(a));
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) out[i * D + j] = (i == j) ? 1.0 : 0.0;
  for (int col = 0; col < D; ++col) {
    int piv = col;
    double best = std::abs(a[col * D + col]);
    for (int r = col + 1; r < D; ++r) {
      const double v = std::abs(a[r * D + col]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) return false;
    if (piv != col) {
      for (int j = 0; j < D; ++j) {
        std::swap(a[piv * D + j], a[col * D + j]);
        std::swap(out[piv * D + j], out[col * D + j]);
      }
    }
    const double inv = 1.0 / a[col * D + col];
    for (int j = 0; j < D; ++j) {
      a[col * D + j] *= inv;
      out[col * D + j] *= inv;
    }
    for (int r = 0; r < D; ++r) {
      if (r == col) continue;
      const double f = a[r * D + col];
      if (f == 0.0) continue;
      for (int j = 0; j < D; ++j) {
        a[r * D + j] -= f * a[col * D + j];
        out[r * D + j] -= f * out[col * D + j];
      }
    }
  }
  return true;
}

/// Pfaffian of an antisymmetric matrix by expansion along the first row;
/// in dims 4 and 6 this is the closed 3-term / 15-term formula.
inline double pfaffian_rec(const double* a, const int* rows, int n, int full) {
  if (n == 0) return 1.0;
  if (n == 2) return a[rows[0] * full + rows[1]];
  double s = 0.0;
  double sign = 1.0;
  int sub[8];
  for (int j = 1; j < n; ++j) {
    int w = 0;
    for (int k = 1; k < n; ++k)
      if (k != j) sub[w++] = rows[k];
    s += sign * a[rows[0] * full + rows[j]] * pfaffian_rec(a, sub, n - 2, full);
    sign = -sign;
  }
  return s;
}

template <int D>
inline double pfaffian(const double* a) {
  int rows[D];
  for (int i = 0; i < D; ++i) rows[i] = i;
  return pfaffian_rec(a, rows, D, D);
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi; evals ascending.
template <int D>
inline void sym_eigenvalues(const double* a_in, double* evals) {
  double a[D * D];
  std::memcpy(a, a_in, sizeof(a));
  for (int sweep = 0; sweep < 30; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < D; ++p)
      for (int q = p + 1; q < D; ++q) off += a[p * D + q] * a[p * D + q];
    if (off < 1e-30) break;
    for (int p = 0; p < D; ++p)
      for (int q = p + 1; q < D; ++q) {
        const double apq = a[p * D + q];
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a[q * D + q] - a[p * D + p]) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < D; ++k) {
          const double akp = a[k * D + p], akq = a[k * D + q];
          a[k * D + p] = c * akp - s * akq;
          a[k * D + q] = s * akp + c * akq;
        }
        for (int k = 0; k < D; ++k) {
          const double apk = a[p * D + k], aqk = a[q * D + k];
          a[p * D + k] = c * apk - s * aqk;
          a[q * D + k] = s * apk + c * aqk;
        }
      }
  }
  for (int i = 0; i < D; ++i) evals[i] = a[i * D + i];
  // insertion sort ascending
  for (int i = 1; i < D; ++i) {
    const double v = evals[i];
    int j = i - 1;
    while (j >= 0 && evals[j] > v) {
      evals[j + 1] = evals[j];
      --j;
    }
    evals[j + 1] = v;
  }
}

inline double sym_min_eigenvalue(const double* a, int dim) {
  double ev[6];
  switch (dim) {
    case 2: sym_eigenvalues<2>(a, ev); break;
    case 4: sym_eigenvalues<4>(a, ev); break;
    case 6: sym_eigenvalues<6>(a, ev); break;
    default: return 0.0;
  }
  return ev[0];
}

inline double pfaffian_dim(const double* a, int dim) {
  switch (dim) {
    case 2: return pfaffian<2>(a);
    case 4: return pfaffian<4>(a);
    case 6: return pfaffian<6>(a);
    default: return 0.0;
  }
}

}  // namespace formflow
