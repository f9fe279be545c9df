#pragma once

#include "formflow/fields.hpp"

namespace formflow::detail {

// Per-point load/store between component planes and stack matrices.

template <int D>
inline void load_antisym(const FormField& f, std::int64_t pt, double* m) {
  const FormIndexTable& t = f.table();
  for (int i = 0; i < D * D; ++i) m[i] = 0.0;
  for (int c = 0; c < f.ncomp; ++c) {
    const int i = t.comp(c)[0];
    const int j = t.comp(c)[1];
    const double v = f.plane(c)[pt];
    m[i * D + j] = v;
    m[j * D + i] = -v;
  }
}

template <int D>
inline void store_antisym(FormField& f, std::int64_t pt, const double* m) {
  const FormIndexTable& t = f.table();
  for (int c = 0; c < f.ncomp; ++c) {
    const int i = t.comp(c)[0];
    const int j = t.comp(c)[1];
    f.plane(c)[pt] = m[i * D + j];
  }
}

template <int D>
inline void load_mat(const TensorField& f, std::int64_t pt, double* m) {
  for (int c = 0; c < D * D; ++c) m[c] = f.plane(c)[pt];
}

template <int D>
inline void store_mat(TensorField& f, std::int64_t pt, const double* m) {
  for (int c = 0; c < D * D; ++c) f.plane(c)[pt] = m[c];
}

template <int D>
inline void load_sym(const TensorField& f, std::int64_t pt, double* m) {
  for (int c = 0; c < D * D; ++c) m[c] = f.plane(c)[pt];
}

}  // namespace formflow::detail
