#include "formflow/grid.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace formflow {

GridSpec::GridSpec(int dim_, const std::vector<int>& sizes_, const std::vector<double>& lengths_) {
  if (dim_ != 2 && dim_ != 4 && dim_ != 6)
    throw std::invalid_argument("GridSpec: dim must be 2, 4 or 6, got " + std::to_string(dim_));
  if (static_cast<int>(sizes_.size()) != dim_ || static_cast<int>(lengths_.size()) != dim_)
    throw std::invalid_argument("GridSpec: sizes/lengths must have dim entries");
  dim = dim_;
  for (int a = 0; a < dim; ++a) {
    if (sizes_[a] < 4)
      throw std::invalid_argument("GridSpec: sizes[" + std::to_string(a) + "] must be >= 4");
    if (!(lengths_[a] > 0.0))
      throw std::invalid_argument("GridSpec: lengths[" + std::to_string(a) + "] must be > 0");
    sizes[a] = sizes_[a];
    lengths[a] = lengths_[a];
  }
}

double GridSpec::min_spacing() const {
  double h = spacing(0);
  for (int a = 1; a < dim; ++a) h = std::min(h, spacing(a));
  return h;
}

double GridSpec::cell_volume() const {
  double w = 1.0;
  for (int a = 0; a < dim; ++a) w *= spacing(a);
  return w;
}

double permutation_sign(const int* seq, int n) {
  double s = 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (seq[i] == seq[j]) return 0.0;
      if (seq[i] > seq[j]) s = -s;
    }
  return s;
}

std::pair<int, double> FormIndexTable::lookup(const int* tuple) const {
  std::array<int, kMaxDim> sorted{};
  for (int m = 0; m < degree; ++m) sorted[m] = tuple[m];
  double sign = permutation_sign(tuple, degree);
  if (sign == 0.0) return {-1, 0.0};
  std::sort(sorted.begin(), sorted.begin() + degree);
  // rank of the increasing tuple in lexicographic order
  int pos = 0;
  int prev = -1;
  int remaining = degree;
  for (int m = 0; m < degree; ++m) {
    for (int v = prev + 1; v < sorted[m]; ++v) pos += static_cast<int>(binomial(dim - 1 - v, remaining - 1));
    prev = sorted[m];
    --remaining;
  }
  return {pos, sign};
}

namespace {

void enumerate_increasing(int dim, int p, std::vector<int>& out) {
  std::vector<int> cur(p);
  // iterative combinations in lexicographic order
  for (int m = 0; m < p; ++m) cur[m] = m;
  if (p == 0) return;
  while (true) {
    out.insert(out.end(), cur.begin(), cur.end());
    int m = p - 1;
    while (m >= 0 && cur[m] == dim - p + m) --m;
    if (m < 0) break;
    ++cur[m];
    for (int j = m + 1; j < p; ++j) cur[j] = cur[j - 1] + 1;
  }
}

FormIndexTable build_table(int dim, int p) {
  FormIndexTable t;
  t.dim = dim;
  t.degree = p;
  t.ncomp = static_cast<int>(binomial(dim, p));
  enumerate_increasing(dim, p, t.idx);
  if (p == 0) t.ncomp = 1;

  // Hodge complement pairing: for component I of this table, the position of
  // I^c in the (dim-p)-component table and the sign eps(I, I^c), so that
  // (*alpha)_{I^c} = sqrt(det g) * eps(I, I^c) * alpha^I.
  t.star_pos.resize(t.ncomp);
  t.star_sign.resize(t.ncomp);
  FormIndexTable ktab;
  ktab.dim = dim;
  ktab.degree = dim - p;
  ktab.ncomp = static_cast<int>(binomial(dim, dim - p));
  for (int c = 0; c < t.ncomp; ++c) {
    std::array<bool, kMaxDim> in{};
    for (int m = 0; m < p; ++m) in[t.comp(c)[m]] = true;
    std::array<int, kMaxDim> compl_idx{};
    int w = 0;
    for (int a = 0; a < dim; ++a)
      if (!in[a]) compl_idx[w++] = a;  // I^c, increasing
    auto [pos, sgn] = ktab.lookup(compl_idx.data());  // rank only; needs dim/degree
    (void)sgn;
    t.star_pos[c] = pos;
    std::array<int, kMaxDim> concat{};
    for (int m = 0; m < p; ++m) concat[m] = t.comp(c)[m];
    for (int m = 0; m < dim - p; ++m) concat[p + m] = compl_idx[m];
    t.star_sign[c] = permutation_sign(concat.data(), dim);
  }

  // exterior derivative terms for producing THIS table's degree from p-1
  if (p >= 1) {
    const FormIndexTable sub = build_table(dim, p - 1);
    t.d_terms.resize(t.ncomp);
    for (int c = 0; c < t.ncomp; ++c) {
      for (int m = 0; m < p; ++m) {
        std::array<int, kMaxDim> rest{};
        int w = 0;
        for (int r = 0; r < p; ++r)
          if (r != m) rest[w++] = t.comp(c)[r];
        auto [pos, sgn] = sub.lookup(rest.data());
        FormIndexTable::DTerm term;
        term.axis = t.comp(c)[m];
        term.in_comp = pos;
        term.sign = ((m % 2) == 0 ? 1.0 : -1.0) * sgn;
        t.d_terms[c].push_back(term);
      }
    }
  }

  // interior product terms: output degree p-1 components from this degree-p
  // table; stored on this table, indexed by (out_comp, vector slot a)
  if (p >= 1) {
    const FormIndexTable sub = build_table(dim, p - 1);
    t.iota_terms.resize(static_cast<std::size_t>(sub.ncomp) * dim);
    for (int c = 0; c < sub.ncomp; ++c) {
      for (int a = 0; a < dim; ++a) {
        std::array<int, kMaxDim> full{};
        full[0] = a;
        for (int m = 0; m < p - 1; ++m) full[m + 1] = sub.comp(c)[m];
        auto [pos, sgn] = t.lookup(full.data());
        t.iota_terms[static_cast<std::size_t>(c) * dim + a] = {pos, sgn};
      }
    }
  }

  return t;
}

}  // namespace

const FormIndexTable& FormIndexTable::get(int dim, int degree) {
  static std::map<std::pair<int, int>, FormIndexTable> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(dim, degree);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_table(dim, degree)).first;
  return it->second;
}

}  // namespace formflow
