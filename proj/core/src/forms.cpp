#include "gidx/forms.hpp"

#include <bit>

#include "gidx/error.hpp"

namespace gidx {

int form_degree(unsigned mask) { return std::popcount(mask); }

int wedge_sign(unsigned i, unsigned j) {
  if (i & j) return 0;
  // count pairs (p in i, q in j) with p > q: each needs one transposition
  int swaps = 0;
  for (unsigned q = 0; q < 32; ++q) {
    if (!(j >> q & 1u)) continue;
    swaps += std::popcount(i >> (q + 1));
  }
  return (swaps % 2) ? -1 : 1;
}

namespace {

template <typename T>
PointForm<T> wedge_impl(const PointForm<T>& a, const PointForm<T>& b, const T& zero) {
  PointForm<T> out(a.dim, zero);
  const unsigned n = 1u << a.dim;
  for (unsigned i = 0; i < n; ++i) {
    for (unsigned j = 0; j < n; ++j) {
      const int s = wedge_sign(i, j);
      if (s == 0) continue;
      out.c[i | j] += static_cast<double>(s) * (a.c[i] * b.c[j]);
    }
  }
  return out;
}

}  // namespace

ScalarPointForm wedge(const ScalarPointForm& a, const ScalarPointForm& b) {
  return wedge_impl<Complex>(a, b, Complex(0.0));
}

MatrixPointForm wedge(const MatrixPointForm& a, const MatrixPointForm& b) {
  const auto r = a.c.front().rows();
  return wedge_impl<CMatrix>(a, b, CMatrix::Zero(r, r));
}

ScalarPointForm trace(const MatrixPointForm& a) {
  ScalarPointForm out(a.dim, Complex(0.0));
  for (std::size_t i = 0; i < a.c.size(); ++i) out.c[i] = a.c[i].trace();
  return out;
}

Complex top_component(const ScalarPointForm& f) { return f.c.back(); }

Complex integrate(const ScalarFormField& omega) {
  const Atlas& at = *omega.atlas;
  if (omega.max_degree < at.dimension()) {
    throw Error(ErrorCode::DegreeMismatch, "chern-weil", "integrate",
                "form has maximal degree " + std::to_string(omega.max_degree) +
                    " on a base of dimension " + std::to_string(at.dimension()));
  }
  Complex total = 0.0;
  for (std::size_t a = 0; a < at.patch_count(); ++a) {
    Complex patch_sum = 0.0;
    for (std::size_t i = 0; i < at.node_count(); ++i) {
      const double w = at.pou(a, i) * at.weight(i);
      if (w == 0.0) continue;
      patch_sum += w * top_component(omega.v[a][i]);
    }
    total += patch_sum;
  }
  return total;
}

ScalarFormField wedge(const ScalarFormField& a, const ScalarFormField& b) {
  ScalarFormField out{a.atlas, std::min(a.atlas->dimension(), a.max_degree + b.max_degree), {}};
  out.v.resize(a.v.size());
  for (std::size_t p = 0; p < a.v.size(); ++p) {
    out.v[p].reserve(a.v[p].size());
    for (std::size_t i = 0; i < a.v[p].size(); ++i) out.v[p].push_back(wedge(a.v[p][i], b.v[p][i]));
  }
  return out;
}

ScalarFormField add(const ScalarFormField& a, const ScalarFormField& b, Complex sb) {
  ScalarFormField out = a;
  out.max_degree = std::max(a.max_degree, b.max_degree);
  for (std::size_t p = 0; p < a.v.size(); ++p)
    for (std::size_t i = 0; i < a.v[p].size(); ++i)
      for (std::size_t k = 0; k < a.v[p][i].c.size(); ++k) out.v[p][i].c[k] += sb * b.v[p][i].c[k];
  return out;
}

ScalarFormField degree_part(const ScalarFormField& a, int k) {
  ScalarFormField out = a;
  out.max_degree = k;
  for (auto& patch : out.v)
    for (auto& f : patch)
      for (unsigned m = 0; m < f.c.size(); ++m)
        if (form_degree(m) != k) f.c[m] = 0.0;
  return out;
}

}  // namespace gidx
