#include "chernreg/complex_linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

namespace chernreg {

DefinitenessError::DefinitenessError(std::size_t pivot, double value)
    : std::runtime_error("matrix is not positive definite: pivot " + std::to_string(pivot) +
                         " = " + std::to_string(value)),
      pivot_(pivot),
      value_(value) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw DimensionError("ragged matrix literal");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const cplx> diag) {
  CMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

CMatrix CMatrix::from_columns(std::span<const CVector> columns) {
  if (columns.empty()) throw DimensionError("from_columns: no columns");
  const std::size_t dim = columns.front().size();
  CMatrix m(dim, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != dim) throw DimensionError("from_columns: mixed dimensions");
    for (std::size_t i = 0; i < dim; ++i) m(i, j) = columns[j][i];
  }
  return m;
}

CMatrix CMatrix::outer(const CVector& v, const CVector& w) {
  CMatrix m(v.size(), w.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < w.size(); ++j) m(i, j) = v[i] * std::conj(w[j]);
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

CMatrix CMatrix::conjugate() const {
  CMatrix m = *this;
  for (auto& x : m.data_) x = std::conj(x);
  return m;
}

cplx CMatrix::trace() const {
  if (!square()) throw DimensionError("trace of non-square matrix");
  cplx t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double CMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& x : data_) m = std::max(m, std::abs(x));
  return m;
}

bool CMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const cplx& x) {
    return std::isfinite(x.real()) && std::isfinite(x.imag());
  });
}

bool CMatrix::is_hermitian(double rel_tol) const {
  if (!square()) return false;
  const double scale = max_abs();
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i; j < cols_; ++j)
      if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > rel_tol * scale) return false;
  return true;
}

CVector CMatrix::column(std::size_t j) const {
  CVector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix sum: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix difference: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

CMatrix& CMatrix::operator*=(cplx s) {
  for (auto& x : data_) x *= s;
  return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols_ != b.rows_) throw DimensionError("matrix product: inner dimensions differ");
  CMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

CVector operator*(const CMatrix& a, const CVector& v) {
  if (a.cols_ != v.size()) throw DimensionError("matrix-vector product: dimension mismatch");
  CVector out(a.rows_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) out[i] += a(i, k) * v[k];
  return out;
}

bool IndexSubset::contains(std::size_t i) const {
  return std::binary_search(members.begin(), members.end(), i);
}

bool IndexSubset::valid() const {
  for (std::size_t k = 0; k < members.size(); ++k) {
    if (members[k] >= ambient) return false;
    if (k > 0 && members[k] <= members[k - 1]) return false;
  }
  return true;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  return m;
}

double norm(const CVector& v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

cplx det(const CMatrix& m) {
  if (!m.square()) throw DimensionError("det: matrix is " + std::to_string(m.rows()) + "x" +
                                        std::to_string(m.cols()));
  const std::size_t n = m.rows();
  CMatrix a = m;
  cplx result = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < n; ++i)
      if (std::abs(a(i, col)) > std::abs(a(piv, col))) piv = i;
    if (a(piv, col) == cplx{}) return 0.0;
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
      result = -result;
    }
    const cplx p = a(col, col);
    result *= p;
    for (std::size_t i = col + 1; i < n; ++i) {
      const cplx f = a(i, col) / p;
      if (f == cplx{}) continue;
      for (std::size_t j = col + 1; j < n; ++j) a(i, j) -= f * a(col, j);
    }
  }
  return result;
}

cplx minor_det(std::span<const CVector> tuple, const IndexSubset& subset, std::size_t extra) {
  if (tuple.empty()) throw DimensionError("minor_det: empty tuple");
  const std::size_t r = tuple.front().size();
  if (subset.size() + 1 != r) throw DimensionError("minor_det: subset must have size r-1");
  if (!subset.valid() || extra >= tuple.size()) throw DimensionError("minor_det: index out of range");
  if (subset.contains(extra)) return 0.0;
  CMatrix m(r, r);
  for (std::size_t c = 0; c <= subset.size(); ++c) {
    const std::size_t idx = c < subset.size() ? subset.members[c] : extra;
    if (idx >= tuple.size() || tuple[idx].size() != r) throw DimensionError("minor_det: vector dimension mismatch");
    for (std::size_t i = 0; i < r; ++i) m(i, c) = tuple[idx][i];
  }
  return det(m);
}

cplx subset_det(std::span<const CVector> tuple, const IndexSubset& subset) {
  if (tuple.empty()) throw DimensionError("subset_det: empty tuple");
  const std::size_t r = tuple.front().size();
  if (subset.size() != r) throw DimensionError("subset_det: subset must have size r");
  CMatrix m(r, r);
  for (std::size_t c = 0; c < r; ++c) {
    const std::size_t idx = subset.members[c];
    if (idx >= tuple.size() || tuple[idx].size() != r) throw DimensionError("subset_det: bad index or dimension");
    for (std::size_t i = 0; i < r; ++i) m(i, c) = tuple[idx][i];
  }
  return det(m);
}

CMatrix congruence(const CMatrix& g, const CMatrix& h) {
  if (!g.square() || !h.square() || g.cols() != h.rows())
    throw DimensionError("congruence: incompatible dimensions");
  CMatrix out = g * h * g.adjoint();
  // Symmetrize away the rounding asymmetry of the triple product.
  for (std::size_t i = 0; i < out.rows(); ++i) {
    out(i, i) = out(i, i).real();
    for (std::size_t j = i + 1; j < out.cols(); ++j) {
      const cplx avg = 0.5 * (out(i, j) + std::conj(out(j, i)));
      out(i, j) = avg;
      out(j, i) = std::conj(avg);
    }
  }
  return out;
}

CMatrix solve(const CMatrix& h, const CMatrix& b) {
  if (!h.square() || h.rows() != b.rows()) throw DimensionError("solve: incompatible dimensions");
  const std::size_t n = h.rows();
  const double threshold = 1e-14 * h.max_abs();
  // h = L D L^H, L unit lower triangular, D real diagonal.
  CMatrix l = CMatrix::identity(n);
  std::vector<double> d(n);
  for (std::size_t j = 0; j < n; ++j) {
    cplx s = h(j, j);
    for (std::size_t k = 0; k < j; ++k) s -= l(j, k) * d[k] * std::conj(l(j, k));
    d[j] = s.real();
    if (!(d[j] > threshold)) throw DefinitenessError(j, d[j]);
    for (std::size_t i = j + 1; i < n; ++i) {
      cplx v = h(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * d[k] * std::conj(l(j, k));
      l(i, j) = v / d[j];
    }
  }
  CMatrix x = b;
  for (std::size_t c = 0; c < b.cols(); ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      cplx v = x(i, c);
      for (std::size_t k = 0; k < i; ++k) v -= l(i, k) * x(k, c);
      x(i, c) = v;
    }
    for (std::size_t i = 0; i < n; ++i) x(i, c) /= d[i];
    for (std::size_t ii = n; ii-- > 0;) {
      cplx v = x(ii, c);
      for (std::size_t k = ii + 1; k < n; ++k) v -= std::conj(l(k, ii)) * x(k, c);
      x(ii, c) = v;
    }
  }
  return x;
}

std::vector<IndexSubset> subsets(std::size_t n, std::size_t s) {
  if (s > n) throw DimensionError("subsets: s > n");
  std::vector<IndexSubset> out;
  std::vector<std::size_t> cur(s);
  std::iota(cur.begin(), cur.end(), std::size_t{0});
  while (true) {
    out.push_back(IndexSubset{n, cur});
    std::size_t k = s;
    while (k > 0 && cur[k - 1] == n - s + (k - 1)) --k;
    if (k == 0) break;
    ++cur[k - 1];
    for (std::size_t j = k; j < s; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

namespace {

struct TraceExpander {
  std::span<const CMatrix> factors;
  std::vector<bool> used;
  cplx total = 0.0;

  void expand(const CMatrix& prefix, std::size_t depth, int sign) {
    const std::size_t m = factors.size();
    if (depth == m) {
      total += static_cast<double>(sign) * prefix.trace();
      return;
    }
    // The sign of the permutation changes by (-1)^(number of unused indices
    // smaller than the chosen one) as each position is filled.
    std::size_t smaller_unused = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (used[j]) continue;
      used[j] = true;
      const int s = (smaller_unused % 2 == 0) ? sign : -sign;
      expand(prefix * factors[j], depth + 1, s);
      used[j] = false;
      ++smaller_unused;
    }
  }
};

}  // namespace

cplx antisymmetrized_trace(std::span<const CMatrix> factors) {
  const std::size_t m = factors.size();
  if (m == 0) throw DimensionError("antisymmetrized_trace: no factors");
  for (const auto& f : factors)
    if (!f.square() || f.rows() != factors.front().rows())
      throw DimensionError("antisymmetrized_trace: factors must be square and equal-sized");
  TraceExpander ex{factors, std::vector<bool>(m, false)};
  if (m % 2 == 1) {
    ex.used[0] = true;
    ex.expand(factors[0], 1, 1);
    return static_cast<double>(m) * ex.total;
  }
  ex.expand(CMatrix::identity(factors.front().rows()), 0, 1);
  return ex.total;
}

}  // namespace chernreg
