#pragma once

// Dense complex linear algebra shared by the numeric modules: determinants,
// minors over index subsets, hermitian congruence and positive definite
// solves. Everything here is a pure function of its inputs.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace chernreg {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a hermitian matrix fails to factor as positive definite.
/// `pivot()` is the zero-based index of the first pivot below threshold.
class DefinitenessError : public std::runtime_error {
 public:
  DefinitenessError(std::size_t pivot, double value);
  std::size_t pivot() const noexcept { return pivot_; }
  double pivot_value() const noexcept { return value_; }

 private:
  std::size_t pivot_;
  double value_;
};

class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols);
  CMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static CMatrix identity(std::size_t n);
  static CMatrix diagonal(std::span<const cplx> diag);
  /// Matrix whose columns are the given vectors (all of equal dimension).
  static CMatrix from_columns(std::span<const CVector> columns);
  /// v w^H
  static CMatrix outer(const CVector& v, const CVector& w);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<const cplx> data() const noexcept { return data_; }

  CMatrix adjoint() const;
  CMatrix conjugate() const;
  cplx trace() const;
  double max_abs() const;
  bool all_finite() const;
  bool is_hermitian(double rel_tol = 1e-12) const;
  CVector column(std::size_t j) const;

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix& operator*=(cplx s);

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(CMatrix a, cplx s) { return a *= s; }
  friend CMatrix operator*(cplx s, CMatrix a) { return a *= s; }
  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);
  friend CVector operator*(const CMatrix& a, const CVector& v);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

/// Strictly increasing subset of {0, ..., ambient-1}.
struct IndexSubset {
  std::size_t ambient = 0;
  std::vector<std::size_t> members;

  std::size_t size() const noexcept { return members.size(); }
  bool contains(std::size_t i) const;
  bool valid() const;
};

double max_abs_diff(const CMatrix& a, const CMatrix& b);
double norm(const CVector& v);

/// Determinant by partially pivoted elimination.
cplx det(const CMatrix& m);

/// det of the r x r matrix with columns (v_{s_1}, ..., v_{s_{r-1}}, v_extra),
/// subset members taken in ascending order. Exactly zero when extra is in the
/// subset.
cplx minor_det(std::span<const CVector> tuple, const IndexSubset& subset, std::size_t extra);

/// det of the square matrix with columns v_i, i in subset (ascending).
cplx subset_det(std::span<const CVector> tuple, const IndexSubset& subset);

/// g h g^H
CMatrix congruence(const CMatrix& g, const CMatrix& h);

/// Solves h x = b for hermitian positive definite h via LDL^H. A pivot below
/// 1e-14 * max|h| raises DefinitenessError.
CMatrix solve(const CMatrix& h, const CMatrix& b);

/// All C(n, s) subsets of {0..n-1} of size s in lexicographic order.
std::vector<IndexSubset> subsets(std::size_t n, std::size_t s);

/// sum over sigma in S_m of sgn(sigma) Tr(M_sigma(1) ... M_sigma(m)).
///
/// For odd m the cyclic shifts of sigma are even permutations and leave the
/// trace unchanged, so only permutations with sigma(1) = 1 are expanded and
/// the sum is scaled by m. Prefix products are shared along the recursion.
cplx antisymmetrized_trace(std::span<const CMatrix> factors);

}  // namespace chernreg
