#pragma once

// Truncated multivariate Taylor polynomials ("jets") with square matrix
// coefficients. A jet stores the coefficients c_a of f = sum_a c_a x^a for
// total degree |a| <= valid(), where x are offsets from the expansion point.
// Products truncate to the smaller valid degree, derivatives lower it by one.

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <vector>

#include "chernreg/complex_linalg.hpp"

namespace chernreg {

class JetOrderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Monomials in `nvars` variables up to total degree `order`, graded
/// (all degree-d monomials precede degree d+1), with product and derivative
/// tables.
class JetSpace {
 public:
  JetSpace(std::size_t nvars, int order);

  std::size_t nvars() const noexcept { return nvars_; }
  int order() const noexcept { return order_; }
  /// Number of monomials of degree <= d.
  std::size_t count(int d) const;
  std::size_t size() const noexcept { return exponents_.size(); }
  const std::vector<int>& exponent(std::size_t i) const { return exponents_[i]; }
  int degree(std::size_t i) const { return degrees_[i]; }
  /// Index of an exponent vector; throws if its degree exceeds order().
  std::size_t index(const std::vector<int>& exponent) const;

  struct Product {
    std::size_t a, b, out;
  };
  /// Pairs with deg(a) + deg(b) <= d occupy the first product_count(d) entries.
  const std::vector<Product>& products() const noexcept { return products_; }
  std::size_t product_count(int d) const;
  /// For monomial b of degree < order: index of b + e_v.
  std::size_t raise(std::size_t b, std::size_t v) const { return raise_[b * nvars_ + v]; }

 private:
  std::size_t nvars_;
  int order_;
  std::vector<std::vector<int>> exponents_;
  std::vector<int> degrees_;
  std::vector<std::size_t> count_by_degree_;
  std::vector<Product> products_;
  std::vector<std::size_t> product_count_by_degree_;
  std::vector<std::size_t> raise_;
};

using JetSpacePtr = std::shared_ptr<const JetSpace>;

class MatrixJet {
 public:
  MatrixJet() = default;
  /// Zero jet valid to space->order().
  MatrixJet(JetSpacePtr space, std::size_t dim);

  static MatrixJet constant(JetSpacePtr space, const CMatrix& value);
  static MatrixJet scalar(JetSpacePtr space, cplx value);
  /// value + x_v as a 1x1 jet.
  static MatrixJet variable(JetSpacePtr space, std::size_t v, cplx value);

  const JetSpacePtr& space() const noexcept { return space_; }
  std::size_t dim() const noexcept { return dim_; }
  int valid() const noexcept { return valid_; }
  std::size_t terms() const { return space_->count(valid_); }

  CMatrix coefficient(std::size_t mono) const;
  void set_coefficient(std::size_t mono, const CMatrix& c);
  CMatrix value() const { return coefficient(0); }
  cplx entry(std::size_t mono, std::size_t i, std::size_t j) const {
    return data_[mono * dim_ * dim_ + i * dim_ + j];
  }

  MatrixJet& operator+=(const MatrixJet& o);
  MatrixJet& operator-=(const MatrixJet& o);
  MatrixJet& operator*=(cplx s);
  friend MatrixJet operator+(MatrixJet a, const MatrixJet& b) { return a += b; }
  friend MatrixJet operator-(MatrixJet a, const MatrixJet& b) { return a -= b; }
  friend MatrixJet operator*(MatrixJet a, cplx s) { return a *= s; }
  friend MatrixJet operator*(cplx s, MatrixJet a) { return a *= s; }
  /// Matrix product; a 1x1 factor multiplies every entry of the other.
  friend MatrixJet operator*(const MatrixJet& a, const MatrixJet& b);

  /// Partial derivative in variable v; valid() drops by one.
  MatrixJet derivative(std::size_t v) const;
  /// Inverse by the Neumann series around the (hermitian positive definite) value.
  MatrixJet inverse() const;
  /// Matrix exponential by scaling and squaring.
  MatrixJet exp() const;
  MatrixJet trace() const;
  /// f -> f^dagger where conj_var[v] is the variable paired with v under
  /// complex conjugation (z <-> zbar, tau fixed).
  MatrixJet adjoint(const std::vector<std::size_t>& conj_var) const;
  /// Entrywise conjugate with the same variable pairing (no transpose).
  MatrixJet conjugate(const std::vector<std::size_t>& conj_var) const;
  MatrixJet truncated(int valid) const;

  double max_abs() const;  // over all stored coefficients
  bool is_zero() const;

 private:
  JetSpacePtr space_;
  std::size_t dim_ = 0;
  int valid_ = 0;
  std::vector<cplx> data_;  // [mono][i][j]

  MatrixJet(JetSpacePtr space, std::size_t dim, int valid);
  MatrixJet conjugate_impl(const std::vector<std::size_t>& conj_var, bool transpose) const;
};

}  // namespace chernreg
