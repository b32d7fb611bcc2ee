#include "chernreg/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace chernreg {

namespace {

void enumerate_degree(std::size_t nvars, int degree, std::size_t pos, std::vector<int>& cur,
                      std::vector<std::vector<int>>& out) {
  if (pos + 1 == nvars) {
    cur[pos] = degree;
    out.push_back(cur);
    return;
  }
  for (int e = degree; e >= 0; --e) {
    cur[pos] = e;
    enumerate_degree(nvars, degree - e, pos + 1, cur, out);
  }
}

}  // namespace

JetSpace::JetSpace(std::size_t nvars, int order) : nvars_(nvars), order_(order) {
  if (order < 0) throw std::invalid_argument("JetSpace: negative order");
  count_by_degree_.assign(static_cast<std::size_t>(order) + 1, 0);
  for (int d = 0; d <= order; ++d) {
    if (nvars == 0) {
      if (d == 0) exponents_.push_back({});
    } else {
      std::vector<int> cur(nvars, 0);
      enumerate_degree(nvars, d, 0, cur, exponents_);
    }
    count_by_degree_[static_cast<std::size_t>(d)] = exponents_.size();
  }
  for (const auto& e : exponents_) {
    int s = 0;
    for (int x : e) s += x;
    degrees_.push_back(s);
  }
  std::map<std::vector<int>, std::size_t> lookup;
  for (std::size_t i = 0; i < exponents_.size(); ++i) lookup[exponents_[i]] = i;

  std::vector<std::vector<Product>> by_degree(static_cast<std::size_t>(order) + 1);
  for (std::size_t a = 0; a < exponents_.size(); ++a)
    for (std::size_t b = 0; b < exponents_.size(); ++b) {
      const int d = degrees_[a] + degrees_[b];
      if (d > order) continue;
      std::vector<int> e(nvars);
      for (std::size_t v = 0; v < nvars; ++v) e[v] = exponents_[a][v] + exponents_[b][v];
      by_degree[static_cast<std::size_t>(d)].push_back({a, b, lookup.at(e)});
    }
  for (const auto& list : by_degree) {
    products_.insert(products_.end(), list.begin(), list.end());
    product_count_by_degree_.push_back(products_.size());
  }

  raise_.assign(exponents_.size() * nvars, 0);
  for (std::size_t b = 0; b < exponents_.size(); ++b) {
    if (degrees_[b] >= order) continue;
    for (std::size_t v = 0; v < nvars; ++v) {
      std::vector<int> e = exponents_[b];
      ++e[v];
      raise_[b * nvars + v] = lookup.at(e);
    }
  }
}

std::size_t JetSpace::count(int d) const {
  if (d < 0) return 0;
  return count_by_degree_.at(static_cast<std::size_t>(std::min(d, order_)));
}

std::size_t JetSpace::product_count(int d) const {
  if (d < 0) return 0;
  return product_count_by_degree_.at(static_cast<std::size_t>(std::min(d, order_)));
}

std::size_t JetSpace::index(const std::vector<int>& exponent) const {
  if (exponent.size() != nvars_) throw DimensionError("JetSpace::index: wrong exponent length");
  int d = 0;
  for (int x : exponent) {
    if (x < 0) throw std::invalid_argument("JetSpace::index: negative exponent");
    d += x;
  }
  if (d > order_) throw JetOrderError("JetSpace::index: degree exceeds the jet order");
  const auto begin = exponents_.begin() + static_cast<std::ptrdiff_t>(count(d - 1));
  const auto end = exponents_.begin() + static_cast<std::ptrdiff_t>(count(d));
  const auto it = std::find(begin, end, exponent);
  return static_cast<std::size_t>(it - exponents_.begin());
}

MatrixJet::MatrixJet(JetSpacePtr space, std::size_t dim) : MatrixJet(space, dim, space->order()) {}

MatrixJet::MatrixJet(JetSpacePtr space, std::size_t dim, int valid)
    : space_(std::move(space)), dim_(dim), valid_(valid) {
  if (!space_) throw std::invalid_argument("MatrixJet: null space");
  if (valid_ < 0) throw JetOrderError("MatrixJet: jet order exhausted (a derivative of a degree-0 jet was taken)");
  data_.assign(space_->count(valid_) * dim_ * dim_, cplx{});
}

MatrixJet MatrixJet::constant(JetSpacePtr space, const CMatrix& value) {
  if (!value.square()) throw DimensionError("MatrixJet::constant: matrix must be square");
  MatrixJet out(std::move(space), value.rows());
  out.set_coefficient(0, value);
  return out;
}

MatrixJet MatrixJet::scalar(JetSpacePtr space, cplx value) {
  MatrixJet out(std::move(space), 1);
  out.data_[0] = value;
  return out;
}

MatrixJet MatrixJet::variable(JetSpacePtr space, std::size_t v, cplx value) {
  if (v >= space->nvars()) throw DimensionError("MatrixJet::variable: index out of range");
  MatrixJet out = scalar(space, value);
  if (space->order() >= 1) {
    std::vector<int> e(space->nvars(), 0);
    e[v] = 1;
    out.data_[space->index(e)] = 1.0;
  }
  return out;
}

CMatrix MatrixJet::coefficient(std::size_t mono) const {
  if (mono >= terms()) throw JetOrderError("MatrixJet::coefficient: monomial beyond the valid order");
  CMatrix c(dim_, dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) c(i, j) = entry(mono, i, j);
  return c;
}

void MatrixJet::set_coefficient(std::size_t mono, const CMatrix& c) {
  if (mono >= terms()) throw JetOrderError("MatrixJet::set_coefficient: monomial beyond the valid order");
  if (c.rows() != dim_ || c.cols() != dim_) throw DimensionError("MatrixJet::set_coefficient: wrong shape");
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) data_[mono * dim_ * dim_ + i * dim_ + j] = c(i, j);
}

namespace {

void check_compatible(const MatrixJet& a, const MatrixJet& b, const char* what) {
  if (a.space() != b.space()) throw std::invalid_argument(std::string(what) + ": jets live in different spaces");
}

}  // namespace

MatrixJet MatrixJet::truncated(int valid) const {
  if (valid >= valid_) return *this;
  MatrixJet out(space_, dim_, valid);
  std::copy(data_.begin(), data_.begin() + static_cast<std::ptrdiff_t>(out.data_.size()), out.data_.begin());
  return out;
}

MatrixJet& MatrixJet::operator+=(const MatrixJet& o) {
  check_compatible(*this, o, "MatrixJet +");
  if (o.dim_ != dim_) throw DimensionError("MatrixJet +: dimension mismatch");
  if (o.valid_ < valid_) *this = truncated(o.valid_);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

MatrixJet& MatrixJet::operator-=(const MatrixJet& o) {
  check_compatible(*this, o, "MatrixJet -");
  if (o.dim_ != dim_) throw DimensionError("MatrixJet -: dimension mismatch");
  if (o.valid_ < valid_) *this = truncated(o.valid_);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

MatrixJet& MatrixJet::operator*=(cplx s) {
  for (auto& x : data_) x *= s;
  return *this;
}

MatrixJet operator*(const MatrixJet& a, const MatrixJet& b) {
  check_compatible(a, b, "MatrixJet *");
  const int valid = std::min(a.valid_, b.valid_);
  const auto& table = a.space_->products();
  const std::size_t count = a.space_->product_count(valid);
  if (a.dim_ == b.dim_) {
    const std::size_t n = a.dim_;
    const std::size_t n2 = n * n;
    MatrixJet out(a.space_, n, valid);
    for (std::size_t t = 0; t < count; ++t) {
      const auto& p = table[t];
      const cplx* x = &a.data_[p.a * n2];
      const cplx* y = &b.data_[p.b * n2];
      cplx* z = &out.data_[p.out * n2];
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
          const cplx xik = x[i * n + k];
          if (xik == cplx{}) continue;
          for (std::size_t j = 0; j < n; ++j) z[i * n + j] += xik * y[k * n + j];
        }
    }
    return out;
  }
  if (a.dim_ != 1 && b.dim_ != 1) throw DimensionError("MatrixJet *: dimension mismatch");
  const bool a_scalar = a.dim_ == 1;
  const MatrixJet& s = a_scalar ? a : b;
  const MatrixJet& m = a_scalar ? b : a;
  const std::size_t n2 = m.dim_ * m.dim_;
  MatrixJet out(a.space_, m.dim_, valid);
  for (std::size_t t = 0; t < count; ++t) {
    const auto& p = table[t];
    const cplx c = s.data_[a_scalar ? p.a : p.b];
    if (c == cplx{}) continue;
    const cplx* y = &m.data_[(a_scalar ? p.b : p.a) * n2];
    cplx* z = &out.data_[p.out * n2];
    for (std::size_t e = 0; e < n2; ++e) z[e] += c * y[e];
  }
  return out;
}

MatrixJet MatrixJet::derivative(std::size_t v) const {
  if (v >= space_->nvars()) throw DimensionError("MatrixJet::derivative: variable out of range");
  if (valid_ == 0) throw JetOrderError("MatrixJet::derivative: jet order insufficient");
  MatrixJet out(space_, dim_, valid_ - 1);
  const std::size_t n2 = dim_ * dim_;
  for (std::size_t b = 0; b < out.terms(); ++b) {
    const std::size_t src = space_->raise(b, v);
    const double factor = space_->exponent(src)[v];
    for (std::size_t e = 0; e < n2; ++e) out.data_[b * n2 + e] = factor * data_[src * n2 + e];
  }
  return out;
}

MatrixJet MatrixJet::inverse() const {
  const CMatrix h0 = value();
  const CMatrix h0inv = solve(h0, CMatrix::identity(dim_));
  MatrixJet delta = *this;
  for (std::size_t e = 0; e < dim_ * dim_; ++e) delta.data_[e] = 0.0;
  // (h0 + delta)^{-1} = sum_j (-h0^{-1} delta)^j h0^{-1}; delta is nilpotent.
  const MatrixJet base(constant(space_, h0inv).truncated(valid_));
  const MatrixJet step = (-1.0) * (base * delta);
  MatrixJet term = base;
  MatrixJet sum = base;
  for (int j = 1; j <= valid_; ++j) {
    term = step * term;
    sum += term;
  }
  return sum;
}

MatrixJet MatrixJet::exp() const {
  const double scale = value().max_abs() * static_cast<double>(dim_);
  int squarings = 0;
  if (scale > 0.5) squarings = static_cast<int>(std::ceil(std::log2(scale / 0.5)));
  const MatrixJet q = (*this) * std::ldexp(1.0, -squarings);
  MatrixJet identity = constant(space_, CMatrix::identity(dim_)).truncated(valid_);
  MatrixJet sum = identity;
  MatrixJet term = identity;
  // |q0| <= 1/2 and the nilpotent part dies after valid_ + 1 factors.
  for (int j = 1; j <= 30 + valid_; ++j) {
    term = term * q;
    term *= 1.0 / j;
    sum += term;
    if (j > valid_ && term.max_abs() < 1e-18 * sum.max_abs()) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

MatrixJet MatrixJet::trace() const {
  MatrixJet out(space_, 1, valid_);
  for (std::size_t mono = 0; mono < terms(); ++mono) {
    cplx t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += entry(mono, i, i);
    out.data_[mono] = t;
  }
  return out;
}

MatrixJet MatrixJet::conjugate_impl(const std::vector<std::size_t>& conj_var, bool transpose) const {
  if (conj_var.size() != space_->nvars()) throw DimensionError("MatrixJet: conjugation map has wrong length");
  MatrixJet out(space_, dim_, valid_);
  const std::size_t n2 = dim_ * dim_;
  for (std::size_t mono = 0; mono < terms(); ++mono) {
    const auto& e = space_->exponent(mono);
    std::vector<int> swapped(e.size());
    for (std::size_t v = 0; v < e.size(); ++v) swapped[conj_var[v]] = e[v];
    const std::size_t target = space_->index(swapped);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j)
        out.data_[target * n2 + (transpose ? j * dim_ + i : i * dim_ + j)] = std::conj(entry(mono, i, j));
  }
  return out;
}

MatrixJet MatrixJet::adjoint(const std::vector<std::size_t>& conj_var) const {
  return conjugate_impl(conj_var, true);
}

MatrixJet MatrixJet::conjugate(const std::vector<std::size_t>& conj_var) const {
  return conjugate_impl(conj_var, false);
}

double MatrixJet::max_abs() const {
  double m = 0.0;
  for (const auto& x : data_) m = std::max(m, std::abs(x));
  return m;
}

bool MatrixJet::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](cplx x) { return x == cplx{}; });
}

}  // namespace chernreg
