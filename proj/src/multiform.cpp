#include "chernreg/multiform.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace chernreg {

FormContext::FormContext(int m, int k, int jet_order) : m_(m), k_(k) {
  if (m < 0 || k < 0) throw std::invalid_argument("FormContext: negative dimension");
  if (2 * m + k > 30) throw std::invalid_argument("FormContext: too many generators");
  space_ = std::make_shared<const JetSpace>(generators(), jet_order);
  conj_.resize(generators());
  for (int i = 0; i < m; ++i) {
    conj_[dz(i)] = dzbar(i);
    conj_[dzbar(i)] = dz(i);
  }
  for (int b = 0; b < k; ++b) conj_[dtau(b)] = dtau(b);
}

std::uint32_t FormContext::holomorphic_mask() const { return (1u << m_) - 1u; }
std::uint32_t FormContext::antiholomorphic_mask() const { return holomorphic_mask() << m_; }
std::uint32_t FormContext::parameter_mask() const { return ((1u << k_) - 1u) << (2 * m_); }

TriDegree FormContext::tri_degree(std::uint32_t mask) const {
  return {std::popcount(mask & holomorphic_mask()), std::popcount(mask & antiholomorphic_mask()),
          std::popcount(mask & parameter_mask())};
}

MultiForm::MultiForm(FormContextPtr ctx, std::size_t dim) : ctx_(std::move(ctx)), dim_(dim) {
  if (!ctx_) throw std::invalid_argument("MultiForm: null context");
}

MultiForm MultiForm::term(FormContextPtr ctx, std::uint32_t mask, const MatrixJet& coefficient) {
  MultiForm out(std::move(ctx), coefficient.dim());
  out.add(mask, coefficient);
  return out;
}

void MultiForm::add(std::uint32_t mask, const MatrixJet& coefficient) {
  if (coefficient.dim() != dim_) throw DimensionError("MultiForm::add: coefficient dimension mismatch");
  if (coefficient.space() != ctx_->space()) throw std::invalid_argument("MultiForm::add: context mismatch");
  if (mask >> ctx_->generators()) throw std::invalid_argument("MultiForm::add: generator out of range");
  auto it = terms_.find(mask);
  if (it == terms_.end())
    terms_.emplace(mask, coefficient);
  else
    it->second += coefficient;
}

namespace {

void check_context(const MultiForm& a, const MultiForm& b, const char* what) {
  if (a.context() != b.context()) throw std::invalid_argument(std::string(what) + ": context mismatch");
}

}  // namespace

MultiForm& MultiForm::operator+=(const MultiForm& o) {
  check_context(*this, o, "MultiForm +");
  for (const auto& [mask, c] : o.terms_) add(mask, c);
  return *this;
}

MultiForm& MultiForm::operator-=(const MultiForm& o) {
  check_context(*this, o, "MultiForm -");
  for (const auto& [mask, c] : o.terms_) add(mask, (-1.0) * c);
  return *this;
}

MultiForm& MultiForm::operator*=(cplx s) {
  for (auto& [mask, c] : terms_) c *= s;
  return *this;
}

MultiForm MultiForm::component(TriDegree d) const {
  return filter([&](std::uint32_t mask) {
    const TriDegree t = ctx_->tri_degree(mask);
    return t.p == d.p && t.q == d.q && t.s == d.s;
  });
}

bool MultiForm::homogeneous_parity(int& parity) const {
  parity = -1;
  for (const auto& [mask, c] : terms_) {
    const int p = std::popcount(mask) % 2;
    if (parity >= 0 && p != parity) return false;
    parity = p;
  }
  if (parity < 0) parity = 0;
  return true;
}

double MultiForm::max_abs() const {
  double m = 0.0;
  for (const auto& [mask, c] : terms_) m = std::max(m, c.value().max_abs());
  return m;
}

int wedge_sign(std::uint32_t a, std::uint32_t b) {
  // Count pairs (i in a, j in b) with i > j.
  int inversions = 0;
  while (b) {
    const int j = std::countr_zero(b);
    inversions += std::popcount(a >> (j + 1));
    b &= b - 1;
  }
  return inversions % 2 == 0 ? 1 : -1;
}

MultiForm wedge(const MultiForm& a, const MultiForm& b) {
  check_context(a, b, "wedge");
  if (a.dim_ != b.dim_ && a.dim_ != 1 && b.dim_ != 1) throw DimensionError("wedge: dimension mismatch");
  MultiForm out(a.ctx_, std::max(a.dim_, b.dim_));
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      if (ma & mb) continue;
      const MatrixJet prod = ca * cb;
      out.add(ma | mb, wedge_sign(ma, mb) == 1 ? prod : (-1.0) * prod);
    }
  return out;
}

MultiForm supercommutator(const MultiForm& a, const MultiForm& b) {
  check_context(a, b, "supercommutator");
  MultiForm out(a.context(), std::max(a.dim(), b.dim()));
  for (const auto& [ma, ca] : a.terms()) {
    const MultiForm ta = MultiForm::term(a.context(), ma, ca);
    for (const auto& [mb, cb] : b.terms()) {
      const MultiForm tb = MultiForm::term(b.context(), mb, cb);
      const bool both_odd = std::popcount(ma) % 2 == 1 && std::popcount(mb) % 2 == 1;
      out += wedge(ta, tb);
      if (both_odd)
        out += wedge(tb, ta);
      else
        out -= wedge(tb, ta);
    }
  }
  return out;
}

MultiForm exterior_derivative(const MultiForm& a, std::uint32_t which) {
  MultiForm out(a.context(), a.dim());
  const std::size_t g_count = a.context()->generators();
  for (const auto& [mask, c] : a.terms())
    for (std::size_t g = 0; g < g_count; ++g) {
      const std::uint32_t bit = 1u << g;
      if (!(which & bit) || (mask & bit)) continue;
      const MatrixJet dc = c.derivative(g);
      out.add(mask | bit, wedge_sign(bit, mask) == 1 ? dc : (-1.0) * dc);
    }
  return out;
}

MultiForm d_holomorphic(const MultiForm& a) { return exterior_derivative(a, a.context()->holomorphic_mask()); }
MultiForm d_antiholomorphic(const MultiForm& a) {
  return exterior_derivative(a, a.context()->antiholomorphic_mask());
}
MultiForm d_parameter(const MultiForm& a) { return exterior_derivative(a, a.context()->parameter_mask()); }
MultiForm d_x(const MultiForm& a) {
  const auto& c = *a.context();
  return exterior_derivative(a, c.holomorphic_mask() | c.antiholomorphic_mask());
}
MultiForm d_total(const MultiForm& a) {
  const auto& c = *a.context();
  return exterior_derivative(a, c.holomorphic_mask() | c.antiholomorphic_mask() | c.parameter_mask());
}

MultiForm trace(const MultiForm& a) {
  MultiForm out(a.context(), 1);
  for (const auto& [mask, c] : a.terms()) out.add(mask, c.trace());
  return out;
}

namespace {

// Conjugated generator mask and the sign of sorting the image back into
// ascending order.
std::pair<std::uint32_t, int> conjugate_mask(const FormContext& ctx, std::uint32_t mask) {
  std::vector<std::size_t> image;
  for (std::size_t g = 0; g < ctx.generators(); ++g)
    if (mask & (1u << g)) image.push_back(ctx.conjugation()[g]);
  int inversions = 0;
  std::uint32_t out = 0;
  for (std::size_t i = 0; i < image.size(); ++i) {
    out |= 1u << image[i];
    for (std::size_t j = i + 1; j < image.size(); ++j) inversions += image[i] > image[j];
  }
  return {out, inversions % 2 == 0 ? 1 : -1};
}

MultiForm conjugate_impl(const MultiForm& a, bool transpose) {
  MultiForm out(a.context(), a.dim());
  const auto& ctx = *a.context();
  for (const auto& [mask, c] : a.terms()) {
    const auto [image, sign] = conjugate_mask(ctx, mask);
    const MatrixJet cc = transpose ? c.adjoint(ctx.conjugation()) : c.conjugate(ctx.conjugation());
    out.add(image, sign == 1 ? cc : (-1.0) * cc);
  }
  return out;
}

}  // namespace

MultiForm conjugate(const MultiForm& a) { return conjugate_impl(a, false); }
MultiForm adjoint(const MultiForm& a) { return conjugate_impl(a, true); }

}  // namespace chernreg
