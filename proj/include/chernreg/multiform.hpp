#pragma once

// Differential forms on X x T with matrix-jet coefficients. Generators are
// ordered dz_1..dz_m, dzbar_1..dzbar_m, dtau_1..dtau_k; generator g is also
// jet variable g (z, zbar and tau are independent polarized variables).
// A term is a bitmask of generators (ascending order) and a coefficient.

#include <cstdint>
#include <map>
#include <memory>

#include "chernreg/jet.hpp"

namespace chernreg {

struct TriDegree {
  int p = 0;  // dz
  int q = 0;  // dzbar
  int s = 0;  // dtau
  int total() const { return p + q + s; }
};

class FormContext {
 public:
  FormContext(int m, int k, int jet_order);

  int m() const noexcept { return m_; }
  int k() const noexcept { return k_; }
  std::size_t generators() const noexcept { return static_cast<std::size_t>(2 * m_ + k_); }
  const JetSpacePtr& space() const noexcept { return space_; }

  std::size_t dz(int i) const { return static_cast<std::size_t>(i); }
  std::size_t dzbar(int i) const { return static_cast<std::size_t>(m_ + i); }
  std::size_t dtau(int b) const { return static_cast<std::size_t>(2 * m_ + b); }
  std::uint32_t holomorphic_mask() const;
  std::uint32_t antiholomorphic_mask() const;
  std::uint32_t parameter_mask() const;
  TriDegree tri_degree(std::uint32_t mask) const;
  /// z_i <-> zbar_i, tau_b fixed; shared by jet variables and generators.
  const std::vector<std::size_t>& conjugation() const noexcept { return conj_; }

 private:
  int m_, k_;
  JetSpacePtr space_;
  std::vector<std::size_t> conj_;
};

using FormContextPtr = std::shared_ptr<const FormContext>;

class MultiForm {
 public:
  MultiForm() = default;
  MultiForm(FormContextPtr ctx, std::size_t dim);

  /// coefficient * (generators in mask)
  static MultiForm term(FormContextPtr ctx, std::uint32_t mask, const MatrixJet& coefficient);

  const FormContextPtr& context() const noexcept { return ctx_; }
  std::size_t dim() const noexcept { return dim_; }
  const std::map<std::uint32_t, MatrixJet>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  void add(std::uint32_t mask, const MatrixJet& coefficient);
  MultiForm& operator+=(const MultiForm& o);
  MultiForm& operator-=(const MultiForm& o);
  MultiForm& operator*=(cplx s);
  friend MultiForm operator+(MultiForm a, const MultiForm& b) { return a += b; }
  friend MultiForm operator-(MultiForm a, const MultiForm& b) { return a -= b; }
  friend MultiForm operator*(cplx s, MultiForm a) { return a *= s; }

  /// Terms whose generator mask satisfies the predicate.
  template <class Pred>
  MultiForm filter(Pred keep) const {
    MultiForm out(ctx_, dim_);
    for (const auto& [mask, c] : terms_)
      if (keep(mask)) out.terms_.emplace(mask, c);
    return out;
  }
  /// Terms of the given tri-degree.
  MultiForm component(TriDegree d) const;
  bool homogeneous_parity(int& parity) const;

  /// Largest |entry| of the point values (constant jet coefficients).
  double max_abs() const;

 private:
  FormContextPtr ctx_;
  std::size_t dim_ = 0;
  std::map<std::uint32_t, MatrixJet> terms_;

  friend MultiForm wedge(const MultiForm&, const MultiForm&);
};

/// Koszul sign of concatenating two disjoint ascending generator lists.
int wedge_sign(std::uint32_t a, std::uint32_t b);

MultiForm wedge(const MultiForm& a, const MultiForm& b);
/// [a, b] = a b - (-1)^{|a||b|} b a, term by term.
MultiForm supercommutator(const MultiForm& a, const MultiForm& b);
/// sum over generators g in `which` of dg ^ d/dx_g.
MultiForm exterior_derivative(const MultiForm& a, std::uint32_t which);
MultiForm d_holomorphic(const MultiForm& a);      // d'
MultiForm d_antiholomorphic(const MultiForm& a);  // d''
MultiForm d_parameter(const MultiForm& a);        // d_T
MultiForm d_x(const MultiForm& a);                // d' + d''
MultiForm d_total(const MultiForm& a);            // d_X + d_T
MultiForm trace(const MultiForm& a);
/// Complex conjugate of a scalar or matrix form: dz <-> dzbar with
/// reordering signs and entrywise conjugate coefficients.
MultiForm conjugate(const MultiForm& a);
/// Adjoint: conjugate and transpose the coefficient; the form part is
/// conjugated in place without reversing products.
MultiForm adjoint(const MultiForm& a);

}  // namespace chernreg
