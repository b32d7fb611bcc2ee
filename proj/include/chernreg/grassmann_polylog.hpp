#pragma once

// Cochains of 2r vectors in C^r: the rank-one limit of the Chern character
// cochain written through minors det(v_J, v_a), the antisymmetric invariant
// f of four vectors in C^2, and the integral presentation of the
// Bloch-Wigner function.

#include <cstddef>
#include <vector>

#include "chernreg/bloch_wigner.hpp"
#include "chernreg/complex_linalg.hpp"
#include "chernreg/simplex_quad.hpp"
#include "chernreg/transgression.hpp"

namespace chernreg {

struct VectorTuple {
  int r = 2;
  std::vector<CVector> vectors;  // 2r nonzero vectors in C^r

  void validate() const;
  /// Every r-subset has |det(v_I)| > 1e-10 * prod |v_i| over I.
  bool generic() const;
};

/// Minor tables of a tuple, computed once and reused at every point t.
class GrassmannMinors {
 public:
  explicit GrassmannMinors(const VectorTuple& tuple);

  int r() const noexcept { return r_; }
  /// sum_{|I| = r} t_I |det v_I|^2
  double denominator(const SimplexPoint& t) const;
  /// P_ab = sum_{|J| = r-1} t_J conj(det(v_J, v_a)) det(v_J, v_b)
  CMatrix pairing(const SimplexPoint& t) const;
  /// Coefficient of dt_1 ^ ... ^ dt_{2r-1} in the numerator form.
  cplx numerator_coeff(const SimplexPoint& t) const;

 private:
  int r_;
  std::vector<IndexSubset> full_;          // r-subsets
  std::vector<double> full_abs2_;          // |det v_I|^2
  std::vector<IndexSubset> reduced_;       // (r-1)-subsets
  std::vector<CVector> reduced_minors_;    // det(v_J, v_a), a = 0..2r-1
};

double denominator(const VectorTuple& tuple, const SimplexPoint& t);
cplx numerator_coeff(const VectorTuple& tuple, const SimplexPoint& t);

/// Slow reference for numerator_coeff: expands every (I_j, i_j) term and the
/// wedge dt_{i_1} ^ ... ^ dt_{i_m} (dt_0 = -sum dt_l) directly. At r = 2 the
/// full (I, i) product is enumerated; at r >= 3 the sums over each I_j are
/// taken inside the product over j to keep the cost finite.
cplx numerator_coeff_reference(const VectorTuple& tuple, const SimplexPoint& t);

/// -(r-1)!/(2(2r-1)!) * integral of numerator_coeff / denominator^(2r-1).
QuadratureResult grassmann_cochain(const VectorTuple& tuple, const QuadratureConfig& config);

/// Im(det(v0,v1) det(v2,v3) conj(det(v0,v3)) conj(det(v1,v2))).
double f_invariant(const Quadruple& v);

/// How the pair sum in the presentation denominator runs.
enum class PairSum { kOrdered, kUnordered };

/// 12 i f(v) * integral over Delta^3 of dt / (sum_{i != j} t_i t_j |det(v_i, v_j)|^2)^2.
QuadratureResult dilog_presentation(const Quadruple& v, const QuadratureConfig& config,
                                    PairSum pairs = PairSum::kOrdered);

struct EquivalenceRow {
  double epsilon = 0.0;
  cplx regularized{};  // odd_trace_coeff with h = v v^H + eps I
  double rel_diff = 0.0;
};

struct EquivalenceReport {
  cplx target{};  // numerator_coeff / denominator^(2r-1)
  std::vector<EquivalenceRow> rows;
  cplx extrapolated{};
  double extrapolated_rel_diff = 0.0;
};

/// Compares the regularized trace integrand of the path built from g_i with
/// base metric v v^H + eps I against the minor formula for v_i = g_i v.
EquivalenceReport integrand_equivalence(const std::vector<CMatrix>& g, const CVector& v, const SimplexPoint& t,
                                        const std::vector<double>& eps_ladder);

/// Same, with v = e_1 and each g_i completing v_i to an invertible matrix.
EquivalenceReport integrand_equivalence(const VectorTuple& tuple, const SimplexPoint& t,
                                        const std::vector<double>& eps_ladder);

/// g_i with g_i e_1 = v_i: v_i in the first column, the remaining columns
/// standard basis vectors avoiding the largest entry of v_i.
std::vector<CMatrix> completing_matrices(const VectorTuple& tuple);

/// Default ladder 1e-2, 1e-3, 1e-4, 1e-5.
std::vector<double> default_epsilon_ladder();

}  // namespace chernreg
