#pragma once

// Chern connection, number operator and the transgressed forms alpha^(n) of
// a hermitian metric h(z, zbar, tau) on X x T, evaluated as jets at one point,
// plus the residual of the transgression identities and a Deligne complex
// membership check.

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "chernreg/multiform.hpp"

namespace chernreg {

enum class MetricFamily {
  kExpPolynomial,  // h = exp(H), H the hermitian part of a matrix polynomial
  kGram,           // h = shift * I + A A^dagger, A a matrix polynomial
  kMetricPath,     // h = sum_i t_i g_i H g_i^H, t_0 = 1 - sum tau, t_b = tau_b, H = exp(herm P(z, zbar))
};

std::string to_string(MetricFamily f);
MetricFamily metric_family_from_string(const std::string& s);

/// Monomial over the polarized variables (z_1..z_m, zbar_1..zbar_m, tau_1..tau_k).
struct PolyTerm {
  std::vector<int> exponent;
  CMatrix coefficient;
};

struct TestScene {
  int m = 1;
  int k = 1;
  std::size_t N = 2;
  int r = 2;
  MetricFamily family = MetricFamily::kExpPolynomial;
  std::vector<PolyTerm> poly;
  double shift = 1.0;             // kGram
  std::vector<CMatrix> elements;  // kMetricPath: g_0..g_k
  CVector z;                      // point in X (size m)
  std::vector<double> tau;        // point in T (size k)

  std::size_t variables() const { return static_cast<std::size_t>(2 * m + k); }
  /// Throws std::invalid_argument / DimensionError on malformed scenes.
  void validate() const;
};

/// Random scene with polynomial data of the given degree and modest size, so
/// h stays well conditioned near the chosen point. At r = 1 the identity
/// involves third derivatives of log h; use degree 3 there.
TestScene random_scene(std::mt19937_64& rng, int m, int k, std::size_t N, int r, MetricFamily family,
                       int degree = 2);

enum class JetSource { kExact, kFiniteDifference };

/// Exact jet of h at the scene point (forward mode) in the context's space.
MatrixJet metric_jet(const TestScene& scene, const FormContextPtr& ctx);
/// Jet of order 3 from 4th-order central differences of h on the real slice
/// (step `step` in x = Re z, y = Im z and tau), converted to z, zbar.
MatrixJet finite_difference_metric_jet(const TestScene& scene, const FormContextPtr& ctx, double step = 1e-3);
struct JetAgreement {
  std::vector<double> max_diff;  // per monomial degree, max |exact - fd|
  double scale = 1.0;            // max(1, max |h(point)|)
  bool agree = false;
};
/// Exact against finite-difference jets (order 3). Degrees <= 2 must agree to
/// 1e-6 * scale; degree 3 to 1e-5 * scale (stencil round-off floor at step 1e-3).
JetAgreement jet_agreement(const TestScene& scene, double step = 1e-3);
/// h at a point of the real slice.
CMatrix metric_value(const TestScene& scene, const CVector& z, const std::vector<double>& tau);

struct SceneForms {
  FormContextPtr ctx;
  MatrixJet h;
  MatrixJet h_inv;
  MultiForm theta;           // h^{-1} d'h
  MultiForm curvature;       // d''theta
  MultiForm number;          // N = h^{-1} d_T h
  MultiForm half_bracket;    // [N, N] / 2
  MultiForm dbar_bracket;    // [nabla'', N] = d''N
  MultiForm dprime_bracket;  // [nabla', N] = d'N + theta N + N theta
};

/// Order 4: the n = 1 identity applies d'd'' to forms built from second derivatives of h.
SceneForms scene_forms(const TestScene& scene, JetSource source = JetSource::kExact, int jet_order = 4);

MultiForm curvature(const TestScene& scene);
MultiForm number_operator(const TestScene& scene);

enum class ChNormalization {
  kPrinted,       // (-1)^r (r!)^{-1} (r!)^{-1}
  kSingleFactor,  // (-1)^r (r!)^{-1}
};

/// Normalizing constant in front of the permutation sum.
double ch_constant(int r, ChNormalization norm);

/// c_r * sum over sigma of koszul(sigma) Tr(A_sigma1 ^ ... ^ A_sigmar), c_r per
/// `norm`. Every argument must have homogeneous parity.
MultiForm ch_polynomial(std::span<const MultiForm> args, int r, ChNormalization norm = ChNormalization::kPrinted);

/// phi(curvature, ..., curvature): the Chern character form ch_r.
MultiForm chern_form(const SceneForms& forms, int r, ChNormalization norm = ChNormalization::kPrinted);

/// Coefficients of the (k, p, q) terms in alpha^(n) and of the right side of
/// the n >= 2 identity.
enum class TransgressionCoefficients {
  kPrinted,  // (-1)^(k+q) (k+p)!(k+q)!(k+p+q+1)!/(k!p!q!), right side with factor 1
  // Terms with at least one curvature argument times r, right side times r!.
  // This is the set for which both identities hold on generic scenes.
  kCorrected,
};

struct TransgressionOptions {
  ChNormalization norm = ChNormalization::kPrinted;
  TransgressionCoefficients coefficients = TransgressionCoefficients::kPrinted;
};

/// The n-transgressed form, 1 <= n <= 2r - 1.
MultiForm alpha_n(const SceneForms& forms, int r, int n, const TransgressionOptions& opts = {});

struct ResidualReport {
  int r = 0;
  int n = 0;
  double residual = 0.0;   // max |LHS - RHS| over coefficients at the point
  double dx_norm = 0.0;    // n = 1: |d'd'' alpha^(1)|, else |d_X alpha^(n)|
  double dt_norm = 0.0;    // n = 1: |d_T alpha|, else |n d_T alpha^(n-1)|
  double rhs_norm = 0.0;
  /// max of the three norms; residual / scale is the relative residual
  double scale() const;
};

ResidualReport theorem1_residual(const SceneForms& forms, int r, int n, const TransgressionOptions& opts = {});
ResidualReport theorem1_residual(const TestScene& scene, int n, JetSource source = JetSource::kExact,
                                 const TransgressionOptions& opts = {});

/// Coefficient of dtau_1 ^ ... ^ dtau_k moved to the right, as an X-form.
/// Terms with fewer parameter differentials are dropped.
MultiForm parameter_density(const MultiForm& form);

struct DeligneReport {
  int n = 0;
  int r = 0;
  double degree_violation = 0.0;    // terms of the wrong total X-degree
  double bidegree_violation = 0.0;  // terms outside the allowed (p, q) pieces
  double reality_violation = 0.0;   // |conj(x) - (-1)^e x|, e the twist exponent
  bool member = false;
  std::string differential_case;  // "d", "-2d'd''" or "-pi(d)"
  MultiForm differential;         // d_D x
};

/// Membership of a scalar X-form in D^n(X, r) and its Deligne differential.
DeligneReport deligne_membership(const MultiForm& form, int n, int r, double tol = 1e-10);

}  // namespace chernreg
