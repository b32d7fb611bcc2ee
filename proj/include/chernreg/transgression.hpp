#pragma once

// Group cochains built from the convex path of metrics
//   h_t = sum_i t_i g_i (h + eps I) g_i^H
// over the standard simplex, integrated against the odd trace form
// Tr((h_t^{-1} d h_t)^(2r-1)).

#include <cstddef>
#include <vector>

#include "chernreg/complex_linalg.hpp"
#include "chernreg/simplex_quad.hpp"

namespace chernreg {

struct GroupTuple {
  int r = 1;
  std::vector<CMatrix> elements;  // g_0, g_1, ...
  CMatrix base_metric;            // h, hermitian positive semidefinite
  double epsilon = 0.0;           // h + eps I is used

  std::size_t rank() const { return base_metric.rows(); }
  /// Throws DimensionError / std::invalid_argument on malformed tuples.
  void validate() const;
  GroupTuple without(std::size_t k) const;
};

/// t -> h_t with constant vertex metrics A_i = g_i (h + eps I) g_i^H.
/// In the free coordinates t_1..t_n, d h_t / d t_j = A_j - A_0.
class MetricPath {
 public:
  explicit MetricPath(const GroupTuple& tuple);

  std::size_t vertex_count() const noexcept { return vertex_metrics_.size(); }
  std::size_t rank() const noexcept { return vertex_metrics_.front().rows(); }
  const CMatrix& vertex_metric(std::size_t i) const { return vertex_metrics_.at(i); }
  CMatrix partial(std::size_t j) const;  // j = 1..n

 private:
  std::vector<CMatrix> vertex_metrics_;
  friend CMatrix metric_at(const MetricPath& path, const SimplexPoint& t);
};

CMatrix metric_at(const MetricPath& path, const SimplexPoint& t);

/// Coefficient of dt_1 ^ ... ^ dt_m in Tr((h_t^{-1} d h_t)^m):
///   sum_sigma sgn(sigma) Tr(M_sigma(1) ... M_sigma(m)),  M_j = h_t^{-1}(A_j - A_0).
/// The path must have m + 1 vertices.
cplx odd_trace_coeff(const MetricPath& path, const SimplexPoint& t, std::size_t m);

/// -(r-1)! / (2 (2r-1)!)
double chern_prefactor(int r);

/// The Chern character cochain on a homogeneous 2r-tuple.
QuadratureResult chern_cochain(const GroupTuple& tuple, const QuadratureConfig& config);

/// Raw integral of the odd trace form with h = I; no normalizing constant.
QuadratureResult borel_cochain(const GroupTuple& tuple, const QuadratureConfig& config);

struct CocycleDefect {
  cplx defect{};
  double error_sum = 0.0;  // summed quadrature error estimates of the faces
  bool converged = true;
  std::vector<QuadratureResult> faces;
};

/// sum_k (-1)^k ch(g_0, ..., ^g_k, ..., g_2r) on a (2r+1)-tuple.
CocycleDefect cocycle_defect(const GroupTuple& tuple, const QuadratureConfig& config);

/// Polynomial (Neville) extrapolation of samples (x_i, y_i) to x = 0.
cplx extrapolate_to_zero(const std::vector<double>& x, const std::vector<cplx>& y);

}  // namespace chernreg
