#include "chernreg/transgression.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace chernreg {

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

void GroupTuple::validate() const {
  if (r < 1) throw std::invalid_argument("tuple: r must be positive");
  if (elements.empty()) throw std::invalid_argument("tuple: no group elements");
  if (!base_metric.square() || base_metric.empty()) throw DimensionError("tuple: base metric must be square");
  if (!base_metric.is_hermitian(1e-12)) throw std::invalid_argument("tuple: base metric is not hermitian");
  if (epsilon < 0.0) throw std::invalid_argument("tuple: epsilon must be nonnegative");
  const std::size_t n = base_metric.rows();
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const auto& g = elements[i];
    if (!g.square() || g.rows() != n) throw DimensionError("tuple: g_" + std::to_string(i) + " has wrong shape");
    if (!g.all_finite()) throw std::invalid_argument("tuple: g_" + std::to_string(i) + " is not finite");
    const double scale = std::pow(std::max(g.max_abs(), 1e-300), static_cast<double>(n));
    if (std::abs(det(g)) <= 1e-12 * scale)
      throw std::invalid_argument("tuple: g_" + std::to_string(i) + " is not invertible");
  }
}

GroupTuple GroupTuple::without(std::size_t k) const {
  GroupTuple out = *this;
  out.elements.erase(out.elements.begin() + static_cast<std::ptrdiff_t>(k));
  return out;
}

MetricPath::MetricPath(const GroupTuple& tuple) {
  tuple.validate();
  CMatrix h = tuple.base_metric;
  if (tuple.epsilon > 0.0) h += tuple.epsilon * CMatrix::identity(h.rows());
  for (const auto& g : tuple.elements) vertex_metrics_.push_back(congruence(g, h));
}

CMatrix MetricPath::partial(std::size_t j) const {
  if (j == 0 || j >= vertex_metrics_.size()) throw std::out_of_range("MetricPath::partial: j out of range");
  return vertex_metrics_[j] - vertex_metrics_[0];
}

CMatrix metric_at(const MetricPath& path, const SimplexPoint& t) {
  if (t.t.size() != path.vertex_metrics_.size())
    throw DimensionError("metric_at: point dimension does not match the path");
  CMatrix h(path.rank(), path.rank());
  for (std::size_t i = 0; i < t.t.size(); ++i)
    if (t.t[i] != 0.0) h += t.t[i] * path.vertex_metrics_[i];
  return h;
}

cplx odd_trace_coeff(const MetricPath& path, const SimplexPoint& t, std::size_t m) {
  if (m + 1 != path.vertex_count()) throw DimensionError("odd_trace_coeff: path must have m + 1 vertices");
  const CMatrix h = metric_at(path, t);
  std::vector<CMatrix> factors;
  factors.reserve(m);
  for (std::size_t j = 1; j <= m; ++j) factors.push_back(solve(h, path.partial(j)));
  return antisymmetrized_trace(factors);
}

double chern_prefactor(int r) { return -factorial(r - 1) / (2.0 * factorial(2 * r - 1)); }

namespace {

QuadratureResult raw_trace_integral(const GroupTuple& tuple, const QuadratureConfig& config) {
  const std::size_t m = static_cast<std::size_t>(2 * tuple.r - 1);
  if (tuple.elements.size() != m + 1)
    throw std::invalid_argument("cochain: tuple must have exactly 2r elements");
  const MetricPath path(tuple);
  return integrate([&](const SimplexPoint& t) { return odd_trace_coeff(path, t, m); }, m, config);
}

}  // namespace

QuadratureResult chern_cochain(const GroupTuple& tuple, const QuadratureConfig& config) {
  QuadratureResult res = raw_trace_integral(tuple, config);
  const double c = chern_prefactor(tuple.r);
  res.value *= c;
  res.error_estimate *= std::abs(c);
  return res;
}

QuadratureResult borel_cochain(const GroupTuple& tuple, const QuadratureConfig& config) {
  GroupTuple unit = tuple;
  unit.base_metric = CMatrix::identity(tuple.rank());
  unit.epsilon = 0.0;
  return raw_trace_integral(unit, config);
}

CocycleDefect cocycle_defect(const GroupTuple& tuple, const QuadratureConfig& config) {
  if (tuple.elements.size() != static_cast<std::size_t>(2 * tuple.r + 1))
    throw std::invalid_argument("cocycle_defect: tuple must have exactly 2r + 1 elements");
  CocycleDefect out;
  for (std::size_t k = 0; k < tuple.elements.size(); ++k) {
    QuadratureResult face = chern_cochain(tuple.without(k), config);
    out.defect += (k % 2 == 0 ? 1.0 : -1.0) * face.value;
    out.error_sum += face.error_estimate;
    out.converged = out.converged && face.converged;
    out.faces.push_back(face);
  }
  return out;
}

cplx extrapolate_to_zero(const std::vector<double>& x, const std::vector<cplx>& y) {
  if (x.size() != y.size() || x.empty()) throw std::invalid_argument("extrapolate_to_zero: bad samples");
  std::vector<cplx> p = y;
  const std::size_t n = x.size();
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t i = 0; i + level < n; ++i)
      p[i] = (x[i + level] * p[i] - x[i] * p[i + 1]) / (x[i + level] - x[i]);
  return p[0];
}

}  // namespace chernreg
