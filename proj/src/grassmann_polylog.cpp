#include "chernreg/grassmann_polylog.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace chernreg {

namespace {

double subset_product(const SimplexPoint& t, const IndexSubset& s) {
  double p = 1.0;
  for (std::size_t i : s.members) p *= t.t[i];
  return p;
}

// dt_a in the free basis dt_1..dt_m: dt_0 = -sum_l dt_l.
double free_component(std::size_t a, std::size_t l) {
  if (a == 0) return -1.0;
  return a == l + 1 ? 1.0 : 0.0;
}

// Real determinant, small sizes only.
double real_det(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  double d = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < n; ++i)
      if (std::abs(a[i][col]) > std::abs(a[piv][col])) piv = i;
    if (a[piv][col] == 0.0) return 0.0;
    if (piv != col) {
      std::swap(a[piv], a[col]);
      d = -d;
    }
    d *= a[col][col];
    for (std::size_t i = col + 1; i < n; ++i) {
      const double f = a[i][col] / a[col][col];
      for (std::size_t j = col; j < n; ++j) a[i][j] -= f * a[col][j];
    }
  }
  return d;
}

// Coefficient of dt_1 ^ ... ^ dt_m in dt_{i_1} ^ ... ^ dt_{i_m}.
double wedge_coefficient(const std::vector<std::size_t>& idx) {
  const std::size_t m = idx.size();
  std::vector<std::vector<double>> w(m, std::vector<double>(m));
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t l = 0; l < m; ++l) w[j][l] = free_component(idx[j], l);
  return real_det(std::move(w));
}

bool next_index_tuple(std::vector<std::size_t>& idx, std::size_t base) {
  for (std::size_t k = idx.size(); k-- > 0;) {
    if (++idx[k] < base) return true;
    idx[k] = 0;
  }
  return false;
}

}  // namespace

void VectorTuple::validate() const {
  if (r < 1) throw std::invalid_argument("vector tuple: r must be positive");
  if (vectors.size() != static_cast<std::size_t>(2 * r))
    throw std::invalid_argument("vector tuple: expected 2r = " + std::to_string(2 * r) + " vectors");
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != static_cast<std::size_t>(r))
      throw DimensionError("vector tuple: v_" + std::to_string(i) + " must lie in C^r");
    for (const auto& x : vectors[i])
      if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
        throw std::invalid_argument("vector tuple: v_" + std::to_string(i) + " is not finite");
    if (norm(vectors[i]) == 0.0) throw std::invalid_argument("vector tuple: v_" + std::to_string(i) + " is zero");
  }
}

bool VectorTuple::generic() const {
  for (const auto& s : subsets(vectors.size(), static_cast<std::size_t>(r))) {
    double scale = 1.0;
    for (std::size_t i : s.members) scale *= norm(vectors[i]);
    if (std::abs(subset_det(vectors, s)) <= 1e-10 * scale) return false;
  }
  return true;
}

GrassmannMinors::GrassmannMinors(const VectorTuple& tuple) : r_(tuple.r) {
  tuple.validate();
  const std::size_t n = tuple.vectors.size();
  full_ = subsets(n, static_cast<std::size_t>(r_));
  for (const auto& s : full_) full_abs2_.push_back(std::norm(subset_det(tuple.vectors, s)));
  reduced_ = subsets(n, static_cast<std::size_t>(r_ - 1));
  for (const auto& s : reduced_) {
    CVector row(n);
    for (std::size_t a = 0; a < n; ++a) row[a] = minor_det(tuple.vectors, s, a);
    reduced_minors_.push_back(std::move(row));
  }
}

double GrassmannMinors::denominator(const SimplexPoint& t) const {
  double d = 0.0;
  for (std::size_t k = 0; k < full_.size(); ++k) d += subset_product(t, full_[k]) * full_abs2_[k];
  return d;
}

CMatrix GrassmannMinors::pairing(const SimplexPoint& t) const {
  const std::size_t n = static_cast<std::size_t>(2 * r_);
  if (t.t.size() != n) throw DimensionError("pairing: point must lie on Delta^(2r-1)");
  CMatrix p(n, n);
  for (std::size_t k = 0; k < reduced_.size(); ++k) {
    const double tj = subset_product(t, reduced_[k]);
    if (tj == 0.0) continue;
    const CVector& d = reduced_minors_[k];
    for (std::size_t a = 0; a < n; ++a) {
      const cplx ca = tj * std::conj(d[a]);
      for (std::size_t b = 0; b < n; ++b) p(a, b) += ca * d[b];
    }
  }
  return p;
}

cplx GrassmannMinors::numerator_coeff(const SimplexPoint& t) const {
  const std::size_t n = static_cast<std::size_t>(2 * r_);
  const std::size_t m = n - 1;
  const CMatrix p = pairing(t);
  // Q_l = D_l P with D_l = diag of the dt_l components of dt_0..dt_{2r-1}.
  std::vector<CMatrix> q;
  q.reserve(m);
  for (std::size_t l = 0; l < m; ++l) {
    CMatrix ql(n, n);
    for (std::size_t a = 0; a < n; ++a) {
      const double c = free_component(a, l);
      if (c == 0.0) continue;
      for (std::size_t b = 0; b < n; ++b) ql(a, b) = c * p(a, b);
    }
    q.push_back(std::move(ql));
  }
  return antisymmetrized_trace(q);
}

double denominator(const VectorTuple& tuple, const SimplexPoint& t) { return GrassmannMinors(tuple).denominator(t); }

cplx numerator_coeff(const VectorTuple& tuple, const SimplexPoint& t) {
  return GrassmannMinors(tuple).numerator_coeff(t);
}

cplx numerator_coeff_reference(const VectorTuple& tuple, const SimplexPoint& t) {
  tuple.validate();
  const std::size_t n = tuple.vectors.size();
  const std::size_t m = n - 1;
  if (t.t.size() != n) throw DimensionError("numerator_coeff_reference: point must lie on Delta^(2r-1)");
  const auto reduced = subsets(n, static_cast<std::size_t>(tuple.r - 1));
  cplx total = 0.0;
  std::vector<std::size_t> idx(m, 0);

  if (tuple.r == 2) {
    std::vector<std::size_t> sub(m, 0);
    do {
      const double w = wedge_coefficient(idx);
      if (w == 0.0) continue;
      std::fill(sub.begin(), sub.end(), 0);
      do {
        cplx term = w;
        for (std::size_t j = 0; j < m; ++j) {
          const IndexSubset& s = reduced[sub[j]];
          const std::size_t next = idx[(j + 1) % m];
          term *= subset_product(t, s) * std::conj(minor_det(tuple.vectors, s, idx[j])) *
                  minor_det(tuple.vectors, s, next);
        }
        total += term;
      } while (next_index_tuple(sub, reduced.size()));
    } while (next_index_tuple(idx, n));
    return total;
  }

  std::vector<CVector> minors;
  for (const auto& s : reduced) {
    CVector row(n);
    for (std::size_t a = 0; a < n; ++a) row[a] = minor_det(tuple.vectors, s, a);
    minors.push_back(std::move(row));
  }
  auto factor = [&](std::size_t a, std::size_t b) {
    cplx s = 0.0;
    for (std::size_t k = 0; k < reduced.size(); ++k)
      s += subset_product(t, reduced[k]) * std::conj(minors[k][a]) * minors[k][b];
    return s;
  };
  do {
    const double w = wedge_coefficient(idx);
    if (w == 0.0) continue;
    cplx term = w;
    for (std::size_t j = 0; j < m; ++j) term *= factor(idx[j], idx[(j + 1) % m]);
    total += term;
  } while (next_index_tuple(idx, n));
  return total;
}

QuadratureResult grassmann_cochain(const VectorTuple& tuple, const QuadratureConfig& config) {
  tuple.validate();
  if (!tuple.generic()) throw DegenerateConfigurationError("grassmann_cochain: tuple is not generic");
  const GrassmannMinors minors(tuple);
  const int power = 2 * tuple.r - 1;
  auto integrand = [&](const SimplexPoint& t) {
    const double d = minors.denominator(t);
    return minors.numerator_coeff(t) / std::pow(d, power);
  };
  QuadratureResult res = integrate_vertex_singular(integrand, static_cast<std::size_t>(power), config);
  const double c = chern_prefactor(tuple.r);
  res.value *= c;
  res.error_estimate *= std::abs(c);
  return res;
}

double f_invariant(const Quadruple& v) {
  const cplx p = det2(v[0], v[1]) * det2(v[2], v[3]) * std::conj(det2(v[0], v[3])) * std::conj(det2(v[1], v[2]));
  return p.imag();
}

QuadratureResult dilog_presentation(const Quadruple& v, const QuadratureConfig& config, PairSum pairs) {
  const double f = f_invariant(v);
  if (f == 0.0) {
    QuadratureResult zero;
    zero.converged = true;
    return zero;
  }
  std::array<std::array<double, 4>, 4> d2{};
  double scale = 1.0;
  for (const auto& x : v) scale *= norm(x);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) {
      const cplx dij = det2(v[i], v[j]);
      if (std::abs(dij) <= 1e-14 * norm(v[i]) * norm(v[j]))
        throw DegenerateConfigurationError("dilog_presentation: v_" + std::to_string(i) + " and v_" +
                                           std::to_string(j) + " represent the same point");
      d2[i][j] = std::norm(dij);
    }
  const double multiplicity = pairs == PairSum::kOrdered ? 2.0 : 1.0;
  auto integrand = [&](const SimplexPoint& p) -> cplx {
    const auto& t = p.t;
    double s = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i + 1; j < 4; ++j) s += t[i] * t[j] * d2[i][j];
    s *= multiplicity;
    return 1.0 / (s * s);
  };
  QuadratureResult res = integrate_vertex_singular(integrand, 3, config);
  const cplx c{0.0, 12.0 * f};
  res.value *= c;
  res.error_estimate *= std::abs(c);
  return res;
}

std::vector<double> default_epsilon_ladder() { return {1e-2, 1e-3, 1e-4, 1e-5}; }

EquivalenceReport integrand_equivalence(const std::vector<CMatrix>& g, const CVector& v, const SimplexPoint& t,
                                        const std::vector<double>& eps_ladder) {
  if (g.empty()) throw std::invalid_argument("integrand_equivalence: no group elements");
  const std::size_t rank = v.size();
  if (g.size() != 2 * rank) throw std::invalid_argument("integrand_equivalence: need 2r elements for v in C^r");
  if (eps_ladder.empty()) throw std::invalid_argument("integrand_equivalence: empty epsilon ladder");
  const int r = static_cast<int>(rank);
  VectorTuple tuple{r, {}};
  for (const auto& gi : g) tuple.vectors.push_back(gi * v);
  const GrassmannMinors minors(tuple);
  const std::size_t m = static_cast<std::size_t>(2 * r - 1);

  EquivalenceReport report;
  const double den = minors.denominator(t);
  const cplx num = minors.numerator_coeff(t);
  report.target = (num == cplx{}) ? cplx{} : num / std::pow(den, static_cast<int>(m));
  const double ref = std::abs(report.target);
  auto rel = [&](cplx x) { return ref > 0.0 ? std::abs(x - report.target) / ref : std::abs(x - report.target); };

  std::vector<cplx> values;
  for (double eps : eps_ladder) {
    GroupTuple gt{r, g, CMatrix::outer(v, v), eps};
    const MetricPath path(gt);
    const cplx val = odd_trace_coeff(path, t, m);
    values.push_back(val);
    report.rows.push_back({eps, val, rel(val)});
  }
  report.extrapolated = extrapolate_to_zero(eps_ladder, values);
  report.extrapolated_rel_diff = rel(report.extrapolated);
  return report;
}

std::vector<CMatrix> completing_matrices(const VectorTuple& tuple) {
  tuple.validate();
  const std::size_t r = static_cast<std::size_t>(tuple.r);
  std::vector<CMatrix> out;
  for (const auto& vi : tuple.vectors) {
    std::size_t big = 0;
    for (std::size_t k = 1; k < r; ++k)
      if (std::abs(vi[k]) > std::abs(vi[big])) big = k;
    CMatrix g(r, r);
    for (std::size_t k = 0; k < r; ++k) g(k, 0) = vi[k];
    std::size_t col = 1;
    for (std::size_t k = 0; k < r; ++k) {
      if (k == big) continue;
      g(k, col++) = 1.0;
    }
    out.push_back(std::move(g));
  }
  return out;
}

EquivalenceReport integrand_equivalence(const VectorTuple& tuple, const SimplexPoint& t,
                                        const std::vector<double>& eps_ladder) {
  CVector e1(static_cast<std::size_t>(tuple.r), 0.0);
  e1[0] = 1.0;
  return integrand_equivalence(completing_matrices(tuple), e1, t, eps_ladder);
}

}  // namespace chernreg
