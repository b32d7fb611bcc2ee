#pragma once

// Deterministic adaptive cubature over the standard n-simplex
//   Delta^n = { (t_0, ..., t_n) : t_i >= 0, sum t_i = 1 },
// integrated against dt_1 ... dt_n on the free coordinates (t_0 eliminated).
//
// Leaves are refined worst-first using an embedded pair of Grundmann-Moller
// rules (degree d and d-2 share their nodes) and split by Freudenthal
// subdivision into 2^n children. Leaves touching a vertex of the original
// simplex get ten extra levels of depth, since the integrands we care about
// blow up only there.

#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace chernreg {

using cplx = std::complex<double>;

/// Barycentric point; t.size() == n + 1.
struct SimplexPoint {
  std::vector<double> t;

  std::size_t dimension() const noexcept { return t.empty() ? 0 : t.size() - 1; }
  bool valid() const;
  static SimplexPoint barycenter(std::size_t n);
  static SimplexPoint vertex(std::size_t n, std::size_t k);
};

struct SubSimplex {
  std::vector<SimplexPoint> vertices;  // n + 1 of them
  std::size_t depth = 0;

  std::size_t dimension() const noexcept { return vertices.empty() ? 0 : vertices.size() - 1; }
  /// Lebesgue volume in the free coordinates t_1..t_n.
  double volume() const;
  static SubSimplex standard(std::size_t n);
};

struct QuadratureConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  std::size_t max_depth = 30;
  int rule_degree = 9;
  std::size_t max_evaluations = 20'000'000;
  /// Worker threads for integrand evaluation; never changes the result.
  unsigned threads = 1;

  void validate() const;
};

struct QuadratureResult {
  cplx value{};
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

struct QuadratureNode {
  SimplexPoint point;
  double weight = 0.0;
};

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using SimplexIntegrand = std::function<cplx(const SimplexPoint&)>;

/// Grundmann-Moller rule of odd degree <= 9 on the unit n-simplex, n <= 5.
/// Weights sum to 1/n!.
std::vector<QuadratureNode> base_rule(std::size_t n, int degree);

/// Freudenthal (Kuhn) subdivision into 2^n children of equal volume.
std::vector<SubSimplex> subdivide(const SubSimplex& s);

/// Adaptive integral of f over Delta^n. The integrand must be pure and
/// reentrant when config.threads > 1. A NaN from f raises QuadratureError
/// naming the offending point.
QuadratureResult integrate(const SimplexIntegrand& f, std::size_t n, const QuadratureConfig& config);

/// Same integral for integrands that blow up at the vertices like
/// dist^-(n-1) or milder. The corner children of one Kuhn split are taken in
/// radial coordinates around their vertex, where the singularity cancels
/// against the Jacobian; each piece is integrated adaptively.
QuadratureResult integrate_vertex_singular(const SimplexIntegrand& f, std::size_t n, const QuadratureConfig& config);

/// Threads requested through CHERNREG_THREADS, defaulting to 1.
unsigned threads_from_environment();

}  // namespace chernreg
