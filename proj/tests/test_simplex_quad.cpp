#include <doctest.h>

#include <cmath>
#include <random>

#include "chernreg/simplex_quad.hpp"

using namespace chernreg;

namespace {

double factorial(int k) { return k <= 1 ? 1.0 : k * factorial(k - 1); }

// Dirichlet integral over Delta^n of prod t_i^a_i, free-coordinate measure.
double monomial_integral(const std::vector<int>& a) {
  const int n = static_cast<int>(a.size()) - 1;
  double num = 1.0;
  int total = 0;
  for (int e : a) {
    num *= factorial(e);
    total += e;
  }
  return num / factorial(n + total);
}

double eval_monomial(const SimplexPoint& p, const std::vector<int>& a) {
  double v = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) v *= std::pow(p.t[i], a[i]);
  return v;
}

QuadratureConfig tight() {
  QuadratureConfig c;
  c.rel_tol = 1e-13;
  c.abs_tol = 1e-15;
  return c;
}

}  // namespace

TEST_CASE("base_rule: weights, monomials, random polynomial") {
  for (std::size_t n = 1; n <= 5; ++n)
    for (int d : {3, 5, 7, 9}) {
      double s = 0.0;
      for (const auto& q : base_rule(n, d)) s += q.weight;
      CHECK(std::abs(s * factorial(static_cast<int>(n)) - 1.0) < 1e-13);
    }

  double v = 0.0;
  for (const auto& q : base_rule(2, 5)) v += q.weight * q.point.t[1] * q.point.t[1] * q.point.t[2];
  CHECK(std::abs(v - 1.0 / 60.0) < 1e-13);

  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> expo(0, 3);
  std::normal_distribution<double> coef(0.0, 1.0);
  std::vector<std::pair<double, std::vector<int>>> poly;
  while (poly.size() < 12) {
    std::vector<int> a(4);
    int total = 0;
    for (auto& e : a) total += (e = expo(rng));
    if (total <= 7) poly.push_back({coef(rng), a});
  }
  poly.push_back({1.0, {0, 7, 0, 0}});
  poly.push_back({-2.0, {2, 1, 3, 1}});
  double exact = 0.0;
  for (const auto& [c, a] : poly) exact += c * monomial_integral(a);
  double approx = 0.0;
  for (const auto& q : base_rule(3, 7)) {
    double fx = 0.0;
    for (const auto& [c, a] : poly) fx += c * eval_monomial(q.point, a);
    approx += q.weight * fx;
  }
  CHECK(std::abs(approx - exact) < 1e-12);

  CHECK_THROWS(base_rule(6, 5));
  CHECK_THROWS(base_rule(2, 4));
  CHECK_THROWS(base_rule(2, 11));
}

TEST_CASE("subdivide: child counts and volume preservation") {
  for (std::size_t n = 1; n <= 5; ++n) {
    const SubSimplex root = SubSimplex::standard(n);
    const auto kids = subdivide(root);
    CHECK(kids.size() == (std::size_t{1} << n));
    double total = 0.0;
    for (const auto& k : kids) {
      CHECK(k.depth == 1);
      CHECK(k.volume() > 0.0);
      total += k.volume();
    }
    CHECK(std::abs(total - root.volume()) < 1e-12 * root.volume());
    // grandchildren stay non-degenerate
    double total2 = 0.0;
    for (const auto& g : subdivide(kids.back())) total2 += g.volume();
    CHECK(std::abs(total2 - kids.back().volume()) < 1e-12 * kids.back().volume());
  }
  const auto tri = subdivide(SubSimplex::standard(2));
  for (const auto& k : tri) CHECK(std::abs(k.volume() - 0.125) < 1e-15);
}

TEST_CASE("integrate: volume, linear monomial, vertex singularity") {
  auto one = integrate([](const SimplexPoint&) { return cplx{1.0}; }, 3, tight());
  CHECK(one.converged);
  CHECK(std::abs(one.value - 1.0 / 6.0) < 1e-12);

  auto lin = integrate([](const SimplexPoint& p) { return cplx{p.t[1]}; }, 2, tight());
  CHECK(std::abs(lin.value - 1.0 / 6.0) < 1e-12);

  QuadratureConfig c;
  c.rel_tol = 1e-8;
  c.abs_tol = 1e-10;
  auto sing = integrate(
      [](const SimplexPoint& p) {
        const double s = p.t[1] + p.t[2] + p.t[3];
        return cplx{1.0 / (s * s)};
      },
      3, c);
  CHECK(sing.converged);
  CHECK(std::abs(sing.value - 0.5) < 1e-6);
  CHECK(sing.error_estimate <= std::max(c.abs_tol, c.rel_tol * std::abs(sing.value)));
}

TEST_CASE("integrate: linearity and permutation symmetry") {
  auto f = [](const SimplexPoint& p) { return cplx{std::exp(p.t[1]) / (1.0 + p.t[2]), p.t[0] * p.t[2]}; };
  auto g = [](const SimplexPoint& p) { return cplx{std::cos(3.0 * p.t[0]), std::sqrt(p.t[1] + 0.1)}; };
  const cplx alpha{0.7, -1.3}, beta{2.0, 0.5};
  QuadratureConfig c;
  c.rel_tol = 1e-10;
  const auto rf = integrate(f, 2, c);
  const auto rg = integrate(g, 2, c);
  const auto rfg = integrate([&](const SimplexPoint& p) { return alpha * f(p) + beta * g(p); }, 2, c);
  const double budget = std::abs(alpha) * rf.error_estimate + std::abs(beta) * rg.error_estimate + rfg.error_estimate;
  CHECK(std::abs(rfg.value - (alpha * rf.value + beta * rg.value)) <= budget + 1e-14);

  // An integrand symmetric under t_1 <-> t_3 gives the same result as its
  // permuted version.
  auto sym = [](const SimplexPoint& p) { return cplx{std::exp(p.t[1] * p.t[3]) * (1.0 + p.t[0])}; };
  auto perm = [&](const SimplexPoint& p) {
    SimplexPoint q = p;
    std::swap(q.t[1], q.t[3]);
    return sym(q);
  };
  const auto a = integrate(sym, 3, c);
  const auto b = integrate(perm, 3, c);
  CHECK(std::abs(a.value - b.value) < 1e-12 * std::abs(a.value));
}

TEST_CASE("integrate: refinement monotonicity and thread-independent determinism") {
  auto f = [](const SimplexPoint& p) { return cplx{1.0 / (0.05 + p.t[1] + p.t[2]), 0.0}; };
  QuadratureConfig c;
  c.rel_tol = 1e-6;
  const auto coarse = integrate(f, 2, c);
  c.rel_tol *= 0.5;
  const auto fine = integrate(f, 2, c);
  CHECK(fine.error_estimate <= coarse.error_estimate);

  QuadratureConfig serial;
  serial.rel_tol = 1e-9;
  QuadratureConfig parallel = serial;
  parallel.threads = 4;
  const auto s = integrate(f, 3, serial);
  const auto p = integrate(f, 3, parallel);
  CHECK(s.value == p.value);
  CHECK(s.error_estimate == p.error_estimate);
  CHECK(s.evaluations == p.evaluations);
}

TEST_CASE("integrate: NaN propagation and non-convergence") {
  CHECK_THROWS_AS(integrate([](const SimplexPoint&) { return cplx{std::nan(""), 0.0}; }, 2, QuadratureConfig{}),
                  QuadratureError);
  QuadratureConfig c;
  c.max_depth = 2;
  c.rel_tol = 1e-12;
  // Not integrable at the vertex e_0; the depth cap stops refinement.
  const auto r = integrate(
      [](const SimplexPoint& p) {
        const double s = p.t[1] + p.t[2];
        return cplx{1.0 / (s * s * s)};
      },
      2, c);
  CHECK_FALSE(r.converged);

  QuadratureConfig bad;
  bad.rel_tol = 0.0;
  CHECK_THROWS(integrate([](const SimplexPoint&) { return cplx{1.0}; }, 2, bad));
}

TEST_CASE("integrate_vertex_singular: smooth integrands and vertex singularities") {
  QuadratureConfig c;
  c.rel_tol = 1e-10;
  for (std::size_t n = 2; n <= 5; ++n) {
    const auto vol = integrate_vertex_singular([](const SimplexPoint&) { return cplx{1.0}; }, n, c);
    CHECK(vol.converged);
    CHECK(std::abs(vol.value - 1.0 / std::tgamma(static_cast<double>(n) + 1.0)) < 1e-13);
  }
  // t_1 t_2 over the 3-simplex: 1! 1! / 5!
  const auto mono = integrate_vertex_singular([](const SimplexPoint& p) { return cplx{p.t[1] * p.t[2]}; }, 3, c);
  CHECK(std::abs(mono.value - 1.0 / 120.0) < 1e-14);

  c.rel_tol = 1e-8;
  for (std::size_t v = 0; v <= 3; ++v) {
    auto f = [v](const SimplexPoint& p) {
      const double s = 1.0 - p.t[v];
      return cplx{1.0 / (s * s)};
    };
    const auto plain = integrate(f, 3, c);
    const auto radial = integrate_vertex_singular(f, 3, c);
    CHECK(radial.converged);
    CHECK(std::abs(radial.value - 0.5) < 1e-7);
    CHECK(radial.evaluations < plain.evaluations);
  }
}

TEST_CASE("integrate_vertex_singular: quadratic form singular at every vertex") {
  // 1/Q(t)^2 with Q = sum_{i<j} w_ij t_i t_j has degree -4, so t -> c t (then
  // renormalized) gives I(w) = prod c_i * I(c_i c_j w_ij).
  const double c[4] = {1.0, 3.0, 5.0, 8.0};
  auto integral = [](const double (&w)[4][4], double rel_tol, std::size_t* evals = nullptr) {
    auto f = [&w](const SimplexPoint& p) {
      double q = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) q += p.t[i] * p.t[j] * w[i][j];
      return cplx{1.0 / (q * q)};
    };
    QuadratureConfig cfg;
    cfg.rel_tol = rel_tol;
    const auto r = integrate_vertex_singular(f, 3, cfg);
    CHECK(r.converged);
    if (evals) *evals = r.evaluations;
    return r.value.real();
  };
  double ones[4][4] = {}, skew[4][4] = {};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      ones[i][j] = 1.0;
      skew[i][j] = 1.0 / (c[i] * c[j]);
    }
  const double balanced = integral(ones, 1e-9);
  std::size_t evals = 0;
  const double skewed = integral(skew, 1e-6, &evals);
  CHECK(std::abs(skewed - c[0] * c[1] * c[2] * c[3] * balanced) < 3e-6 * std::abs(skewed));
  CHECK(evals < 2'000'000);
}
