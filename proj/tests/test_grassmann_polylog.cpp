#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "chernreg/grassmann_polylog.hpp"
#include "test_support.hpp"

using namespace chernreg;
using namespace chernreg::testing;

namespace {

VectorTuple random_generic_tuple(std::mt19937_64& rng, int r) {
  while (true) {
    VectorTuple t{r, {}};
    for (int i = 0; i < 2 * r; ++i) t.vectors.push_back(random_vector(rng, static_cast<std::size_t>(r)));
    if (t.generic()) return t;
  }
}

SimplexPoint random_interior_point(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  SimplexPoint p{std::vector<double>(n + 1)};
  double s = 0.0;
  for (auto& x : p.t) s += (x = u(rng));
  for (auto& x : p.t) x /= s;
  return p;
}

Quadruple as_quadruple(const VectorTuple& t) { return {t.vectors[0], t.vectors[1], t.vectors[2], t.vectors[3]}; }

int permutation_sign(const std::vector<std::size_t>& p) {
  int inv = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) inv += p[i] > p[j];
  return inv % 2 == 0 ? 1 : -1;
}

QuadratureConfig config(double rel) {
  QuadratureConfig c;
  c.rel_tol = rel;
  c.abs_tol = 1e-14;
  return c;
}

const CVector e1{1.0, 0.0}, e2{0.0, 1.0};

}  // namespace

TEST_CASE("denominator: enumeration, vertices, homogeneity") {
  const VectorTuple t{2, {e1, e2, e1, e2}};
  CHECK(std::abs(denominator(t, SimplexPoint::barycenter(3)) - 0.25) < 1e-15);

  std::mt19937_64 rng(51);
  for (int r : {2, 3}) {
    const VectorTuple g = random_generic_tuple(rng, r);
    const std::size_t n = static_cast<std::size_t>(2 * r - 1);
    for (std::size_t k = 0; k <= n; ++k) CHECK(denominator(g, SimplexPoint::vertex(n, k)) == 0.0);
    const cplx lambda{0.6, -1.2};
    VectorTuple scaled = g;
    for (auto& v : scaled.vectors)
      for (auto& x : v) x *= lambda;
    const SimplexPoint p = random_interior_point(rng, n);
    CHECK(std::abs(denominator(scaled, p) / denominator(g, p) - std::pow(std::abs(lambda), 2 * r)) < 1e-12);
  }
}

TEST_CASE("numerator_coeff: degenerate tuple and brute-force agreement") {
  const CVector w{0.3, cplx{1.0, 2.0}};
  CHECK(std::abs(numerator_coeff(VectorTuple{2, {w, w, w, w}}, SimplexPoint::barycenter(3))) == 0.0);

  const VectorTuple fixed{2, {e1, e2, CVector{1.0, 1.0}, CVector{1.0, cplx{0.0, 1.0}}}};
  const SimplexPoint bc = SimplexPoint::barycenter(3);
  const cplx ref = numerator_coeff_reference(fixed, bc);
  CHECK(std::abs(ref) > 0.0);
  CHECK(rel_err(numerator_coeff(fixed, bc), ref) < 1e-12);

  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 20; ++trial) {
    const VectorTuple t = random_generic_tuple(rng, 2);
    const SimplexPoint p = random_interior_point(rng, 3);
    CHECK(rel_err(numerator_coeff(t, p), numerator_coeff_reference(t, p)) < 1e-12);
  }
  for (int trial = 0; trial < 3; ++trial) {
    const VectorTuple t = random_generic_tuple(rng, 3);
    const SimplexPoint p = random_interior_point(rng, 5);
    CHECK(rel_err(numerator_coeff(t, p), numerator_coeff_reference(t, p)) < 1e-12);
  }
}

TEST_CASE("numerator_coeff: reality class") {
  std::mt19937_64 rng(53);
  for (int r : {2, 3}) {
    const double sign = (r - 1) % 2 == 0 ? 1.0 : -1.0;
    for (int trial = 0; trial < 10; ++trial) {
      const VectorTuple t = random_generic_tuple(rng, r);
      const cplx c = numerator_coeff(t, random_interior_point(rng, static_cast<std::size_t>(2 * r - 1)));
      CHECK(std::abs(std::conj(c) - sign * c) < 1e-10 * std::abs(c));
    }
  }
}

TEST_CASE("integrand_equivalence: rank-one limit of the trace integrand") {
  std::mt19937_64 rng(54);
  const VectorTuple t2 = random_generic_tuple(rng, 2);
  const auto rep2 = integrand_equivalence(t2, random_interior_point(rng, 3), default_epsilon_ladder());
  CHECK(rep2.rows.size() == 4);
  CHECK(rep2.rows.back().rel_diff < rep2.rows.front().rel_diff);
  CHECK(rep2.extrapolated_rel_diff < 1e-6);

  const VectorTuple t3 = random_generic_tuple(rng, 3);
  const auto rep3 = integrand_equivalence(t3, SimplexPoint::barycenter(5), default_epsilon_ladder());
  CHECK(rep3.extrapolated_rel_diff < 1e-5);

  // g_i = I: both sides vanish.
  const std::vector<CMatrix> ident(4, CMatrix::identity(2));
  const auto rep0 = integrand_equivalence(ident, e1, SimplexPoint::barycenter(3), default_epsilon_ladder());
  CHECK(rep0.target == cplx{});
  CHECK(std::abs(rep0.extrapolated) < 1e-14);

  for (const auto& g : completing_matrices(t3)) CHECK(std::abs(det(g)) > 0.0);
}

TEST_CASE("f_invariant: hand value, repetition, antisymmetry") {
  // det(v0,v1) = 1, det(v2,v3) = i - 1, det(v0,v3) = i, det(v1,v2) = -1:
  // Im(1 (i - 1)(-i)(-1)) = Im(-1 - i) = -1.
  const Quadruple q = {e1, e2, CVector{1.0, 1.0}, CVector{1.0, cplx{0.0, 1.0}}};
  CHECK(std::abs(f_invariant(q) + 1.0) < 1e-15);
  CHECK(f_invariant(Quadruple{e1, e2, e1, CVector{1.0, 3.0}}) == 0.0);

  const Quadruple swapped = {q[1], q[0], q[2], q[3]};
  CHECK(f_invariant(swapped) == -f_invariant(q));

  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 20; ++trial) {
    const Quadruple v = as_quadruple(random_generic_tuple(rng, 2));
    const double base = f_invariant(v);
    std::vector<std::size_t> p = {0, 1, 2, 3};
    do {
      const Quadruple w = {v[p[0]], v[p[1]], v[p[2]], v[p[3]]};
      CHECK(std::abs(f_invariant(w) - permutation_sign(p) * base) <= 1e-13 * std::abs(base));
    } while (std::next_permutation(p.begin(), p.end()));
  }
}

TEST_CASE("dilog_presentation: vanishing, conjugation, projective invariance") {
  const QuadratureConfig c = config(1e-5);
  const Quadruple prop = {e1, CVector{2.0, 0.0}, CVector{1.0, 1.0}, CVector{1.0, cplx{0.0, 1.0}}};
  CHECK(dilog_presentation(prop, c).value == cplx{});

  std::mt19937_64 rng(56);
  const Quadruple v = as_quadruple(random_generic_tuple(rng, 2));
  const auto base = dilog_presentation(v, c);
  CHECK(base.converged);
  CHECK(std::abs(base.value.real()) < 1e-15 * std::abs(base.value));

  Quadruple conj = v;
  for (auto& w : conj)
    for (auto& x : w) x = std::conj(x);
  CHECK(std::abs(dilog_presentation(conj, c).value + base.value) < 1e-6 * std::abs(base.value));

  Quadruple scaled = v;
  for (auto& w : scaled) {
    const cplx lambda = random_complex(rng) + 0.5;
    for (auto& x : w) x *= lambda;
  }
  CHECK(rel_err(dilog_presentation(scaled, c).value, base.value) < 1e-3);

  const CMatrix g = random_gl(rng, 2, 1.0);
  Quadruple moved;
  for (int i = 0; i < 4; ++i) moved[i] = g * v[i];
  CHECK(rel_err(dilog_presentation(moved, c).value, base.value) < 1e-3);

  // Two coincident points force f = 0 through antisymmetry.
  const Quadruple coincident = {e1, e2, CVector{1.0, 1.0}, CVector{2.0, 2.0}};
  CHECK(dilog_presentation(coincident, c).value == cplx{});
}

TEST_CASE("grassmann_cochain: real configuration, imaginary value, GL2 invariance") {
  const QuadratureConfig c = config(1e-4);
  const VectorTuple real_points{2, {e1, e2, CVector{1.0, 1.0}, CVector{1.0, 3.5}}};
  QuadratureConfig loose = c;
  loose.abs_tol = 1e-9;
  const auto zero = grassmann_cochain(real_points, loose);
  CHECK(std::abs(zero.value) <= zero.error_estimate + 1e-14);

  std::mt19937_64 rng(57);
  const VectorTuple t = random_generic_tuple(rng, 2);
  const auto a = grassmann_cochain(t, c);
  CHECK(a.converged);
  CHECK(std::abs(a.value.real()) <= a.error_estimate + 1e-14 * std::abs(a.value));

  VectorTuple moved = t;
  const CMatrix g = random_gl(rng, 2, 1.0);
  for (auto& v : moved.vectors) v = g * v;
  CHECK(rel_err(grassmann_cochain(moved, c).value, a.value) < 1e-3);
}
