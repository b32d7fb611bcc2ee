#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "chernreg/complex_linalg.hpp"
#include "test_support.hpp"

using namespace chernreg;
using namespace chernreg::testing;

namespace {

// Laplace expansion along the first row.
cplx cofactor_det(const CMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 1) return m(0, 0);
  cplx total = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    CMatrix sub(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0, k = 0; j < n; ++j)
        if (j != c) sub(i - 1, k++) = m(i, j);
    total += (c % 2 == 0 ? 1.0 : -1.0) * m(0, c) * cofactor_det(sub);
  }
  return total;
}

}  // namespace

TEST_CASE("det: identity, transposition and cofactor oracle") {
  CHECK(det(CMatrix::identity(3)) == cplx{1.0, 0.0});
  CHECK(det(CMatrix{{0.0, 1.0}, {1.0, 0.0}}) == cplx{-1.0, 0.0});
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix a = random_matrix(rng, 4, 4);
    CHECK(rel_err(det(a), cofactor_det(a)) < 1e-12);
  }
  CHECK_THROWS_AS(det(CMatrix(2, 3)), DimensionError);
}

TEST_CASE("det: row permutation multiplies by the sign") {
  std::mt19937_64 rng(12);
  const CMatrix a = random_matrix(rng, 5, 5);
  std::vector<std::size_t> perm(5);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  int checked = 0;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = i + 1; j < 5; ++j) inversions += perm[i] > perm[j];
    CMatrix pa(5, 5);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j) pa(i, j) = a(perm[i], j);
    const double sign = inversions % 2 == 0 ? 1.0 : -1.0;
    CHECK(rel_err(det(pa), sign * det(a)) < 1e-12);
    ++checked;
  } while (std::next_permutation(perm.begin(), perm.end()) && checked < 40);
}

TEST_CASE("minor_det: identity columns, repetition, assembled determinant, alternation") {
  const std::vector<CVector> unit = {{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}, {1.0, -1.0}};
  CHECK(minor_det(unit, IndexSubset{4, {0}}, 1) == cplx{1.0, 0.0});
  CHECK(minor_det(unit, IndexSubset{4, {2}}, 2) == cplx{0.0, 0.0});

  std::mt19937_64 rng(13);
  std::vector<CVector> v;
  for (int i = 0; i < 6; ++i) v.push_back(random_vector(rng, 3));
  const CMatrix assembled = CMatrix::from_columns(std::vector<CVector>{v[1], v[4], v[2]});
  CHECK(std::abs(minor_det(v, IndexSubset{6, {1, 4}}, 2) - det(assembled)) < 1e-13);

  // Swapping the extra column into the subset flips the sign.
  const cplx a = minor_det(v, IndexSubset{6, {1, 3}}, 5);  // columns (1, 3, 5)
  const cplx b = minor_det(v, IndexSubset{6, {1, 5}}, 3);  // columns (1, 5, 3)
  CHECK(std::abs(a + b) < 1e-12 * std::abs(a));
  CHECK_THROWS_AS(minor_det(v, IndexSubset{6, {1}}, 3), DimensionError);
}

TEST_CASE("congruence: identity, diagonal, hermitian residual, composition") {
  std::mt19937_64 rng(14);
  const CMatrix h = random_spd(rng, 3);
  CHECK(max_abs_diff(congruence(CMatrix::identity(3), h), h) < 1e-15 * h.max_abs());

  const std::vector<cplx> d = {2.0, cplx{0.0, 1.0}};
  const CMatrix c = congruence(CMatrix::diagonal(d), CMatrix::identity(2));
  CHECK(max_abs_diff(c, CMatrix{{4.0, 0.0}, {0.0, 1.0}}) < 1e-15);

  const CMatrix g1 = random_matrix(rng, 3, 3);
  const CMatrix g2 = random_matrix(rng, 3, 3);
  const CMatrix raw = g1 * h * g1.adjoint();
  CHECK(max_abs_diff(raw, raw.adjoint()) < 1e-12 * raw.max_abs());
  CHECK(congruence(g1, h).is_hermitian(1e-12));
  const CMatrix lhs = congruence(g1 * g2, h);
  const CMatrix rhs = congruence(g1, congruence(g2, h));
  CHECK(max_abs_diff(lhs, rhs) < 1e-12 * lhs.max_abs());
  CHECK_THROWS_AS(congruence(CMatrix::identity(2), h), DimensionError);
}

TEST_CASE("solve: identity, diagonal, random SPD residual, definiteness error") {
  std::mt19937_64 rng(15);
  const CMatrix b = random_matrix(rng, 2, 3);
  CHECK(max_abs_diff(solve(CMatrix::identity(2), b), b) < 1e-15);
  const std::vector<cplx> d = {2.0, 4.0};
  CHECK(max_abs_diff(solve(CMatrix::diagonal(d), CMatrix::identity(2)), CMatrix{{0.5, 0.0}, {0.0, 0.25}}) < 1e-16);

  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix h = random_spd(rng, 4);
    const CMatrix rhs = random_matrix(rng, 4, 2);
    const CMatrix x = solve(h, rhs);
    CHECK(max_abs_diff(h * x, rhs) < 1e-10 * rhs.max_abs());
    // multiply-then-solve round trip
    const CMatrix y = random_matrix(rng, 4, 2);
    CHECK(max_abs_diff(solve(h, h * y), y) < 1e-10 * y.max_abs());
  }

  const CVector v = {1.0, cplx{0.0, 1.0}, 2.0};
  try {
    solve(CMatrix::outer(v, v), CMatrix::identity(3));
    FAIL("rank-one matrix accepted");
  } catch (const DefinitenessError& e) {
    CHECK(e.pivot() == 1);
  }
}

TEST_CASE("subsets: lexicographic enumeration") {
  const auto s42 = subsets(4, 2);
  REQUIRE(s42.size() == 6);
  CHECK(s42.front().members == std::vector<std::size_t>{0, 1});
  CHECK(s42.back().members == std::vector<std::size_t>{2, 3});
  const auto s0 = subsets(5, 0);
  REQUIRE(s0.size() == 1);
  CHECK(s0.front().members.empty());
  const auto s63 = subsets(6, 3);
  CHECK(s63.size() == 20);
  for (std::size_t i = 0; i < s63.size(); ++i) {
    CHECK(s63[i].valid());
    if (i > 0) CHECK(s63[i - 1].members < s63[i].members);
  }
  CHECK_THROWS_AS(subsets(3, 4), DimensionError);
}

TEST_CASE("antisymmetrized_trace matches the full permutation sum") {
  std::mt19937_64 rng(16);
  for (std::size_t m : {1u, 2u, 3u, 4u, 5u}) {
    std::vector<CMatrix> f;
    for (std::size_t k = 0; k < m; ++k) f.push_back(random_matrix(rng, 3, 3));
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    cplx brute = 0.0;
    do {
      int inv = 0;
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) inv += perm[i] > perm[j];
      CMatrix p = CMatrix::identity(3);
      for (std::size_t k : perm) p = p * f[k];
      brute += (inv % 2 == 0 ? 1.0 : -1.0) * p.trace();
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(std::abs(antisymmetrized_trace(f) - brute) < 1e-11 * std::max(1.0, std::abs(brute)));
  }
}
