// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "chernreg/bloch_wigner.hpp"
#include "chernreg/campaign.hpp"
#include "chernreg/grassmann_polylog.hpp"
#include "chernreg/simplex_quad.hpp"
#include "chernreg/transgression.hpp"

using namespace chernreg;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

constexpr std::uint64_t kSeed = 1;

// Same settings as the command-line campaign.
CampaignOptions campaign_options(std::size_t trials = 0) {
  CampaignOptions opts;
  opts.seed = kSeed;
  opts.trials = trials;
  opts.quadrature.rel_tol = 1e-5;
  return opts;
}

cplx random_complex(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return {n(rng), n(rng)};
}

CMatrix random_gl(std::mt19937_64& rng, std::size_t n) {
  while (true) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = random_complex(rng);
    if (std::abs(det(m)) > 1e-2) return m;
  }
}

Verdict suite(const std::string& name, std::size_t trials = 0) {
  const SuiteReport rep = run_suite(name, campaign_options(trials));
  return {rep.passed && rep.converged,
          fmt("%zu/%zu trials%s", rep.passes, rep.trials, rep.converged ? "" : ", quadrature not converged")};
}

Verdict closed_form_r1() {
  std::mt19937_64 rng(kSeed);
  QuadratureConfig q;
  q.rel_tol = 1e-12;
  double worst = 0.0;
  bool converged = true;
  for (int k = 0; k < 50; ++k) {
    GroupTuple t{1, {random_gl(rng, 3), random_gl(rng, 3)}, CMatrix::identity(3), 0.0};
    const QuadratureResult res = chern_cochain(t, q);
    const double expect = std::log(std::abs(det(t.elements[0]))) - std::log(std::abs(det(t.elements[1])));
    worst = std::max(worst, std::abs(res.value - expect) / std::max(std::abs(expect), 1e-300));
    converged &= res.converged;
  }
  return {converged && worst < 1e-9, fmt("max relative error %.2e over 50 GL3 pairs", worst)};
}

Verdict cocycle_r2() {
  std::mt19937_64 rng(kSeed);
  QuadratureConfig q;
  q.rel_tol = 1e-6;
  double worst = 0.0;
  bool ok = true;
  for (int k = 0; k < 10; ++k) {
    GroupTuple t{2, {}, CMatrix::identity(2), 0.0};
    for (int i = 0; i < 5; ++i) t.elements.push_back(random_group_element(rng, 2));
    const CocycleDefect d = cocycle_defect(t, q);
    ok &= d.converged && std::abs(d.defect) < 5.0 * d.error_sum;
    worst = std::max(worst, std::abs(d.defect) / d.error_sum);
  }
  return {ok, fmt("max |defect| / error sum %.3f over 10 GL2 5-tuples", worst)};
}

Verdict constancy() {
  const SuiteReport rep = thm46_constancy_suite(campaign_options());
  const json& s = rep.summary;
  return {rep.passed && rep.converged,
          fmt("spread %.2e under convention %s, constant %.6f%+.6fi (expected 1), %s pair sum",
              s["spread"].get<double>(), s["convention"].get<std::string>().c_str(), s["constant"][0].get<double>(),
              s["constant"][1].get<double>(), s["pair_sum"].get<std::string>().c_str())};
}

Verdict th1() {
  const SuiteReport rep = th1_residuals_suite(campaign_options());
  const json& s = rep.summary;
  return {rep.passed && rep.converged,
          fmt("%zu/%zu rows (%d trivial), max nontrivial residual %.2e with printed coefficients, %.2e with "
              "corrected ones",
              rep.passes, rep.trials, s["trivial_rows"].get<int>(), s["max_nontrivial_residual"].get<double>(),
              s["max_nontrivial_alternate_residual"].get<double>())};
}

Verdict oracle_health() {
  const double d_i = bloch_wigner(cplx{0.0, 1.0});
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double conj = 0.0, five = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const cplx z{u(rng), u(rng)};
    conj = std::max(conj, std::abs(bloch_wigner(std::conj(z)) + bloch_wigner(z)));
    const cplx x{0.5 * u(rng), 0.5 * u(rng)}, y{0.5 * u(rng), 0.5 * u(rng)};
    const cplx w = 1.0 - x * y;
    five = std::max(five, std::abs(bloch_wigner(x) + bloch_wigner(y) + bloch_wigner((1.0 - x) / w) +
                                   bloch_wigner(w) + bloch_wigner((1.0 - y) / w)));
  }
  const double err = std::abs(d_i - 0.9159655941772190);
  return {err <= 1e-12 && conj < 1e-13 && five < 1e-11,
          fmt("|D(i) - 0.9159655941772190| %.1e, conjugation %.1e, five-term %.1e", err, conj, five)};
}

Verdict stress() {
  QuadratureConfig q;
  q.rel_tol = 1e-8;
  const QuadratureResult res = integrate(
      [](const SimplexPoint& p) {
        const double s = p.t[1] + p.t[2] + p.t[3];
        return cplx{1.0 / (s * s), 0.0};
      },
      3, q);
  const double err = std::abs(res.value - 0.5);
  return {res.converged && err <= 1e-6,
          fmt("value %.12f, error %.1e, %zu evaluations, converged %d", res.value.real(), err, res.evaluations,
              res.converged)};
}

Verdict brute_force() {
  std::mt19937_64 rng(kSeed);
  double worst = 0.0;
  for (int r : {2, 3}) {
    const int count = r == 2 ? 100 : 20;
    for (int k = 0; k < count; ++k) {
      const VectorTuple t = random_generic_tuple(rng, r);
      const SimplexPoint p = random_interior_point(rng, static_cast<std::size_t>(2 * r - 1));
      const cplx fast = numerator_coeff(t, p), ref = numerator_coeff_reference(t, p);
      worst = std::max(worst, std::abs(fast - ref) / std::max(std::abs(ref), 1e-300));
    }
  }
  return {worst < 1e-12, fmt("max relative difference %.2e over 100 (r=2) + 20 (r=3)", worst)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;  // 0: none
    std::function<Verdict()> run;
  };
  const Criterion criteria[] = {
      {1, "r=1 closed form", 1.0, closed_form_r1},
      {2, "cocycle property r=2", 120.0, cocycle_r2},
      {3, "f antisymmetry", 0.0, [] { return suite("antisymmetry"); }},
      {4, "presentation / (i D) constancy", 300.0, constancy},
      {5, "five-term relation via presentation", 0.0, [] { return suite("five-term"); }},
      {6, "projective and GL2 invariance", 0.0, [] { return suite("projective-invariance"); }},
      {7, "trace and minor integrands agree", 60.0, [] { return suite("eq500-eq600"); }},
      {8, "transgression residuals", 300.0, th1},
      {9, "dilogarithm oracle health", 0.0, oracle_health},
      {10, "quadrature stress", 0.0, stress},
      {11, "reality classes", 0.0, [] { return suite("reality-class"); }},
      {12, "numerator vs reference enumerator", 0.0, brute_force},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0.0 && secs > c.limit_seconds) {
      v.pass = false;
      v.detail += fmt("; over the %.0f s limit", c.limit_seconds);
    }
    failures += v.pass ? 0 : 1;
    std::printf("%s %2d %s: %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of 12 criteria passed\n", 12 - failures);
  return failures == 0 ? 0 : 1;
}
