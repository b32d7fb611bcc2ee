#pragma once

// Property-test campaigns over random inputs. Every suite is deterministic
// under a fixed seed and returns per-trial diagnostics as JSON.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "chernreg/json_io.hpp"

namespace chernreg {

/// Entries uniform on the unit disc.
CVector random_disc_vector(std::mt19937_64& rng, std::size_t n);
/// 2r vectors in C^r, redrawn until VectorTuple::generic() holds.
VectorTuple random_generic_tuple(std::mt19937_64& rng, int r);
Quadruple random_generic_quadruple(std::mt19937_64& rng);
/// Identity plus a disc-uniform perturbation of size 0.5, |det| > 0.1.
CMatrix random_group_element(std::mt19937_64& rng, std::size_t n);
/// Interior point with every coordinate >= 0.02 / (n + 1).
SimplexPoint random_interior_point(std::mt19937_64& rng, std::size_t n);

struct CampaignOptions {
  std::uint64_t seed = 1;
  std::size_t trials = 0;  // 0: the suite's default
  int r = 0;               // 0: every weight the suite covers
  QuadratureConfig quadrature;
  TransgressionOptions transgression;  // th1-residuals only
};

struct SuiteReport {
  std::string suite;
  std::size_t trials = 0;
  std::size_t passes = 0;
  bool passed = false;
  bool converged = true;  // false when any quadrature hit its limits
  json summary = json::object();
  json results = json::array();
};

const std::vector<std::string>& suite_names();
/// Throws std::invalid_argument for an unknown suite.
SuiteReport run_suite(const std::string& name, const CampaignOptions& opts);

SuiteReport antisymmetry_suite(const CampaignOptions& opts);
SuiteReport projective_invariance_suite(const CampaignOptions& opts);
SuiteReport five_term_suite(const CampaignOptions& opts);
SuiteReport thm46_constancy_suite(const CampaignOptions& opts);
SuiteReport eq500_eq600_suite(const CampaignOptions& opts);
SuiteReport th1_residuals_suite(const CampaignOptions& opts);
SuiteReport reality_class_suite(const CampaignOptions& opts);

/// Ratio presentation / (i D) under one cross-ratio convention.
struct ConventionSweep {
  CrossRatioConvention convention = CrossRatioConvention::kX;
  cplx constant{};  // mean ratio
  double spread = 0.0;  // max |ratio_i - ratio_j| / |mean|
};
/// One row per convention for the given presentations; the preferred
/// convention (spread below 1e-3 with the constant closest to 1, else the
/// smallest spread) comes first.
std::vector<ConventionSweep> sweep_conventions(const std::vector<Quadruple>& quads,
                                               const std::vector<cplx>& presentations);

}  // namespace chernreg
