#pragma once

// Dilogarithm, Bloch-Wigner function and cross-ratios of points in P^1.

#include <array>
#include <complex>
#include <stdexcept>
#include <string_view>

#include "chernreg/complex_linalg.hpp"

namespace chernreg {

class DegenerateConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Principal-branch Li_2 with cut [1, inf). Inputs on the cut take the limit
/// from the upper half plane.
cplx li2(cplx z);

/// Direct power series sum z^k / k^2; requires |z| < 1.
cplx li2_power_series(cplx z);

/// D(z) = Im Li_2(z) + arg(1 - z) ln|z|. Exactly 0 on the real axis.
double bloch_wigner(cplx z);

/// The six values of the anharmonic group applied to the base cross-ratio
///   x = [02][13] / ([03][12]),   [ij] = det(v_i, v_j).
enum class CrossRatioConvention { kX, kInverse, kOneMinus, kInverseOneMinus, kOneMinusInverse, kXOverXMinusOne };

inline constexpr std::array<CrossRatioConvention, 6> kAllCrossRatioConventions = {
    CrossRatioConvention::kX,
    CrossRatioConvention::kInverse,
    CrossRatioConvention::kOneMinus,
    CrossRatioConvention::kInverseOneMinus,
    CrossRatioConvention::kOneMinusInverse,
    CrossRatioConvention::kXOverXMinusOne,
};

std::string_view to_string(CrossRatioConvention c);
CrossRatioConvention cross_ratio_convention_from_string(std::string_view s);

using Quadruple = std::array<CVector, 4>;

/// det(a, b) for vectors in C^2.
cplx det2(const CVector& a, const CVector& b);

cplx cross_ratio(const Quadruple& v, CrossRatioConvention conv = CrossRatioConvention::kX);

}  // namespace chernreg
