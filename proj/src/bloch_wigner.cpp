#include "chernreg/bloch_wigner.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace chernreg {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kZeta2 = kPi * kPi / 6.0;

// B_{2k} / (2k+1)! for k = 1..15.
constexpr std::array<double, 15> kBernoulliOverFactorial = [] {
  constexpr std::array<double, 15> b2k = {
      1.0 / 6.0,           -1.0 / 30.0,           1.0 / 42.0,          -1.0 / 30.0,
      5.0 / 66.0,          -691.0 / 2730.0,       7.0 / 6.0,           -3617.0 / 510.0,
      43867.0 / 798.0,     -174611.0 / 330.0,     854513.0 / 138.0,    -236364091.0 / 2730.0,
      8553103.0 / 6.0,     -23749461029.0 / 870.0, 8615841276005.0 / 14322.0};
  std::array<double, 15> out{};
  double fact = 1.0;  // (2k+1)!
  int m = 1;
  for (std::size_t k = 0; k < b2k.size(); ++k) {
    const int target = 2 * static_cast<int>(k + 1) + 1;
    while (m < target) fact *= ++m;
    out[k] = b2k[k] / fact;
  }
  return out;
}();

// Li_2 via u = -ln(1 - z): Li_2 = u - u^2/4 + sum_k B_2k u^(2k+1)/(2k+1)!.
// Used for |z| <= 1, Re z <= 1/2 where |u| < 1.1.
cplx li2_bernoulli(cplx z) {
  const cplx u = -std::log(1.0 - z);
  const cplx u2 = u * u;
  cplx sum = u - 0.25 * u2;
  cplx p = u;
  for (double c : kBernoulliOverFactorial) {
    p *= u2;
    const cplx term = c * p;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

cplx li2_unit_disc(cplx z) {
  if (std::abs(z) <= 0.5) return li2_power_series(z);
  if (z.real() > 0.5) {
    const cplx w = 1.0 - z;
    const cplx lw = std::abs(w) <= 0.5 ? li2_power_series(w) : li2_bernoulli(w);
    return -lw + kZeta2 - std::log(z) * std::log(w);
  }
  return li2_bernoulli(z);
}

}  // namespace

cplx li2_power_series(cplx z) {
  if (!(std::abs(z) < 1.0)) throw std::domain_error("li2_power_series: |z| must be < 1");
  cplx sum = 0.0;
  cplx p = z;
  for (int k = 1; k < 2000; ++k) {
    const cplx term = p / static_cast<double>(k * k);
    sum += term;
    if (std::abs(term) < 1e-18 * std::max(std::abs(sum), 1e-300)) break;
    p *= z;
  }
  return sum;
}

cplx li2(cplx z) {
  if (z == cplx{}) return 0.0;
  if (z == cplx{1.0, 0.0}) return kZeta2;
  if (z.imag() == 0.0 && z.real() > 1.0) {
    // Upper-side limit on the cut.
    const double x = z.real();
    const double lx = std::log(x);
    const double re = 2.0 * kZeta2 - 0.5 * lx * lx - li2_unit_disc(1.0 / x).real();
    return {re, kPi * lx};
  }
  if (std::abs(z) > 1.0) {
    const cplx l = std::log(-z);
    return -li2_unit_disc(1.0 / z) - kZeta2 - 0.5 * l * l;
  }
  return li2_unit_disc(z);
}

double bloch_wigner(cplx z) {
  if (z.imag() == 0.0) return 0.0;
  return li2(z).imag() + std::arg(1.0 - z) * std::log(std::abs(z));
}

std::string_view to_string(CrossRatioConvention c) {
  switch (c) {
    case CrossRatioConvention::kX: return "x";
    case CrossRatioConvention::kInverse: return "1/x";
    case CrossRatioConvention::kOneMinus: return "1-x";
    case CrossRatioConvention::kInverseOneMinus: return "1/(1-x)";
    case CrossRatioConvention::kOneMinusInverse: return "(x-1)/x";
    case CrossRatioConvention::kXOverXMinusOne: return "x/(x-1)";
  }
  return "?";
}

CrossRatioConvention cross_ratio_convention_from_string(std::string_view s) {
  for (auto c : kAllCrossRatioConventions)
    if (to_string(c) == s) return c;
  throw std::invalid_argument("unknown cross-ratio convention: " + std::string(s));
}

cplx det2(const CVector& a, const CVector& b) {
  if (a.size() != 2 || b.size() != 2) throw DimensionError("det2: vectors must lie in C^2");
  return a[0] * b[1] - a[1] * b[0];
}

cplx cross_ratio(const Quadruple& v, CrossRatioConvention conv) {
  const cplx a = det2(v[0], v[2]) * det2(v[1], v[3]);
  const cplx b = det2(v[0], v[3]) * det2(v[1], v[2]);
  // Pluecker: [02][13] = [01][23] + [03][12], so b - a = -[01][23].
  const cplx c = -det2(v[0], v[1]) * det2(v[2], v[3]);
  double scale = 1.0;
  for (const auto& x : v) scale *= norm(x) * norm(x);
  auto ratio = [&](cplx num, cplx den) {
    if (std::abs(den) <= 1e-14 * scale)
      throw DegenerateConfigurationError("cross_ratio: vanishing determinant in the denominator");
    return num / den;
  };
  switch (conv) {
    case CrossRatioConvention::kX: return ratio(a, b);
    case CrossRatioConvention::kInverse: return ratio(b, a);
    case CrossRatioConvention::kOneMinus: return ratio(c, b);
    case CrossRatioConvention::kInverseOneMinus: return ratio(b, c);
    case CrossRatioConvention::kOneMinusInverse: return ratio(-c, a);
    case CrossRatioConvention::kXOverXMinusOne: return ratio(-a, c);
  }
  throw std::invalid_argument("cross_ratio: bad convention");
}

}  // namespace chernreg
