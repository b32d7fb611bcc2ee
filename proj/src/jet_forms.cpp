#include "chernreg/jet_forms.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace chernreg {

std::string to_string(MetricFamily f) {
  switch (f) {
    case MetricFamily::kExpPolynomial: return "exp-polynomial";
    case MetricFamily::kGram: return "gram";
    case MetricFamily::kMetricPath: return "metric-path";
  }
  return "?";
}

MetricFamily metric_family_from_string(const std::string& s) {
  for (auto f : {MetricFamily::kExpPolynomial, MetricFamily::kGram, MetricFamily::kMetricPath})
    if (to_string(f) == s) return f;
  throw std::invalid_argument("unknown metric family: " + s);
}

void TestScene::validate() const {
  if (m < 0 || k < 0 || 2 * m + k > 12) throw std::invalid_argument("scene: need m, k >= 0 and 2m + k <= 12");
  if (N < 1) throw std::invalid_argument("scene: rank must be positive");
  if (r < 1) throw std::invalid_argument("scene: weight must be positive");
  if (z.size() != static_cast<std::size_t>(m)) throw DimensionError("scene: point z must have m entries");
  if (tau.size() != static_cast<std::size_t>(k)) throw DimensionError("scene: point tau must have k entries");
  for (const auto& t : poly) {
    if (t.exponent.size() != variables()) throw DimensionError("scene: monomial exponent has wrong length");
    if (std::any_of(t.exponent.begin(), t.exponent.end(), [](int e) { return e < 0; }))
      throw std::invalid_argument("scene: negative exponent");
    if (t.coefficient.rows() != N || t.coefficient.cols() != N)
      throw DimensionError("scene: polynomial coefficient has wrong shape");
    if (family == MetricFamily::kMetricPath)
      for (int b = 0; b < k; ++b)
        if (t.exponent[static_cast<std::size_t>(2 * m + b)] != 0)
          throw std::invalid_argument("scene: metric-path base polynomial may not depend on tau");
  }
  if (family == MetricFamily::kGram && !(shift > 0.0)) throw std::invalid_argument("scene: gram shift must be positive");
  if (family == MetricFamily::kMetricPath) {
    if (elements.size() != static_cast<std::size_t>(k + 1))
      throw std::invalid_argument("scene: metric-path needs k + 1 group elements");
    for (const auto& g : elements)
      if (g.rows() != N || g.cols() != N) throw DimensionError("scene: group element has wrong shape");
  }
}

namespace {

std::vector<int> conjugate_exponent(const std::vector<int>& e, int m) {
  std::vector<int> out = e;
  for (int i = 0; i < m; ++i) std::swap(out[static_cast<std::size_t>(i)], out[static_cast<std::size_t>(m + i)]);
  return out;
}

// Polynomial sum_t c_t x^{e_t} on scalar variable jets; `dagger` evaluates
// sum_t c_t^H x^{conj(e_t)} instead.
MatrixJet evaluate_poly(const TestScene& scene, const JetSpacePtr& space, const std::vector<MatrixJet>& vars,
                        bool dagger) {
  MatrixJet out = MatrixJet::constant(space, CMatrix(scene.N, scene.N));
  std::map<std::pair<std::size_t, int>, MatrixJet> powers;
  auto power = [&](std::size_t v, int e) -> const MatrixJet& {
    auto key = std::make_pair(v, e);
    auto it = powers.find(key);
    if (it != powers.end()) return it->second;
    MatrixJet p = MatrixJet::scalar(space, 1.0);
    for (int i = 0; i < e; ++i) p = p * vars[v];
    return powers.emplace(key, std::move(p)).first->second;
  };
  for (const auto& t : scene.poly) {
    const std::vector<int> e = dagger ? conjugate_exponent(t.exponent, scene.m) : t.exponent;
    MatrixJet mono = MatrixJet::scalar(space, 1.0);
    for (std::size_t v = 0; v < e.size(); ++v)
      if (e[v] > 0) mono = mono * power(v, e[v]);
    out += mono * MatrixJet::constant(space, dagger ? t.coefficient.adjoint() : t.coefficient);
  }
  return out;
}

MatrixJet hermitian_exp(const TestScene& scene, const JetSpacePtr& space, const std::vector<MatrixJet>& vars) {
  MatrixJet herm = evaluate_poly(scene, space, vars, false) + evaluate_poly(scene, space, vars, true);
  herm *= 0.5;
  return herm.exp();
}

// h from scalar jets of the polarized variables.
MatrixJet family_metric(const TestScene& scene, const JetSpacePtr& space, const std::vector<MatrixJet>& vars) {
  switch (scene.family) {
    case MetricFamily::kExpPolynomial:
      return hermitian_exp(scene, space, vars);
    case MetricFamily::kGram: {
      const MatrixJet a = evaluate_poly(scene, space, vars, false);
      const MatrixJet ad = evaluate_poly(scene, space, vars, true);
      return MatrixJet::constant(space, scene.shift * CMatrix::identity(scene.N)) + a * ad;
    }
    case MetricFamily::kMetricPath: {
      const MatrixJet base =
          scene.poly.empty() ? MatrixJet::constant(space, CMatrix::identity(scene.N)) : hermitian_exp(scene, space, vars);
      MatrixJet t0 = MatrixJet::scalar(space, 1.0);
      for (int b = 0; b < scene.k; ++b) t0 -= vars[static_cast<std::size_t>(2 * scene.m + b)];
      MatrixJet h = MatrixJet::constant(space, CMatrix(scene.N, scene.N));
      for (std::size_t i = 0; i < scene.elements.size(); ++i) {
        const MatrixJet& t = i == 0 ? t0 : vars[static_cast<std::size_t>(2 * scene.m) + i - 1];
        const CMatrix& g = scene.elements[i];
        h += t * (MatrixJet::constant(space, g) * base * MatrixJet::constant(space, g.adjoint()));
      }
      return h;
    }
  }
  throw std::invalid_argument("family_metric: bad family");
}

std::vector<MatrixJet> point_variables(const TestScene& scene, const JetSpacePtr& space, const CVector& z,
                                       const std::vector<double>& tau) {
  std::vector<MatrixJet> vars;
  for (int i = 0; i < scene.m; ++i) vars.push_back(MatrixJet::variable(space, static_cast<std::size_t>(i), z[static_cast<std::size_t>(i)]));
  for (int i = 0; i < scene.m; ++i)
    vars.push_back(MatrixJet::variable(space, static_cast<std::size_t>(scene.m + i), std::conj(z[static_cast<std::size_t>(i)])));
  for (int b = 0; b < scene.k; ++b)
    vars.push_back(MatrixJet::variable(space, static_cast<std::size_t>(2 * scene.m + b), tau[static_cast<std::size_t>(b)]));
  return vars;
}

CMatrix random_matrix(std::mt19937_64& rng, std::size_t n, double scale) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = scale * cplx{u(rng), u(rng)};
  return a;
}

}  // namespace

TestScene random_scene(std::mt19937_64& rng, int m, int k, std::size_t N, int r, MetricFamily family, int degree) {
  TestScene s;
  s.m = m;
  s.k = k;
  s.N = N;
  s.r = r;
  s.family = family;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::size_t nv = s.variables();
  const int tau_dims = family == MetricFamily::kMetricPath ? 0 : k;
  const JetSpace monomials(static_cast<std::size_t>(2 * m + tau_dims), degree);
  for (std::size_t i = 0; i < monomials.size(); ++i) {
    const int d = monomials.degree(i);
    std::vector<int> e(nv, 0);
    std::copy(monomials.exponent(i).begin(), monomials.exponent(i).end(), e.begin());
    double scale = 0.35 / (1.0 + d);
    if (family == MetricFamily::kGram && d == 0) {
      s.poly.push_back({e, CMatrix::identity(N) + random_matrix(rng, N, 0.3)});
      continue;
    }
    s.poly.push_back({e, random_matrix(rng, N, scale)});
  }
  s.shift = 0.5;
  if (family == MetricFamily::kMetricPath) {
    for (int i = 0; i <= k; ++i) s.elements.push_back(CMatrix::identity(N) + random_matrix(rng, N, 0.4));
    std::uniform_real_distribution<double> w(0.3, 1.0);
    std::vector<double> t(static_cast<std::size_t>(k) + 1);
    for (auto& x : t) x = w(rng);
    const double total = std::accumulate(t.begin(), t.end(), 0.0);
    for (int b = 0; b < k; ++b) s.tau.push_back(t[static_cast<std::size_t>(b) + 1] / total);
  } else {
    for (int b = 0; b < k; ++b) s.tau.push_back(0.3 * u(rng));
  }
  for (int i = 0; i < m; ++i) s.z.push_back(0.3 * cplx{u(rng), u(rng)});
  return s;
}

MatrixJet metric_jet(const TestScene& scene, const FormContextPtr& ctx) {
  scene.validate();
  if (ctx->m() != scene.m || ctx->k() != scene.k) throw DimensionError("metric_jet: context does not match scene");
  return family_metric(scene, ctx->space(), point_variables(scene, ctx->space(), scene.z, scene.tau));
}

CMatrix metric_value(const TestScene& scene, const CVector& z, const std::vector<double>& tau) {
  const auto space = std::make_shared<const JetSpace>(scene.variables(), 0);
  return family_metric(scene, space, point_variables(scene, space, z, tau)).value();
}

MatrixJet finite_difference_metric_jet(const TestScene& scene, const FormContextPtr& ctx, double step) {
  scene.validate();
  if (ctx->m() != scene.m || ctx->k() != scene.k) throw DimensionError("fd jet: context does not match scene");
  const std::size_t R = scene.variables();
  const int order = std::min(3, ctx->space()->order());
  if (R == 0) return metric_jet(scene, ctx);

  // 4th-order central stencils for derivatives of order 0..3.
  const std::array<std::vector<double>, 4> weights = {
      std::vector<double>{1.0},
      std::vector<double>{1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12},
      std::vector<double>{-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12},
      std::vector<double>{1.0 / 8, -8.0 / 8, 13.0 / 8, 0.0, -13.0 / 8, 8.0 / 8, -1.0 / 8}};

  std::map<std::vector<int>, CMatrix> cache;
  auto sample = [&](const std::vector<int>& offset) -> const CMatrix& {
    auto it = cache.find(offset);
    if (it != cache.end()) return it->second;
    CVector z = scene.z;
    std::vector<double> tau = scene.tau;
    for (int i = 0; i < scene.m; ++i)
      z[static_cast<std::size_t>(i)] += step * cplx{static_cast<double>(offset[static_cast<std::size_t>(i)]),
                                                    static_cast<double>(offset[static_cast<std::size_t>(scene.m + i)])};
    for (int b = 0; b < scene.k; ++b)
      tau[static_cast<std::size_t>(b)] += step * offset[static_cast<std::size_t>(2 * scene.m + b)];
    return cache.emplace(offset, metric_value(scene, z, tau)).first->second;
  };

  // Real Taylor coefficients in (x_1..x_m, y_1..y_m, tau_1..tau_k).
  const JetSpace real_monomials(R, order);
  std::vector<CMatrix> coeff(real_monomials.size());
  for (std::size_t a = 0; a < real_monomials.size(); ++a) {
    const auto& alpha = real_monomials.exponent(a);
    CMatrix acc(scene.N, scene.N);
    std::vector<int> offset(R, 0);
    // Odometer over the stencil grid of the active directions.
    std::vector<std::size_t> active;
    for (std::size_t v = 0; v < R; ++v)
      if (alpha[v] > 0) active.push_back(v);
    std::vector<std::size_t> pos(active.size(), 0);
    while (true) {
      double w = 1.0;
      for (std::size_t i = 0; i < active.size(); ++i) {
        const auto& wv = weights[static_cast<std::size_t>(alpha[active[i]])];
        w *= wv[pos[i]];
        offset[active[i]] = static_cast<int>(pos[i]) - static_cast<int>(wv.size() / 2);
      }
      if (w != 0.0) acc += w * sample(offset);
      std::size_t i = 0;
      for (; i < active.size(); ++i) {
        if (++pos[i] < weights[static_cast<std::size_t>(alpha[active[i]])].size()) break;
        pos[i] = 0;
      }
      if (i == active.size()) break;
    }
    double denom = std::pow(step, real_monomials.degree(a));
    for (int x : alpha)
      for (int f = 2; f <= x; ++f) denom *= f;
    coeff[a] = (1.0 / denom) * acc;
  }

  // Substitute x = (Z + Zbar)/2, y = (Z - Zbar)/(2i) in the polarized space.
  const JetSpacePtr& space = ctx->space();
  std::vector<MatrixJet> real_vars;
  for (int i = 0; i < scene.m; ++i) {
    const auto zv = MatrixJet::variable(space, ctx->dz(i), 0.0);
    const auto zb = MatrixJet::variable(space, ctx->dzbar(i), 0.0);
    real_vars.push_back(0.5 * (zv + zb));
  }
  for (int i = 0; i < scene.m; ++i) {
    const auto zv = MatrixJet::variable(space, ctx->dz(i), 0.0);
    const auto zb = MatrixJet::variable(space, ctx->dzbar(i), 0.0);
    real_vars.push_back(cplx{0.0, -0.5} * (zv - zb));
  }
  for (int b = 0; b < scene.k; ++b) real_vars.push_back(MatrixJet::variable(space, ctx->dtau(b), 0.0));

  MatrixJet out(space, scene.N);
  for (std::size_t a = 0; a < real_monomials.size(); ++a) {
    MatrixJet mono = MatrixJet::scalar(space, 1.0);
    const auto& alpha = real_monomials.exponent(a);
    for (std::size_t v = 0; v < R; ++v)
      for (int e = 0; e < alpha[v]; ++e) mono = mono * real_vars[v];
    out += mono * MatrixJet::constant(space, coeff[a]);
  }
  return out.truncated(order);
}

JetAgreement jet_agreement(const TestScene& scene, double step) {
  const auto ctx = std::make_shared<const FormContext>(scene.m, scene.k, 3);
  const MatrixJet ex = metric_jet(scene, ctx);
  const MatrixJet fd = finite_difference_metric_jet(scene, ctx, step);
  JetAgreement out;
  out.max_diff.assign(4, 0.0);
  out.scale = std::max(1.0, ex.value().max_abs());
  const auto& space = *ctx->space();
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto d = static_cast<std::size_t>(space.degree(i));
    out.max_diff[d] = std::max(out.max_diff[d], max_abs_diff(ex.coefficient(i), fd.coefficient(i)));
  }
  out.agree = true;
  for (std::size_t d = 0; d < out.max_diff.size(); ++d)
    if (out.max_diff[d] > (d < 3 ? 1e-6 : 1e-5) * out.scale) out.agree = false;
  return out;
}

SceneForms scene_forms(const TestScene& scene, JetSource source, int jet_order) {
  scene.validate();
  SceneForms f;
  f.ctx = std::make_shared<const FormContext>(scene.m, scene.k, jet_order);
  f.h = source == JetSource::kExact ? metric_jet(scene, f.ctx) : finite_difference_metric_jet(scene, f.ctx);
  f.h_inv = f.h.inverse();
  const std::size_t N = scene.N;
  f.theta = MultiForm(f.ctx, N);
  f.number = MultiForm(f.ctx, N);
  for (int i = 0; i < scene.m; ++i)
    f.theta.add(1u << f.ctx->dz(i), f.h_inv * f.h.derivative(f.ctx->dz(i)));
  for (int b = 0; b < scene.k; ++b)
    f.number.add(1u << f.ctx->dtau(b), f.h_inv * f.h.derivative(f.ctx->dtau(b)));
  f.curvature = d_antiholomorphic(f.theta);
  f.half_bracket = 0.5 * supercommutator(f.number, f.number);
  f.dbar_bracket = d_antiholomorphic(f.number);
  f.dprime_bracket = d_holomorphic(f.number) + supercommutator(f.theta, f.number);
  return f;
}

MultiForm curvature(const TestScene& scene) { return scene_forms(scene).curvature; }
MultiForm number_operator(const TestScene& scene) { return scene_forms(scene).number; }

double ch_constant(int r, ChNormalization norm) {
  double fact = 1.0;
  for (int i = 2; i <= r; ++i) fact *= i;
  const double sign = r % 2 == 0 ? 1.0 : -1.0;
  return norm == ChNormalization::kPrinted ? sign / (fact * fact) : sign / fact;
}

MultiForm ch_polynomial(std::span<const MultiForm> args, int r, ChNormalization norm) {
  if (static_cast<int>(args.size()) != r || r < 1)
    throw std::invalid_argument("ch_polynomial: expected exactly r arguments");
  std::vector<int> parity(args.size());
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i].context() != args.front().context()) throw std::invalid_argument("ch_polynomial: context mismatch");
    if (!args[i].homogeneous_parity(parity[i]))
      throw std::invalid_argument("ch_polynomial: argument " + std::to_string(i) + " has mixed parity");
  }
  MultiForm out(args.front().context(), 1);
  std::vector<std::size_t> sigma(args.size());
  std::iota(sigma.begin(), sigma.end(), std::size_t{0});
  do {
    int sign = 1;
    for (std::size_t a = 0; a < sigma.size(); ++a)
      for (std::size_t b = a + 1; b < sigma.size(); ++b)
        if (sigma[a] > sigma[b] && parity[sigma[a]] && parity[sigma[b]]) sign = -sign;
    MultiForm prod = args[sigma[0]];
    for (std::size_t a = 1; a < sigma.size(); ++a) prod = wedge(prod, args[sigma[a]]);
    const MultiForm t = trace(prod);
    if (sign > 0)
      out += t;
    else
      out -= t;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  out *= ch_constant(r, norm);
  return out;
}

MultiForm chern_form(const SceneForms& forms, int r, ChNormalization norm) {
  std::vector<MultiForm> args(static_cast<std::size_t>(r), forms.curvature);
  return ch_polynomial(args, r, norm);
}

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

MultiForm alpha_n(const SceneForms& forms, int r, int n, const TransgressionOptions& opts) {
  if (n < 1 || n > 2 * r - 1) throw std::invalid_argument("alpha_n: need 1 <= n <= 2r - 1");
  MultiForm out(forms.ctx, 1);
  for (int k = 0; 2 * k + 1 <= n; ++k)
    for (int p = 0; 2 * k + p + 1 <= n; ++p) {
      const int q = n - 1 - 2 * k - p;
      if (k + p + q + 1 > r) continue;
      double coeff = ((k + q) % 2 == 0 ? 1.0 : -1.0) * factorial(k + p) * factorial(k + q) *
                     factorial(k + p + q + 1) / (factorial(k) * factorial(p) * factorial(q));
      if (opts.coefficients == TransgressionCoefficients::kCorrected && r - k - p - q - 1 > 0) coeff *= r;
      std::vector<MultiForm> args;
      for (int i = 0; i < r - k - p - q - 1; ++i) args.push_back(forms.curvature);
      args.push_back(forms.number);
      for (int i = 0; i < k; ++i) args.push_back(forms.half_bracket);
      for (int i = 0; i < p; ++i) args.push_back(forms.dbar_bracket);
      for (int i = 0; i < q; ++i) args.push_back(forms.dprime_bracket);
      out += coeff * ch_polynomial(args, r, opts.norm);
    }
  return out;
}

double ResidualReport::scale() const { return std::max({dx_norm, dt_norm, rhs_norm}); }

ResidualReport theorem1_residual(const SceneForms& forms, int r, int n, const TransgressionOptions& opts) {
  if (n < 1 || n > 2 * r - 1) throw std::invalid_argument("theorem1_residual: need 1 <= n <= 2r - 1");
  ResidualReport rep;
  rep.r = r;
  rep.n = n;
  MultiForm lhs(forms.ctx, 1);
  MultiForm rhs(forms.ctx, 1);
  if (n == 1) {
    const MultiForm dx = d_holomorphic(d_antiholomorphic(alpha_n(forms, r, 1, opts)));
    const MultiForm dt = d_parameter(chern_form(forms, r, opts.norm));
    rep.dx_norm = dx.max_abs();
    rep.dt_norm = dt.max_abs();
    lhs = dx + dt;
  } else {
    const MultiForm dx = d_x(alpha_n(forms, r, n, opts));
    const MultiForm dt = static_cast<double>(n) * d_parameter(alpha_n(forms, r, n - 1, opts));
    rep.dx_norm = dx.max_abs();
    rep.dt_norm = dt.max_abs();
    lhs = dx + dt;
    if (n <= r) {
      std::vector<MultiForm> a(static_cast<std::size_t>(r - n), forms.curvature);
      std::vector<MultiForm> b = a;
      for (int i = 0; i < n; ++i) {
        a.push_back(forms.dbar_bracket);
        b.push_back(forms.dprime_bracket);
      }
      rhs = ch_polynomial(a, r, opts.norm) - (n % 2 == 0 ? 1.0 : -1.0) * ch_polynomial(b, r, opts.norm);
      if (opts.coefficients == TransgressionCoefficients::kCorrected) rhs *= factorial(r);
    }
  }
  rep.rhs_norm = rhs.max_abs();
  rep.residual = (lhs - rhs).max_abs();
  return rep;
}

ResidualReport theorem1_residual(const TestScene& scene, int n, JetSource source, const TransgressionOptions& opts) {
  return theorem1_residual(scene_forms(scene, source), scene.r, n, opts);
}

MultiForm parameter_density(const MultiForm& form) {
  const std::uint32_t pm = form.context()->parameter_mask();
  MultiForm out(form.context(), form.dim());
  for (const auto& [mask, c] : form.terms())
    if ((mask & pm) == pm) out.add(mask & ~pm, c);
  return out;
}

DeligneReport deligne_membership(const MultiForm& form, int n, int r, double tol) {
  if (form.dim() != 1) throw std::invalid_argument("deligne_membership: form must have scalar coefficients");
  const auto& ctx = *form.context();
  for (const auto& [mask, c] : form.terms())
    if (mask & ctx.parameter_mask()) throw std::invalid_argument("deligne_membership: form has parameter differentials");
  DeligneReport rep;
  rep.n = n;
  rep.r = r;
  const bool low = n <= 2 * r - 1;
  const int degree = low ? n - 1 : n;
  for (const auto& [mask, c] : form.terms()) {
    const TriDegree t = ctx.tri_degree(mask);
    const double v = c.value().max_abs();
    if (t.total() != degree) rep.degree_violation = std::max(rep.degree_violation, v);
    const bool allowed = low ? (t.p < r && t.q < r) : (t.p >= r && t.q >= r);
    if (!allowed) rep.bidegree_violation = std::max(rep.bidegree_violation, v);
  }
  const int twist = low ? r - 1 : r;
  rep.reality_violation = (conjugate(form) - (twist % 2 == 0 ? 1.0 : -1.0) * form).max_abs();
  const double scale = tol * std::max(1.0, form.max_abs());
  rep.member = rep.degree_violation <= scale && rep.bidegree_violation <= scale && rep.reality_violation <= scale;
  if (!low) {
    rep.differential_case = "d";
    rep.differential = d_x(form);
  } else if (n == 2 * r - 1) {
    rep.differential_case = "-2d'd''";
    rep.differential = -2.0 * d_holomorphic(d_antiholomorphic(form));
  } else {
    rep.differential_case = "-pi(d)";
    rep.differential = -1.0 * d_x(form).filter([&](std::uint32_t mask) {
      const TriDegree t = ctx.tri_degree(mask);
      return t.p < r && t.q < r;
    });
  }
  return rep;
}

}  // namespace chernreg
