#include "chernreg/simplex_quad.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <future>
#include <map>
#include <mutex>
#include <numeric>
#include <queue>
#include <sstream>
#include <string>

namespace chernreg {

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

void compositions(int total, std::size_t parts, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (cur.size() + 1 == parts) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int a = 0; a <= total; ++a) {
    cur.push_back(a);
    compositions(total - a, parts, cur, out);
    cur.pop_back();
  }
}

// Embedded Grundmann-Moller pair: nodes of the degree 2s+1 rule together with
// its weights and the weights of the degree 2s-1 rule on the same nodes.
struct EmbeddedRule {
  std::vector<std::vector<double>> nodes;  // barycentric, size n+1
  std::vector<double> high;
  std::vector<double> low;
};

double gm_weight(std::size_t n, int s, int i) {
  const int d = 2 * s + 1;
  const double nn = static_cast<double>(n);
  const double sign = (i % 2 == 0) ? 1.0 : -1.0;
  return sign * std::ldexp(1.0, -2 * s) * std::pow(d + nn - 2 * i, d) /
         (factorial(i) * factorial(d + static_cast<int>(n) - i));
}

EmbeddedRule make_embedded_rule(std::size_t n, int degree) {
  const int s = (degree - 1) / 2;
  EmbeddedRule rule;
  for (int i = 0; i <= s; ++i) {
    std::vector<std::vector<int>> betas;
    std::vector<int> cur;
    compositions(s - i, n + 1, cur, betas);
    const double denom = 2.0 * s + 1.0 + static_cast<double>(n) - 2.0 * i;
    const double wh = gm_weight(n, s, i);
    const double wl = (i >= 1 && s >= 1) ? gm_weight(n, s - 1, i - 1) : 0.0;
    for (const auto& b : betas) {
      std::vector<double> x(n + 1);
      for (std::size_t k = 0; k <= n; ++k) x[k] = (2.0 * b[k] + 1.0) / denom;
      rule.nodes.push_back(std::move(x));
      rule.high.push_back(wh);
      rule.low.push_back(wl);
    }
  }
  return rule;
}

void check_rule_args(std::size_t n, int degree) {
  if (n < 1 || n > 5) throw std::invalid_argument("simplex rule: dimension must be in 1..5");
  if (degree < 1 || degree > 9 || degree % 2 == 0)
    throw std::invalid_argument("simplex rule: degree must be odd and at most 9");
}

const EmbeddedRule& cached_rule(std::size_t n, int degree) {
  static std::mutex mu;
  static std::map<std::pair<std::size_t, int>, EmbeddedRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find({n, degree});
  if (it == cache.end()) it = cache.emplace(std::pair{n, degree}, make_embedded_rule(n, degree)).first;
  return it->second;
}

// Children of the Kuhn simplex {1 >= x_1 >= ... >= x_n >= 0} under halving,
// expressed as barycentric coefficients over the parent's vertices.
using ChildTemplate = std::vector<std::vector<std::vector<double>>>;

ChildTemplate make_child_template(std::size_t n) {
  ChildTemplate out;
  std::vector<std::size_t> perm(n);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    do {
      std::vector<std::vector<double>> pts;  // Kuhn coordinates of child vertices
      std::vector<double> x(n);
      for (std::size_t k = 0; k < n; ++k) x[k] = ((mask >> k) & 1u) ? 0.5 : 0.0;
      pts.push_back(x);
      for (std::size_t j = 0; j < n; ++j) {
        x[perm[j]] += 0.5;
        pts.push_back(x);
      }
      bool inside = true;
      for (const auto& p : pts) {
        double prev = 1.0;
        for (std::size_t k = 0; k < n && inside; ++k) {
          if (p[k] > prev) inside = false;
          prev = p[k];
        }
        if (prev < 0.0) inside = false;
      }
      if (!inside) continue;
      std::vector<std::vector<double>> bary;
      for (const auto& p : pts) {
        std::vector<double> lam(n + 1);
        for (std::size_t k = 0; k <= n; ++k) {
          const double xk = k == 0 ? 1.0 : p[k - 1];
          const double xk1 = k == n ? 0.0 : p[k];
          lam[k] = xk - xk1;
        }
        bary.push_back(std::move(lam));
      }
      out.push_back(std::move(bary));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return out;
}

const ChildTemplate& cached_template(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, ChildTemplate> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_child_template(n)).first;
  return it->second;
}

SimplexPoint map_point(const SubSimplex& s, const std::vector<double>& lam) {
  const std::size_t n = s.dimension();
  SimplexPoint p;
  p.t.assign(n + 1, 0.0);
  for (std::size_t k = 0; k <= n; ++k) {
    if (lam[k] == 0.0) continue;
    for (std::size_t c = 0; c <= n; ++c) p.t[c] += lam[k] * s.vertices[k].t[c];
  }
  return p;
}

bool touches_original_vertex(const SubSimplex& s) {
  for (const auto& v : s.vertices)
    for (double x : v.t)
      if (x == 1.0) return true;
  return false;
}

std::string describe(const SimplexPoint& p) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (std::size_t i = 0; i < p.t.size(); ++i) os << (i ? ", " : "") << p.t[i];
  os << ")";
  return os.str();
}

struct LeafEstimate {
  cplx high{};
  cplx low{};
};

LeafEstimate evaluate_leaf(const SimplexIntegrand& f, const SubSimplex& s, const EmbeddedRule& rule,
                           double scale) {
  LeafEstimate est;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const SimplexPoint p = map_point(s, rule.nodes[q]);
    const cplx v = f(p);
    if (std::isnan(v.real()) || std::isnan(v.imag()))
      throw QuadratureError("integrand returned NaN at t = " + describe(p));
    est.high += rule.high[q] * v;
    est.low += rule.low[q] * v;
  }
  est.high *= scale;
  est.low *= scale;
  return est;
}

struct Leaf {
  SubSimplex simplex;
  std::size_t piece = 0;
  std::vector<std::uint8_t> path;
  cplx value{};
  double error = 0.0;
  bool alive = true;
};

}  // namespace

bool SimplexPoint::valid() const {
  if (t.size() < 2) return false;
  double s = 0.0;
  for (double x : t) {
    if (!(x >= 0.0) || !std::isfinite(x)) return false;
    s += x;
  }
  return std::abs(s - 1.0) <= 1e-14 * static_cast<double>(t.size());
}

SimplexPoint SimplexPoint::barycenter(std::size_t n) {
  return SimplexPoint{std::vector<double>(n + 1, 1.0 / static_cast<double>(n + 1))};
}

SimplexPoint SimplexPoint::vertex(std::size_t n, std::size_t k) {
  SimplexPoint p{std::vector<double>(n + 1, 0.0)};
  p.t.at(k) = 1.0;
  return p;
}

double SubSimplex::volume() const {
  const std::size_t n = dimension();
  std::vector<std::vector<double>> a(n, std::vector<double>(n));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t c = 0; c < n; ++c) a[k][c] = vertices[k + 1].t[c + 1] - vertices[0].t[c + 1];
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
  return std::abs(d) / factorial(static_cast<int>(n));
}

SubSimplex SubSimplex::standard(std::size_t n) {
  SubSimplex s;
  for (std::size_t k = 0; k <= n; ++k) s.vertices.push_back(SimplexPoint::vertex(n, k));
  return s;
}

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw std::invalid_argument("quadrature tolerances must be positive");
  if (max_depth > 40) throw std::invalid_argument("max_depth must be at most 40");
  check_rule_args(1, rule_degree);
  if (rule_degree < 3) throw std::invalid_argument("rule_degree must be at least 3 for the embedded estimate");
}

std::vector<QuadratureNode> base_rule(std::size_t n, int degree) {
  check_rule_args(n, degree);
  const EmbeddedRule& rule = cached_rule(n, degree);
  std::vector<QuadratureNode> out;
  out.reserve(rule.nodes.size());
  for (std::size_t q = 0; q < rule.nodes.size(); ++q)
    out.push_back(QuadratureNode{SimplexPoint{rule.nodes[q]}, rule.high[q]});
  return out;
}

std::vector<SubSimplex> subdivide(const SubSimplex& s) {
  const std::size_t n = s.dimension();
  if (n < 1 || n > 5) throw std::invalid_argument("subdivide: dimension must be in 1..5");
  std::vector<SubSimplex> children;
  for (const auto& child : cached_template(n)) {
    SubSimplex c;
    c.depth = s.depth + 1;
    for (const auto& lam : child) c.vertices.push_back(map_point(s, lam));
    children.push_back(std::move(c));
  }
  return children;
}

unsigned threads_from_environment() {
  if (const char* env = std::getenv("CHERNREG_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && v <= 256) return static_cast<unsigned>(v);
  }
  return 1;
}

namespace {

// Worst-first refinement over several integrands on the standard simplex,
// sharing one heap and one budget. The result is their sum.
QuadratureResult integrate_pieces(const std::vector<SimplexIntegrand>& pieces, std::size_t n,
                                  const QuadratureConfig& config) {
  config.validate();
  check_rule_args(n, config.rule_degree);
  const EmbeddedRule& rule = cached_rule(n, config.rule_degree);
  const double children_per_split = std::ldexp(1.0, static_cast<int>(n));

  QuadratureResult result;
  std::vector<Leaf> leaves;

  auto scale_for = [&](std::size_t depth) {
    // Every child has 2^-n of its parent's volume; rule weights already
    // integrate over a simplex of volume 1/n!.
    return std::pow(children_per_split, -static_cast<double>(depth));
  };

  auto evaluate_many = [&](const std::vector<SubSimplex>& simplices, std::size_t piece) {
    const SimplexIntegrand& f = pieces[piece];
    std::vector<LeafEstimate> est(simplices.size());
    const unsigned threads = std::max(1u, config.threads);
    if (threads == 1 || simplices.size() == 1) {
      for (std::size_t c = 0; c < simplices.size(); ++c)
        est[c] = evaluate_leaf(f, simplices[c], rule, scale_for(simplices[c].depth));
    } else {
      std::vector<std::future<void>> jobs;
      const std::size_t workers = std::min<std::size_t>(threads, simplices.size());
      for (std::size_t w = 0; w < workers; ++w) {
        jobs.push_back(std::async(std::launch::async, [&, w] {
          for (std::size_t c = w; c < simplices.size(); c += workers)
            est[c] = evaluate_leaf(f, simplices[c], rule, scale_for(simplices[c].depth));
        }));
      }
      for (auto& j : jobs) j.get();
    }
    result.evaluations += simplices.size() * rule.nodes.size();
    return est;
  };

  using HeapItem = std::pair<double, std::size_t>;
  auto cmp = [](const HeapItem& a, const HeapItem& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second > b.second;
  };
  std::priority_queue<HeapItem, std::vector<HeapItem>, decltype(cmp)> heap(cmp);

  cplx running_value{};
  double running_error = 0.0;

  auto add_leaf = [&](SubSimplex s, std::size_t piece, std::vector<std::uint8_t> path, const LeafEstimate& e) {
    Leaf leaf{std::move(s), piece, std::move(path), e.high, std::abs(e.high - e.low), true};
    running_value += leaf.value;
    running_error += leaf.error;
    heap.push({leaf.error, leaves.size()});
    leaves.push_back(std::move(leaf));
  };

  for (std::size_t p = 0; p < pieces.size(); ++p) {
    SubSimplex root = SubSimplex::standard(n);
    const auto est = evaluate_many({root}, p);
    // Two path bytes keep the tree order well defined for many pieces.
    add_leaf(std::move(root), p, {static_cast<std::uint8_t>(p >> 8), static_cast<std::uint8_t>(p & 0xff)},
             est.front());
  }

  // Order-fixed reduction: leaves in depth-first tree order.
  auto finalize = [&] {
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < leaves.size(); ++i)
      if (leaves[i].alive) order.push_back(i);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return leaves[a].path < leaves[b].path; });
    CompensatedSum re, im, err;
    for (std::size_t i : order) {
      re.add(leaves[i].value.real());
      im.add(leaves[i].value.imag());
      err.add(leaves[i].error);
    }
    result.value = {re.value(), im.value()};
    result.error_estimate = err.value();
    running_value = result.value;
    running_error = result.error_estimate;
    return result.error_estimate <= std::max(config.abs_tol, config.rel_tol * std::abs(result.value));
  };

  std::size_t splits = 0;
  while (true) {
    const double tol = std::max(config.abs_tol, config.rel_tol * std::abs(running_value));
    if (running_error <= tol && finalize()) {
      result.converged = true;
      return result;
    }
    if (heap.empty() || result.evaluations >= config.max_evaluations) break;
    const std::size_t id = heap.top().second;
    heap.pop();
    const Leaf& parent = leaves[id];
    const std::size_t limit = config.max_depth + (touches_original_vertex(parent.simplex) ? 10 : 0);
    if (parent.simplex.depth >= limit) continue;  // stays a leaf, no longer refinable

    std::vector<SubSimplex> kids = subdivide(parent.simplex);
    const std::size_t piece = leaves[id].piece;
    const auto est = evaluate_many(kids, piece);
    running_value -= leaves[id].value;
    running_error -= leaves[id].error;
    leaves[id].alive = false;
    const std::vector<std::uint8_t> parent_path = leaves[id].path;
    for (std::size_t c = 0; c < kids.size(); ++c) {
      auto path = parent_path;
      path.push_back(static_cast<std::uint8_t>(c));
      add_leaf(std::move(kids[c]), piece, std::move(path), est[c]);
    }
    if (++splits % 1024 == 0) {
      running_value = {};
      running_error = 0.0;
      for (const auto& l : leaves)
        if (l.alive) {
          running_value += l.value;
          running_error += l.error;
        }
    }
  }
  finalize();
  result.converged = false;
  return result;
}

}  // namespace

QuadratureResult integrate(const SimplexIntegrand& f, std::size_t n, const QuadratureConfig& config) {
  return integrate_pieces({f}, n, config);
}

QuadratureResult integrate_vertex_singular(const SimplexIntegrand& f, std::size_t n, const QuadratureConfig& config) {
  config.validate();
  check_rule_args(n, config.rule_degree);
  if (n < 2) return integrate(f, n, config);

  // Pieces: the n+1 corner children {t_i >= 1/2} of one Kuhn split, each in
  // radial coordinates, and the remaining children as they are.
  std::vector<SimplexIntegrand> pieces;
  for (std::size_t i = 0; i <= n; ++i) {
    // t_i = 1 - rho, t_j = rho w_j (j != i), dt = rho^(n-1) drho dw, rho = sigma/2.
    // The prism [0,1] x Delta^(n-1) in (sigma, w) is cut into n simplices
    // conv(a_0..a_k, b_k..b_{n-1}), a_j = (0, e_j), b_j = (1, e_j), each of
    // the standard volume.
    for (std::size_t k = 0; k < n; ++k)
      pieces.push_back([&f, n, i, k](const SimplexPoint& x) -> cplx {
        double sigma = 0.0;
        for (std::size_t j = k + 1; j <= n; ++j) sigma += x.t[j];
        const double rho = 0.5 * sigma;
        SimplexPoint t;
        t.t.assign(n + 1, 0.0);
        t.t[i] = 1.0 - rho;
        for (std::size_t m = 0; m < n; ++m) {
          const double w = m < k ? x.t[m] : m == k ? x.t[k] + x.t[k + 1] : x.t[m + 1];
          t.t[m < i ? m : m + 1] = rho * w;
        }
        if (rho == 0.0) return 0.0;
        return 0.5 * std::pow(rho, static_cast<double>(n - 1)) * f(t);
      });
  }
  const double inner_scale = std::ldexp(1.0, -static_cast<int>(n));
  for (const auto& child : subdivide(SubSimplex::standard(n))) {
    if (touches_original_vertex(child)) continue;
    pieces.push_back([&f, child, inner_scale](const SimplexPoint& x) { return inner_scale * f(map_point(child, x.t)); });
  }

  return integrate_pieces(pieces, n, config);
}

}  // namespace chernreg
