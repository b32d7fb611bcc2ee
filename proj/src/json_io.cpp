#include "chernreg/json_io.hpp"

#include <cmath>
#include <fstream>

namespace chernreg {

SchemaError::SchemaError(const std::string& path, const std::string& what)
    : std::runtime_error("schema error at " + path + ": " + what), path_(path) {}

namespace {

std::string at(const std::string& path, const std::string& key) { return path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw SchemaError(path, "not finite");
  return x;
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
  return j.get<int>();
}

const json& field(const json& j, const std::string& path, const std::string& key) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(at(path, key), "missing");
  return *it;
}

const json& array(const json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  return j;
}

void check_dim(bool ok, const std::string& path, const std::string& what) {
  if (!ok) throw SchemaError(path, what);
}

}  // namespace

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const CMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

json to_json(const CVector& v) {
  json out = json::array();
  for (const cplx& x : v) out.push_back(to_json(x));
  return out;
}

json to_json(const QuadratureResult& q) {
  return {{"value", to_json(q.value)},
          {"error", q.error_estimate},
          {"evaluations", q.evaluations},
          {"converged", q.converged}};
}

json to_json(const ResidualReport& r) {
  return {{"r", r.r},
          {"n", r.n},
          {"residual", r.residual},
          {"relative_residual", r.scale() > 0.0 ? r.residual / r.scale() : 0.0},
          {"dx_norm", r.dx_norm},
          {"dt_norm", r.dt_norm},
          {"rhs_norm", r.rhs_norm}};
}

json to_json(const EquivalenceReport& e) {
  json rows = json::array();
  for (const auto& row : e.rows)
    rows.push_back({{"epsilon", row.epsilon}, {"regularized", to_json(row.regularized)}, {"rel_diff", row.rel_diff}});
  return {{"target", to_json(e.target)},
          {"ladder", rows},
          {"extrapolated", to_json(e.extrapolated)},
          {"extrapolated_rel_diff", e.extrapolated_rel_diff}};
}

cplx complex_from_json(const json& j, const std::string& path) {
  if (j.is_number()) return {number(j, path), 0.0};
  if (!j.is_array() || j.size() != 2) throw SchemaError(path, "expected [re, im]");
  return {number(j[0], at(path, 0)), number(j[1], at(path, 1))};
}

CMatrix matrix_from_json(const json& j, const std::string& path) {
  array(j, path);
  check_dim(!j.empty(), path, "empty matrix");
  const std::size_t rows = j.size();
  const std::size_t cols = array(j[0], at(path, 0)).size();
  check_dim(cols > 0, at(path, 0), "empty row");
  CMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string rp = at(path, i);
    array(j[i], rp);
    check_dim(j[i].size() == cols, rp, "row length " + std::to_string(j[i].size()) + ", expected " + std::to_string(cols));
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = complex_from_json(j[i][c], at(rp, c));
  }
  return m;
}

CVector vector_from_json(const json& j, const std::string& path) {
  array(j, path);
  check_dim(!j.empty(), path, "empty vector");
  CVector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = complex_from_json(j[i], at(path, i));
  return v;
}

GroupTuple group_tuple_from_json(const json& j) {
  const std::string root = "$";
  GroupTuple t;
  t.r = integer(field(j, root, "r"), at(root, "r"));
  check_dim(t.r >= 1, at(root, "r"), "must be >= 1");
  const int N = integer(field(j, root, "N"), at(root, "N"));
  check_dim(N >= 1, at(root, "N"), "must be >= 1");
  const auto n = static_cast<std::size_t>(N);

  const json& h = field(j, root, "h");
  const std::string hp = at(root, "h");
  if (h.is_string()) {
    check_dim(h.get<std::string>() == "identity", hp, "unknown metric \"" + h.get<std::string>() + "\"");
    t.base_metric = CMatrix::identity(n);
  } else if (h.is_object()) {
    const CVector v = vector_from_json(field(h, hp, "rank1"), at(hp, "rank1"));
    check_dim(v.size() == n, at(hp, "rank1"), "length must equal N");
    t.base_metric = CMatrix::outer(v, v);
  } else {
    t.base_metric = matrix_from_json(h, hp);
    check_dim(t.base_metric.rows() == n && t.base_metric.cols() == n, hp, "must be N x N");
    check_dim(t.base_metric.is_hermitian(1e-12), hp, "not hermitian");
  }

  const json& g = array(field(j, root, "g"), at(root, "g"));
  for (std::size_t i = 0; i < g.size(); ++i) {
    const std::string gp = at(at(root, "g"), i);
    t.elements.push_back(matrix_from_json(g[i], gp));
    check_dim(t.elements.back().rows() == n && t.elements.back().cols() == n, gp, "must be N x N");
  }
  if (auto it = j.find("epsilon"); it != j.end()) {
    t.epsilon = number(*it, at(root, "epsilon"));
    check_dim(t.epsilon >= 0.0, at(root, "epsilon"), "must be >= 0");
  }
  try {
    t.validate();
  } catch (const std::exception& e) {
    throw SchemaError(root, e.what());
  }
  return t;
}

VectorTuple vector_tuple_from_json(const json& j) {
  const std::string root = "$";
  VectorTuple t;
  t.r = integer(field(j, root, "r"), at(root, "r"));
  check_dim(t.r >= 1, at(root, "r"), "must be >= 1");
  const json& v = array(field(j, root, "v"), at(root, "v"));
  check_dim(v.size() == static_cast<std::size_t>(2 * t.r), at(root, "v"), "expected 2r vectors");
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string vp = at(at(root, "v"), i);
    t.vectors.push_back(vector_from_json(v[i], vp));
    check_dim(t.vectors.back().size() == static_cast<std::size_t>(t.r), vp, "expected r entries");
  }
  try {
    t.validate();
  } catch (const std::exception& e) {
    throw SchemaError(root, e.what());
  }
  return t;
}

TestScene scene_from_json(const json& j) {
  const std::string root = "$";
  TestScene s;
  s.m = integer(field(j, root, "m"), at(root, "m"));
  s.k = integer(field(j, root, "k"), at(root, "k"));
  const int N = integer(field(j, root, "N"), at(root, "N"));
  check_dim(N >= 1, at(root, "N"), "must be >= 1");
  s.N = static_cast<std::size_t>(N);
  s.r = integer(field(j, root, "r"), at(root, "r"));
  const json& fam = field(j, root, "family");
  check_dim(fam.is_string(), at(root, "family"), "expected a string");
  try {
    s.family = metric_family_from_string(fam.get<std::string>());
  } catch (const std::exception& e) {
    throw SchemaError(at(root, "family"), e.what());
  }

  const std::size_t vars = s.m >= 0 && s.k >= 0 ? static_cast<std::size_t>(2 * s.m + s.k) : 0;
  if (auto it = j.find("poly"); it != j.end()) {
    const std::string pp = at(root, "poly");
    array(*it, pp);
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string tp = at(pp, i);
      const json& t = (*it)[i];
      PolyTerm term;
      const json& e = array(field(t, tp, "exponent"), at(tp, "exponent"));
      check_dim(e.size() == vars, at(tp, "exponent"), "expected 2m + k entries");
      for (std::size_t v = 0; v < e.size(); ++v) {
        term.exponent.push_back(integer(e[v], at(at(tp, "exponent"), v)));
        check_dim(term.exponent.back() >= 0, at(at(tp, "exponent"), v), "negative exponent");
      }
      term.coefficient = matrix_from_json(field(t, tp, "coefficient"), at(tp, "coefficient"));
      check_dim(term.coefficient.rows() == s.N && term.coefficient.cols() == s.N, at(tp, "coefficient"),
                "must be N x N");
      s.poly.push_back(std::move(term));
    }
  }
  if (auto it = j.find("shift"); it != j.end()) s.shift = number(*it, at(root, "shift"));
  if (auto it = j.find("elements"); it != j.end()) {
    const std::string ep = at(root, "elements");
    array(*it, ep);
    for (std::size_t i = 0; i < it->size(); ++i) s.elements.push_back(matrix_from_json((*it)[i], at(ep, i)));
  }

  const json& point = field(j, root, "point");
  const std::string pp = at(root, "point");
  if (s.m > 0) s.z = vector_from_json(field(point, pp, "z"), at(pp, "z"));
  if (s.k > 0) {
    const json& tau = array(field(point, pp, "tau"), at(pp, "tau"));
    for (std::size_t b = 0; b < tau.size(); ++b) s.tau.push_back(number(tau[b], at(at(pp, "tau"), b)));
  }
  try {
    s.validate();
  } catch (const std::exception& e) {
    throw SchemaError(root, e.what());
  }
  return s;
}

json to_json(const TestScene& s) {
  json poly = json::array();
  for (const auto& t : s.poly) poly.push_back({{"exponent", t.exponent}, {"coefficient", to_json(t.coefficient)}});
  json out = {{"m", s.m}, {"k", s.k}, {"N", s.N}, {"r", s.r}, {"family", to_string(s.family)}, {"poly", poly}};
  if (s.family == MetricFamily::kGram) out["shift"] = s.shift;
  if (s.family == MetricFamily::kMetricPath) {
    json el = json::array();
    for (const auto& g : s.elements) el.push_back(to_json(g));
    out["elements"] = el;
  }
  out["point"] = {{"z", to_json(s.z)}, {"tau", s.tau}};
  return out;
}

json read_json_file(const std::string& filename) {
  std::ifstream in(filename);
  if (!in) throw SchemaError("$", "cannot open " + filename);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError("$", std::string("parse error in ") + filename + ": " + e.what());
  }
}

}  // namespace chernreg
