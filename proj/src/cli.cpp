#include "chernreg/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>

#include "chernreg/campaign.hpp"

namespace chernreg {

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Outcome {
  json report;
  bool converged = true;
  bool passed = true;
};

std::vector<double> parse_reals(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError(flag + ": cannot read \"" + item + "\" as a number");
    }
  }
  if (out.empty()) throw InputError(flag + ": empty list");
  return out;
}

// ---- CSV ----

void flatten(const json& j, const std::string& prefix, json& row) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(*it, prefix.empty() ? it.key() : prefix + "." + it.key(), row);
  } else if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    row[prefix + ".re"] = j[0];
    row[prefix + ".im"] = j[1];
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", row);
  } else {
    row[prefix] = j;
  }
}

std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  return v.dump();
}

std::string to_csv(const json& results) {
  std::vector<json> rows;
  std::vector<std::string> columns;
  for (const auto& r : results) {
    json flat = json::object();
    flatten(r, "", flat);
    for (auto it = flat.begin(); it != flat.end(); ++it)
      if (std::find(columns.begin(), columns.end(), it.key()) == columns.end()) columns.push_back(it.key());
    rows.push_back(flat);
  }
  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c) out += (c ? "," : "") + csv_cell(columns[c]);
  out += "\n";
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out += ",";
      if (r.contains(columns[c])) out += csv_cell(r[columns[c]]);
    }
    out += "\n";
  }
  return out;
}

// ---- commands ----

json config_echo(const QuadratureConfig& q, std::uint64_t seed) {
  return {{"rel_tol", q.rel_tol}, {"abs_tol", q.abs_tol}, {"max_depth", q.max_depth},
          {"rule_degree", q.rule_degree}, {"max_evaluations", q.max_evaluations}, {"seed", seed}};
}

Outcome cmd_dilog(const std::string& ztext) {
  const auto parts = parse_reals(ztext, "--z");
  if (parts.size() > 2) throw InputError("--z: expected re or re,im");
  const cplx z{parts[0], parts.size() == 2 ? parts[1] : 0.0};
  Outcome o;
  o.report["results"] = json::array({{{"z", to_json(z)}, {"D", bloch_wigner(z)}, {"li2", to_json(li2(z))}}});
  return o;
}

Outcome cmd_transgress(std::optional<int> r, const std::string& file, bool borel, std::optional<double> epsilon,
                       const QuadratureConfig& q) {
  GroupTuple t = group_tuple_from_json(read_json_file(file));
  if (r && *r != t.r) throw SchemaError("$.r", "file has r = " + std::to_string(t.r) + ", --r is " + std::to_string(*r));
  if (epsilon) {
    if (*epsilon < 0.0) throw InputError("--epsilon must be >= 0");
    t.epsilon = *epsilon;
  }
  if (t.elements.size() != static_cast<std::size_t>(2 * t.r))
    throw SchemaError("$.g", "expected 2r = " + std::to_string(2 * t.r) + " elements");
  const QuadratureResult res = borel ? borel_cochain(t, q) : chern_cochain(t, q);
  Outcome o;
  o.converged = res.converged;
  json row = to_json(res);
  row["r"] = t.r;
  row["N"] = t.rank();
  row["epsilon"] = t.epsilon;
  row["cochain"] = borel ? "borel" : "chern";
  o.report["results"] = json::array({row});
  return o;
}

SimplexPoint point_from_text(const std::string& text, int r) {
  const auto t = parse_reals(text, "--point");
  const auto n = static_cast<std::size_t>(2 * r - 1);
  SimplexPoint p;
  if (t.size() == n) {
    p.t.push_back(1.0 - std::accumulate(t.begin(), t.end(), 0.0));
    p.t.insert(p.t.end(), t.begin(), t.end());
  } else if (t.size() == n + 1) {
    p.t = t;
  } else {
    throw InputError("--point: expected 2r-1 free or 2r barycentric coordinates");
  }
  if (!p.valid()) throw InputError("--point: not a point of the simplex");
  return p;
}

Outcome cmd_grassmann(std::optional<int> r, const std::string& file, const std::string& point, bool equivalence,
                      const QuadratureConfig& q) {
  const VectorTuple t = vector_tuple_from_json(read_json_file(file));
  if (r && *r != t.r) throw SchemaError("$.r", "file has r = " + std::to_string(t.r) + ", --r is " + std::to_string(*r));
  Outcome o;
  json row = {{"r", t.r}, {"generic", t.generic()}};
  if (!point.empty() || equivalence) {
    const SimplexPoint p = point.empty() ? SimplexPoint::barycenter(static_cast<std::size_t>(2 * t.r - 1))
                                         : point_from_text(point, t.r);
    const cplx num = numerator_coeff(t, p);
    const double den = denominator(t, p);
    row["point"] = p.t;
    row["numerator_coeff"] = to_json(num);
    row["denominator"] = den;
    row["integrand"] = to_json(num / std::pow(den, 2 * t.r - 1));
    if (equivalence) row["equivalence"] = to_json(integrand_equivalence(t, p, default_epsilon_ladder()));
  } else {
    const QuadratureResult res = grassmann_cochain(t, q);
    o.converged = res.converged;
    row.update(to_json(res));
  }
  o.report["results"] = json::array({row});
  return o;
}

Outcome cmd_presentation(const std::string& file, bool sweep, const std::string& pairs, const QuadratureConfig& q) {
  const VectorTuple t = vector_tuple_from_json(read_json_file(file));
  if (t.r != 2) throw SchemaError("$.r", "the presentation needs r = 2 (four vectors in C^2)");
  if (pairs != "ordered" && pairs != "unordered") throw InputError("--pairs: expected ordered or unordered");
  const Quadruple v = {t.vectors[0], t.vectors[1], t.vectors[2], t.vectors[3]};
  const QuadratureResult res =
      dilog_presentation(v, q, pairs == "ordered" ? PairSum::kOrdered : PairSum::kUnordered);
  Outcome o;
  o.converged = res.converged;
  json rows = json::array();
  const std::vector<CrossRatioConvention> conventions =
      sweep ? std::vector<CrossRatioConvention>(kAllCrossRatioConventions.begin(), kAllCrossRatioConventions.end())
            : std::vector<CrossRatioConvention>{CrossRatioConvention::kX};
  for (CrossRatioConvention c : conventions) {
    json row = to_json(res);
    const cplx x = cross_ratio(v, c);
    const double D = bloch_wigner(x);
    row["pairs"] = pairs;
    row["convention"] = std::string(to_string(c));
    row["cross_ratio"] = to_json(x);
    row["D"] = D;
    row["ratio"] = D != 0.0 ? to_json(res.value / (cplx{0.0, 1.0} * D)) : json(nullptr);
    rows.push_back(row);
  }
  o.report["f"] = f_invariant(v);
  o.report["results"] = rows;
  return o;
}

Outcome cmd_cocycle(int r, std::size_t rank, std::size_t trials, std::uint64_t seed, const QuadratureConfig& q) {
  if (r < 1) throw InputError("--r must be >= 1");
  if (rank == 0) rank = static_cast<std::size_t>(r);
  std::mt19937_64 rng(seed);
  Outcome o;
  json rows = json::array();
  for (std::size_t k = 0; k < trials; ++k) {
    GroupTuple t{r, {}, CMatrix::identity(rank), 0.0};
    for (int i = 0; i <= 2 * r; ++i) t.elements.push_back(random_group_element(rng, rank));
    const CocycleDefect d = cocycle_defect(t, q);
    const bool ok = std::abs(d.defect) < 5.0 * d.error_sum;
    o.converged &= d.converged;
    o.passed &= ok;
    json faces = json::array();
    for (const auto& f : d.faces) faces.push_back(to_json(f));
    rows.push_back({{"trial", k},
                    {"defect", to_json(d.defect)},
                    {"abs_defect", std::abs(d.defect)},
                    {"error_sum", d.error_sum},
                    {"threshold", 5.0 * d.error_sum},
                    {"converged", d.converged},
                    {"pass", ok},
                    {"faces", faces}});
  }
  o.report["results"] = rows;
  return o;
}

TransgressionOptions transgression_options(const std::string& coefficients, const std::string& norm) {
  TransgressionOptions t;
  if (coefficients == "corrected")
    t.coefficients = TransgressionCoefficients::kCorrected;
  else if (coefficients != "printed")
    throw InputError("--coefficients: expected printed or corrected");
  if (norm == "single-factor")
    t.norm = ChNormalization::kSingleFactor;
  else if (norm != "printed")
    throw InputError("--normalization: expected printed or single-factor");
  return t;
}

Outcome cmd_verify_th1(std::optional<int> r, std::optional<int> n, const std::string& file, std::uint64_t seed,
                       const std::string& jets, const std::string& family, const TransgressionOptions& topts,
                       std::optional<double> tolerance) {
  TestScene scene;
  if (!file.empty()) {
    scene = scene_from_json(read_json_file(file));
    if (r && *r != scene.r)
      throw SchemaError("$.r", "file has r = " + std::to_string(scene.r) + ", --r is " + std::to_string(*r));
  } else {
    const int w = r.value_or(2);
    if (w < 1 || w > 3) throw InputError("--r: random scenes cover r = 1, 2, 3");
    std::mt19937_64 rng(seed);
    MetricFamily fam;
    try {
      fam = metric_family_from_string(family);
    } catch (const std::exception& e) {
      throw InputError(std::string("--family: ") + e.what());
    }
    scene = w == 1 ? random_scene(rng, 1, 1, 1, 1, fam, 3) : random_scene(rng, w, 2 * w - 1, w == 3 ? 3 : 2, w, fam);
  }
  if (jets != "exact" && jets != "fd") throw InputError("--jets: expected exact or fd");
  const bool fd = jets == "fd";
  std::vector<int> ns;
  if (n) {
    if (*n < 1 || *n > 2 * scene.r - 1) throw InputError("--n must lie in 1..2r-1");
    if (fd && *n == 1 && scene.r >= 2) throw InputError("--n 1 needs jets of order 4; finite differences give 3");
    ns = {*n};
  } else {
    for (int k = fd && scene.r >= 2 ? 2 : 1; k <= 2 * scene.r - 1; ++k) ns.push_back(k);
  }
  const double tol = tolerance.value_or(fd ? 1e-4 : scene.r == 1 ? 1e-9 : scene.r == 2 ? 1e-7 : 1e-6);

  Outcome o;
  o.report["scene"] = to_json(scene);
  o.report["jets"] = jets;
  o.report["coefficients"] = topts.coefficients == TransgressionCoefficients::kPrinted ? "printed" : "corrected";
  o.report["normalization"] = topts.norm == ChNormalization::kPrinted ? "printed" : "single-factor";
  o.report["tolerance"] = tol;
  if (fd) {
    const JetAgreement a = jet_agreement(scene);
    o.report["jet_agreement"] = {{"max_diff_by_degree", a.max_diff}, {"scale", a.scale}, {"agree", a.agree}};
    if (!a.agree) {
      o.passed = false;
      o.report["results"] = json::array();
      return o;
    }
  }
  const SceneForms forms = scene_forms(scene, fd ? JetSource::kFiniteDifference : JetSource::kExact, fd ? 3 : 4);
  json rows = json::array();
  for (int k : ns) {
    const ResidualReport rep = theorem1_residual(forms, scene.r, k, topts);
    json row = to_json(rep);
    row["trivial"] = rep.scale() < 1e-12;
    row["pass"] = rep.residual < tol;
    o.passed &= rep.residual < tol;
    rows.push_back(row);
  }
  o.report["results"] = rows;
  return o;
}

Outcome cmd_campaign(const std::string& suite, const CampaignOptions& copts) {
  std::vector<std::string> names;
  if (suite == "all") {
    names = suite_names();
  } else {
    if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
      throw InputError("unknown suite \"" + suite + "\"");
    names = {suite};
  }
  Outcome o;
  json suites = json::array();
  json rows = json::array();
  for (const auto& name : names) {
    const SuiteReport rep = run_suite(name, copts);
    o.converged &= rep.converged;
    o.passed &= rep.passed;
    json s = rep.summary;
    s["suite"] = rep.suite;
    suites.push_back(s);
    for (auto row : rep.results) {
      row["suite"] = rep.suite;
      rows.push_back(row);
    }
  }
  o.report["suites"] = suites;
  o.report["results"] = rows;
  return o;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Regulator cochains, dilogarithm presentations and transgression checks"};
  app.require_subcommand(1);
  app.fallthrough();

  QuadratureConfig quad;
  std::optional<double> rel_tol;
  quad.abs_tol = 1e-12;
  std::uint64_t seed = 1;
  std::string output;
  bool csv = false;
  bool timing = false;
  app.add_option("--rel-tol", rel_tol,
                 "Quadrature relative tolerance (default: transgress 1e-10, cocycle-test 1e-6, others 1e-5)");
  app.add_option("--abs-tol", quad.abs_tol, "Quadrature absolute tolerance")->capture_default_str();
  app.add_option("--max-depth", quad.max_depth, "Quadrature refinement depth limit")->capture_default_str();
  app.add_option("--rule-degree", quad.rule_degree, "Grundmann-Moller degree (3, 5, 7, 9)")->capture_default_str();
  app.add_option("--seed", seed, "Random seed")->capture_default_str();
  app.add_option("--output", output, "Write the report here instead of stdout");
  app.add_flag("--csv", csv, "Emit the results table as CSV");
  app.add_flag("--timing", timing, "Add wall time to the report (breaks byte-identical output)");

  std::string z;
  auto* dilog = app.add_subcommand("dilog", "Bloch-Wigner D(z) and Li_2(z)");
  dilog->add_option("--z", z, "re,im")->required();

  std::optional<int> r;
  std::string tuple_file;
  bool borel = false;
  std::optional<double> epsilon;
  auto* transgress = app.add_subcommand("transgress", "Chern character cochain of a 2r-tuple of matrices");
  transgress->add_option("--r", r, "Weight");
  transgress->add_option("--tuple", tuple_file, "tuple.json")->required();
  transgress->add_flag("--borel", borel, "Raw odd-trace integral with h = I");
  transgress->add_option("--epsilon", epsilon, "Regularization added to h");

  std::string vectors_file, point;
  bool equivalence = false;
  auto* grassmann = app.add_subcommand("grassmann", "Cochain of 2r vectors through minors");
  grassmann->add_option("--r", r, "Weight");
  grassmann->add_option("--vectors", vectors_file, "vectors.json")->required();
  grassmann->add_option("--point", point, "t1,...,t_{2r-1} (or all 2r barycentric coordinates)");
  grassmann->add_flag("--equivalence", equivalence, "Compare with the regularized trace integrand");

  bool sweep = false;
  std::string pairs = "ordered";
  auto* presentation = app.add_subcommand("dilog-presentation", "Integral presentation of D for four vectors in C^2");
  presentation->add_option("--vectors", vectors_file, "vectors.json with r = 2")->required();
  presentation->add_flag("--sweep-conventions", sweep, "Report all six cross-ratio conventions");
  presentation->add_option("--pairs", pairs, "ordered or unordered pair sum")->capture_default_str();

  int cocycle_r = 2;
  std::size_t rank = 0, trials = 0;
  auto* cocycle = app.add_subcommand("cocycle-test", "Cocycle defect on random (2r+1)-tuples");
  cocycle->add_option("--r", cocycle_r, "Weight")->capture_default_str();
  cocycle->add_option("--rank", rank, "Matrix size (default r)");
  cocycle->add_option("--trials", trials, "Number of tuples (default 10)");

  std::optional<int> n;
  std::string scene_file, jets = "exact", family = "exp-polynomial", coefficients = "printed", norm = "printed";
  std::optional<double> tolerance;
  auto* verify = app.add_subcommand("verify-th1", "Residuals of the transgression identities at a scene point");
  verify->add_option("--r", r, "Weight (random scenes: 1, 2 or 3)");
  verify->add_option("--n", n, "Single n in 1..2r-1 (default all)");
  verify->add_option("--scene", scene_file, "scene.json (default: random scene from --seed)");
  verify->add_option("--jets", jets, "exact or fd")->capture_default_str();
  verify->add_option("--family", family, "Random scene family: exp-polynomial, gram, metric-path")
      ->capture_default_str();
  verify->add_option("--coefficients", coefficients, "printed or corrected")->capture_default_str();
  verify->add_option("--normalization", norm, "printed or single-factor")->capture_default_str();
  verify->add_option("--tolerance", tolerance, "Residual threshold (default by r)");

  std::string suite;
  int campaign_r = 0;
  auto* campaign = app.add_subcommand("campaign", "Property-test suite");
  campaign->add_option("--suite", suite, "Suite name or \"all\"")->required();
  campaign->add_option("--trials", trials, "Trials (default per suite)");
  campaign->add_option("--r", campaign_r, "Restrict to one weight");
  campaign->add_option("--coefficients", coefficients, "th1-residuals: printed or corrected")->capture_default_str();
  campaign->add_option("--normalization", norm, "th1-residuals: printed or single-factor")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  std::string command;
  try {
    // Smooth integrands for transgress; the vertex-singular ones cost ~20M
    // evaluations at 1e-6, more than the invariance checks need.
    quad.rel_tol = rel_tol.value_or(transgress->parsed() ? 1e-10 : cocycle->parsed() ? 1e-6 : 1e-5);
    quad.validate();
    quad.threads = threads_from_environment();
    if (dilog->parsed()) {
      command = "dilog";
      out = cmd_dilog(z);
    } else if (transgress->parsed()) {
      command = "transgress";
      out = cmd_transgress(r, tuple_file, borel, epsilon, quad);
    } else if (grassmann->parsed()) {
      command = "grassmann";
      out = cmd_grassmann(r, vectors_file, point, equivalence, quad);
    } else if (presentation->parsed()) {
      command = "dilog-presentation";
      out = cmd_presentation(vectors_file, sweep, pairs, quad);
    } else if (cocycle->parsed()) {
      command = "cocycle-test";
      out = cmd_cocycle(cocycle_r, rank, trials ? trials : 10, seed, quad);
    } else if (verify->parsed()) {
      command = "verify-th1";
      out = cmd_verify_th1(r, n, scene_file, seed, jets, family, transgression_options(coefficients, norm), tolerance);
    } else {
      command = "campaign";
      CampaignOptions copts;
      copts.seed = seed;
      copts.trials = trials;
      copts.r = campaign_r;
      copts.quadrature = quad;
      copts.transgression = transgression_options(coefficients, norm);
      out = cmd_campaign(suite, copts);
    }
  } catch (const SchemaError& e) {
    std::cerr << "chernreg: " << e.what() << "\n";
    return kExitInput;
  } catch (const InputError& e) {
    std::cerr << "chernreg: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "chernreg: " << e.what() << "\n";
    return kExitInput;
  } catch (const DegenerateConfigurationError& e) {
    std::cerr << "chernreg: " << e.what() << "\n";
    return kExitInput;
  } catch (const DefinitenessError& e) {
    std::cerr << "chernreg: " << e.what() << "\n";
    return kExitInput;
  }

  json report;
  report["schema_version"] = kSchemaVersion;
  report["command"] = command;
  report["config"] = config_echo(quad, seed);
  for (auto it = out.report.begin(); it != out.report.end(); ++it) report[it.key()] = it.value();
  report["converged"] = out.converged;
  report["passed"] = out.passed;
  if (timing) report["wall_time_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const std::string text = csv ? to_csv(report["results"]) : report.dump(2) + "\n";
  if (output.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(output);
    if (!f) {
      std::cerr << "chernreg: cannot write " << output << "\n";
      return kExitInput;
    }
    f << text;
  }
  if (!out.converged) return kExitNotConverged;
  if (!out.passed) return kExitPropertyFailed;
  return kExitOk;
}

}  // namespace chernreg
