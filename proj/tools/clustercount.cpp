// clustercount: point counts of cluster-type varieties over finite fields.
//
// JSON goes to stdout, diagnostics to stderr.
// Exit codes: 0 success, 1 mathematical disagreement, 2 usage, 3 budget.

#include <clustercount/checks.hpp>
#include <clustercount/closedform.hpp>
#include <clustercount/coeffreduce.hpp>
#include <clustercount/enumerate.hpp>
#include <clustercount/qinterp.hpp>
#include <clustercount/recursion.hpp>
#include <clustercount/singular.hpp>
#include <clustercount/treegraph.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace cc = clustercount;
using nlohmann::json;

namespace {

constexpr int kExitDisagree = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

struct RunConfig {
  std::string type;
  int rank = -1;
  std::string tree_file;
  std::string alpha;
  std::string coeff_file;
  std::uint64_t q = 0;
  std::uint64_t p = 0;
  std::uint64_t k = 1;
  std::string method = "all";
  std::uint64_t budget = cc::default_budget();
  unsigned jobs = 0;
  // interpolate
  std::string branch = "generic";
  int degree = -1;
  int held_out = 2;
  std::string fit_method = "recursion";
  bool ascending = false;
  // normalize
  std::string tiling = "auto";
  // check
  std::string suite = "all";
};

struct Variety {
  std::optional<cc::DynkinType> type;
  int rank = 0;
  cc::VarietyInstance instance;
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

cc::FieldSpec field_of(const RunConfig& cfg) {
  if (cfg.q != 0 && cfg.p != 0) throw UsageError("give either --q or --p/--k, not both");
  if (cfg.q != 0) return cc::FieldSpec::of_order(cfg.q);
  if (cfg.p != 0) return cc::FieldSpec::make(cfg.p, cfg.k);
  throw UsageError("a field is required: --q or --p [--k]");
}

Variety variety_of(const RunConfig& cfg, const cc::FieldSpec& F) {
  const bool dyn = !cfg.type.empty();
  const bool file = !cfg.tree_file.empty();
  if (dyn == file) throw UsageError("exactly one of --type/--rank or --tree-file is required");
  if (!cfg.alpha.empty() && !cfg.coeff_file.empty()) throw UsageError("give either --alpha or --coeff-file");
  std::optional<cc::DynkinType> type;
  cc::Forest f;
  std::string name;
  if (dyn) {
    if (cfg.rank < 0) throw UsageError("--rank is required with --type");
    type = cc::parse_dynkin_type(cfg.type);
    f = cc::dynkin(*type, cfg.rank);
    name = cc::dynkin_name(*type, cfg.rank);
  } else {
    f = cc::read_forest_file(cfg.tree_file);
    name = "tree(" + cfg.tree_file + ")";
  }
  cc::CoeffMap c = cc::CoeffMap::ones(F, f.size());
  if (!cfg.coeff_file.empty()) {
    std::ifstream in(cfg.coeff_file);
    if (!in) throw UsageError("cannot open coefficient file " + cfg.coeff_file);
    c = cc::read_coeff_map(in, F, f.size());
  } else {
    c = cc::parse_alpha_list(cfg.alpha, F, f.size());
  }
  return Variety{type, cfg.rank, cc::VarietyInstance{std::move(f), std::move(c), std::nullopt, name}};
}

cc::EnumOptions enum_options(const RunConfig& cfg) {
  cc::EnumOptions o;
  o.budget = cfg.budget;
  o.jobs = cfg.jobs;
  return o;
}

json report_json(const cc::CountReport& r) {
  return {{"variety", r.variety}, {"q", r.q},         {"method", r.method},
          {"count", cc::to_string(r.count)}, {"branch", r.branch}, {"elapsed_ms", r.elapsed_ms}};
}

json elements_json(const cc::FieldSpec& F, const std::vector<cc::code_t>& xs) {
  json a = json::array();
  for (auto x : xs) a.push_back(F.format(x));
  return a;
}

int cmd_count(const RunConfig& cfg) {
  const auto F = field_of(cfg);
  const auto v = variety_of(cfg, F);
  const auto opt = enum_options(cfg);
  auto formula = [&] {
    if (!v.type) throw UsageError("method 'formula' needs a Dynkin --type");
    return cc::formula_count_any(*v.type, v.rank, v.instance.alpha);
  };
  if (cfg.method == "brute") {
    std::cout << report_json(cc::brute_count(v.instance, opt)).dump() << "\n";
  } else if (cfg.method == "recursion") {
    std::cout << report_json(cc::recursive_count(v.instance)).dump() << "\n";
  } else if (cfg.method == "formula") {
    std::cout << report_json(formula()).dump() << "\n";
  } else if (cfg.method == "all") {
    std::vector<cc::CountReport> reps{cc::brute_count(v.instance, opt), cc::recursive_count(v.instance)};
    if (v.type) reps.push_back(formula());
    bool agree = true;
    json counts = json::object();
    double elapsed = 0;
    std::string branch;
    for (const auto& r : reps) {
      agree = agree && r.count == reps.front().count;
      counts[r.method] = cc::to_string(r.count);
      elapsed += r.elapsed_ms;
      if (!r.branch.empty()) branch = r.branch;
    }
    json out = report_json(reps.front());
    out["method"] = "all";
    out["branch"] = branch;
    out["elapsed_ms"] = elapsed;
    out["counts"] = counts;
    out["agree"] = agree;
    std::cout << out.dump() << "\n";
    return agree ? 0 : kExitDisagree;
  } else {
    throw UsageError("unknown method '" + cfg.method + "'");
  }
  return 0;
}

int cmd_singular(const RunConfig& cfg) {
  const auto F = field_of(cfg);
  const auto v = variety_of(cfg, F);
  const auto pts = cc::singular_points(v.instance, enum_options(cfg));
  json list = json::array();
  for (const auto& p : pts) list.push_back({{"x", elements_json(F, p.x)}, {"xp", elements_json(F, p.xp)}});
  std::cout << json{{"variety", v.instance.descriptor()}, {"q", F.q()}, {"count", pts.size()}, {"singular_points", list}}
                   .dump()
            << "\n";
  return 0;
}

int cmd_normalize(const RunConfig& cfg) {
  const auto F = field_of(cfg);
  const auto v = variety_of(cfg, F);
  cc::DominoTiling tiling;
  const std::string mode = cfg.tiling == "auto" ? (v.type ? "dynkin" : "leafy") : cfg.tiling;
  if (mode == "dynkin") {
    if (!v.type) throw UsageError("--tiling dynkin needs a Dynkin --type");
    tiling = cc::dynkin_normal_tiling(*v.type, v.rank);
  } else if (mode == "leafy") {
    tiling = cc::leafy_tiling(v.instance.forest);
  } else {
    throw UsageError("unknown tiling '" + cfg.tiling + "'");
  }
  const auto nf = cc::normalize(v.instance.forest, tiling, v.instance.alpha);
  json dominoes = json::array(), trace = json::array();
  for (auto [a, b] : tiling.dominoes()) dominoes.push_back({a + 1, b + 1});
  for (auto [s, t] : nf.trace) trace.push_back({s + 1, t + 1});
  json out{{"variety", v.instance.descriptor()},
           {"q", F.q()},
           {"tiling", dominoes},
           {"alpha", elements_json(F, nf.alpha.values())},
           {"trace", trace}};
  if (v.type) out["branch"] = cc::formula_count(*v.type, v.rank, nf.alpha).branch;
  std::cout << out.dump() << "\n";
  return 0;
}

int cmd_interpolate(const RunConfig& cfg) {
  if (cfg.type.empty() || cfg.rank < 0) throw UsageError("interpolate needs --type and --rank");
  const auto t = cc::parse_dynkin_type(cfg.type);
  cc::FitOptions fo;
  fo.degree = cfg.degree >= 0 ? cfg.degree : cfg.rank + 1;
  fo.held_out = cfg.held_out;
  fo.method = cfg.fit_method;
  fo.enum_options = enum_options(cfg);
  if (fo.held_out < 2) throw UsageError("--held-out must be at least 2");
  const auto branch = cc::branch_for_policy(t, cfg.rank, cfg.branch);
  json out{{"variety", cc::dynkin_name(t, cfg.rank)}, {"branch", branch}};
  try {
    const auto rep = cc::fit_and_verify(cc::dynkin_branch_builder(t, cfg.rank, cfg.branch), fo);
    json samples = json::array(), held = json::array();
    for (auto& [q, c] : rep.samples) samples.push_back({q, cc::to_string(c)});
    for (auto& h : rep.held_out)
      held.push_back({{"q", h.q}, {"count", cc::to_string(h.count)}, {"residual", h.residual().str()}});
    out["polynomial"] = rep.poly.str(!cfg.ascending);
    out["coefficients"] = rep.poly.coefficient_strings();
    out["samples"] = samples;
    out["held_out"] = held;
    out["skipped"] = rep.skipped;
    out["ok"] = true;
    std::cout << out.dump() << "\n";
    return 0;
  } catch (const cc::Error& e) {
    if (e.kind() != cc::ErrorKind::HeldOutMismatch) throw;
    out["ok"] = false;
    out["error"] = e.what();
    std::cout << out.dump() << "\n";
    return kExitDisagree;
  }
}

int cmd_check(const RunConfig& cfg) {
  const auto all = cc::checks::suites(enum_options(cfg));
  std::vector<std::string> names;
  if (cfg.suite == "all") {
    names = cc::checks::suite_order();
  } else if (all.count(cfg.suite)) {
    names = {cfg.suite};
  } else {
    throw UsageError("unknown suite '" + cfg.suite + "'");
  }
  json results = json::array();
  bool ok = true;
  for (const auto& n : names) {
    const auto r = all.at(n)();
    std::cerr << (r.ok ? "PASS " : "FAIL ") << r.name << " (" << r.cases << " cases, " << r.elapsed_ms << " ms)\n";
    ok = ok && r.ok;
    json j{{"suite", n}, {"name", r.name}, {"ok", r.ok}, {"cases", r.cases}, {"elapsed_ms", r.elapsed_ms}};
    if (!r.ok) j["witness"] = r.witness;
    results.push_back(j);
  }
  std::cout << json{{"suite", cfg.suite}, {"ok", ok}, {"results", results}}.dump() << "\n";
  return ok ? 0 : kExitDisagree;
}

void add_variety_flags(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--type", cfg.type, "Dynkin type (A, D or E)");
  sub->add_option("--rank", cfg.rank, "Dynkin rank");
  sub->add_option("--tree-file", cfg.tree_file, "forest file: one 'u v' edge or 'v' vertex per line");
  sub->add_option("--alpha", cfg.alpha,
                  "coefficients for vertices 1,2,...; integers mod p separated by ',' "
                  "(extension fields: ';' between vertices, ',' between coordinates); missing entries are 1");
  sub->add_option("--coeff-file", cfg.coeff_file, "coefficient file: 'v value' per line");
}

void add_field_flags(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--q", cfg.q, "field order (prime power)");
  sub->add_option("--p", cfg.p, "field characteristic");
  sub->add_option("--k", cfg.k, "extension degree");
}

void add_run_flags(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--budget", cfg.budget, "enumeration budget in elementary steps (n*q^n)");
  sub->add_option("--jobs", cfg.jobs, "worker threads for enumeration (0: all cores)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Point counts of cluster-type varieties over finite fields"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* count = app.add_subcommand("count", "count F_q-points");
  add_variety_flags(count, cfg);
  add_field_flags(count, cfg);
  add_run_flags(count, cfg);
  count->add_option("--method", cfg.method, "brute, recursion, formula or all")
      ->check(CLI::IsMember({"brute", "recursion", "formula", "all"}));

  auto* interp = app.add_subcommand("interpolate", "recover a count polynomial in q");
  interp->add_option("--type", cfg.type, "Dynkin type")->required();
  interp->add_option("--rank", cfg.rank, "Dynkin rank")->required();
  interp->add_option("--branch", cfg.branch, "generic, special, or a branch id");
  interp->add_option("--degree", cfg.degree, "degree bound (default rank+1)");
  interp->add_option("--held-out", cfg.held_out, "number of held-out primes (>= 2)");
  interp->add_option("--count-method", cfg.fit_method, "recursion or brute")
      ->check(CLI::IsMember({"recursion", "brute"}));
  interp->add_flag("--ascending", cfg.ascending, "print the polynomial in ascending degree");
  add_run_flags(interp, cfg);

  auto* sing = app.add_subcommand("singular", "list singular points");
  add_variety_flags(sing, cfg);
  add_field_flags(sing, cfg);
  add_run_flags(sing, cfg);

  auto* norm = app.add_subcommand("normalize", "bring coefficients to normal form");
  add_variety_flags(norm, cfg);
  add_field_flags(norm, cfg);
  norm->add_option("--tiling", cfg.tiling, "auto, dynkin or leafy")
      ->check(CLI::IsMember({"auto", "dynkin", "leafy"}));

  auto* check = app.add_subcommand("check", "run consistency suites");
  check->add_option("--suite", cfg.suite,
                    "all (everything), typeA, typeD, typeE, reduction, yz, fibration, smoothness, epoly, "
                    "interpolation, primepower");
  add_run_flags(check, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (count->parsed()) return cmd_count(cfg);
    if (interp->parsed()) return cmd_interpolate(cfg);
    if (sing->parsed()) return cmd_singular(cfg);
    if (norm->parsed()) return cmd_normalize(cfg);
    if (check->parsed()) return cmd_check(cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const cc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case cc::ErrorKind::BudgetExceeded:
        return kExitBudget;
      case cc::ErrorKind::ReportsViolation:
      case cc::ErrorKind::HeldOutMismatch:
        return kExitDisagree;
      default:
        return kExitUsage;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
