#include "abelext/cohomology.hpp"
#include "abelext/compose.hpp"
#include "abelext/error.hpp"
#include "abelext/ext_group.hpp"
#include "abelext/module_bridge.hpp"
#include "abelext/oracles.hpp"
#include "abelext/relative.hpp"
#include "abelext/workspace.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace abelext;
using json = nlohmann::ordered_json;

namespace {

struct Options {
  std::string verb, path;
  std::vector<std::string> args;
  std::vector<std::string> algebras;
  std::string module, over;
  std::string theta = "top", psi = "top";
  int depth = 2, arity = 3, max_dim = 1, jobs = 1;
  long cap = 0;
  bool oracle = false, as_json = false, no_meta = false;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

auto to_json(const Vec &v) -> json {
  json a = json::array();
  for (auto x : v) a.push_back(x);
  return a;
}

auto to_json(const std::vector<int> &v) -> json {
  json a = json::array();
  for (auto x : v) a.push_back(x);
  return a;
}

auto blocks_json(const Congruence &c) -> json {
  json a = json::array();
  for (const auto &b : c.blocks()) a.push_back(to_json(b));
  return a;
}

auto parse_congruence(const std::string &text, const FiniteAlgebra &A) -> Congruence {
  if (text == "top") return Congruence::top(A.size);
  if (text == "bot") return Congruence::bottom(A.size);
  // generator pairs a-b separated by commas
  std::vector<std::pair<int, int>> pairs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto dash = item.find('-');
    if (dash == std::string::npos) throw UsageError("congruence pairs are written a-b: '" + item + "'");
    int a = 0, b = 0;
    try {
      a = std::stoi(item.substr(0, dash));
      b = std::stoi(item.substr(dash + 1));
    } catch (const std::exception &) {
      throw UsageError("congruence pairs are written a-b: '" + item + "'");
    }
    if (a < 0 || b < 0 || a >= A.size || b >= A.size) throw Error(ErrorKind::Shape, "congruence generator outside the algebra");
    pairs.emplace_back(a, b);
  }
  return cg_generate(A, pairs);
}

class Runner {
public:
  Runner(const Options &o, Workspace w) : o_(o), w_(std::move(w)) {}

  auto run() -> json {
    const auto &v = o_.verb;
    if (v == "validate") return validate();
    if (v == "congruences") return congruences();
    if (v == "commutator") return commutator_verb();
    if (v == "difference-check") return difference_check();
    if (v == "abelianize") return abelianize();
    if (v == "free-abelian") return free_abelian();
    if (v == "ext-group") return ext_group_verb();
    if (v == "factor-set") return factor_set_verb();
    if (v == "build-extension") return build_extension();
    if (v == "equivalent") return equivalent();
    if (v == "pullback") return pullback_verb();
    if (v == "pushforward") return pushforward_verb();
    if (v == "baer-sum") return baer_sum_verb();
    if (v == "outer-product") return outer_product_verb();
    if (v == "module-bridge") return module_bridge();
    if (v == "cohomology") return cohomology_verb();
    if (v == "relative-cohomology") return relative_verb();
    if (v == "oracle") return oracle_verb();
    throw UsageError("unknown verb '" + v + "'");
  }

private:
  const Options &o_;
  Workspace w_;

  auto arg(size_t i, const char *what) const -> const std::string & {
    if (i >= o_.args.size()) throw UsageError(std::string("missing argument: ") + what);
    return o_.args[i];
  }
  auto int_arg(size_t i, const char *what) const -> long {
    try {
      return std::stol(arg(i, what));
    } catch (const std::invalid_argument &) {
      throw UsageError(std::string("expected an integer for ") + what);
    }
  }
  auto algebra() const -> const FiniteAlgebra & {
    if (o_.algebras.empty()) throw UsageError("this verb needs -a ALGEBRA");
    return w_.algebra(o_.algebras.front());
  }
  auto module() const -> const AbOveralgebra & {
    if (o_.module.empty()) throw UsageError("this verb needs -m MODULE");
    return w_.abov(o_.module);
  }
  auto pointed() const -> const PointedOveralgebra & {
    if (o_.over.empty()) throw UsageError("this verb needs -q OVERALGEBRA");
    return w_.pov(o_.over);
  }
  auto pointed_or_null() const -> const PointedOveralgebra * { return o_.over.empty() ? nullptr : &w_.pov(o_.over); }
  auto variety_of(const std::string &name) const -> const VarietyPresentation & { return w_.variety(name); }
  auto cap_or(long fallback) const -> long { return o_.cap > 0 ? o_.cap : fallback; }

  auto difference_term(const VarietyPresentation &V) const -> const Term & {
    if (!V.difference_term) throw Error(ErrorKind::Invariant, "variety '" + V.name + "' has no difference term");
    return *V.difference_term;
  }

  static auto cochain_json(const Cochain1 &f, const AbOveralgebra &M) -> json { return to_json(CellLayout(M).flatten(f)); }

  auto classify_json(const Extension &X, const VarietyPresentation &V) const -> json {
    auto G = ext_group(X.M, V);
    return to_json(G.classify(X));
  }

  auto extension_json(const Extension &X, const VarietyPresentation &V) const -> json {
    json j;
    auto rep = validate_extension(X, V);
    j["valid"] = rep.valid;
    if (!rep.valid) j["failed_clause"] = rep.clause;
    j["size"] = X.E.size;
    if (rep.valid) j["class"] = classify_json(X, V);
    j["dsl"] = render_algebra(X.E) + "\n" + render_extension(X);
    return j;
  }

  // ---- verbs ----

  auto validate() -> json {
    json j;
    json failures = json::array();
    for (const auto &[n, a] : w_.algebras) {
      auto r = check_identities(a, variety_of(a.variety));
      if (!r.holds) failures.push_back({{"entity", n}, {"reason", "identity " + std::to_string(r.identity) + " fails"}});
    }
    for (const auto &[n, m] : w_.abovs)
      if (!totally_in(m, variety_of(m.variety)).holds) failures.push_back({{"entity", n}, {"reason", "not totally in its variety"}});
    for (const auto &[n, p] : w_.povs)
      if (!totally_in(p, variety_of(p.variety)).holds) failures.push_back({{"entity", n}, {"reason", "not totally in its variety"}});
    for (const auto &[n, x] : w_.extensions) {
      auto r = validate_extension(x, variety_of(x.M.variety));
      if (!r.valid) failures.push_back({{"entity", n}, {"reason", r.clause}});
    }
    j["varieties"] = w_.varieties.size();
    j["algebras"] = w_.algebras.size();
    j["overalgebras"] = w_.abovs.size();
    j["pointed_overalgebras"] = w_.povs.size();
    j["homomorphisms"] = w_.homs.size();
    j["abelian_homomorphisms"] = w_.abhoms.size();
    j["extensions"] = w_.extensions.size();
    j["valid"] = failures.empty();
    j["failures"] = failures;
    if (!failures.empty()) throw Error(ErrorKind::Invariant, "validation failed: " + failures.dump());
    return j;
  }

  auto congruences() -> json {
    const auto &A = algebra();
    auto L = all_congruences(A, o_.cap > 0 ? std::optional<int>(static_cast<int>(o_.cap)) : std::nullopt);
    json list = json::array();
    for (const auto &c : L.elements) list.push_back(blocks_json(c));
    return {{"algebra", A.name}, {"count", L.elements.size()}, {"modular", is_modular(L)}, {"congruences", list}};
  }

  auto commutator_verb() -> json {
    const auto &A = algebra();
    auto t = parse_congruence(o_.theta, A), p = parse_congruence(o_.psi, A);
    auto c = commutator(A, t, p);
    return {{"algebra", A.name},
            {"theta", blocks_json(t)},
            {"psi", blocks_json(p)},
            {"commutator", blocks_json(c)},
            {"blocks", c.num_blocks()}};
  }

  auto difference_check() -> json {
    if (o_.algebras.empty()) throw UsageError("difference-check needs at least one -a ALGEBRA");
    std::vector<FiniteAlgebra> algs;
    for (const auto &n : o_.algebras) algs.push_back(w_.algebra(n));
    const auto &V = variety_of(algs.front().variety);
    const auto &d = difference_term(V);
    auto r = verify_difference_term(d, algs);
    json j{{"term", term_to_string(d, V.signature)}, {"algebras", o_.algebras}, {"passed", r.passed}};
    if (!r.passed) {
      j["algebra"] = r.algebra;
      j["condition"] = r.condition;
      j["witness"] = to_json(r.witness);
    }
    return j;
  }

  static auto fibers_json(const AbOveralgebra &M) -> json {
    json a = json::array();
    for (const auto &g : M.groups) a.push_back(to_json(g.moduli));
    return a;
  }

  auto abelianize() -> json {
    const auto &P = pointed();
    auto R = abelianize_pointed(P, difference_term(variety_of(P.variety)));
    if (R.module.name.empty()) R.module.name = P.name + "_ab";
    return {{"overalgebra", P.name}, {"fibers", fibers_json(R.module)}, {"dsl", render_abov(R.module)}};
  }

  auto free_abelian() -> json {
    const auto &P = pointed();
    auto R = free_abelian_on_pointed(P, difference_term(variety_of(P.variety)));
    if (R.module.name.empty()) R.module.name = P.name + "_free";
    return {{"overalgebra", P.name},
            {"fibers", fibers_json(R.module)},
            {"commutator", blocks_json(R.commutator)},
            {"dsl", render_abov(R.module)}};
  }

  auto ext_group_verb() -> json {
    const auto &M = module();
    if (!o_.algebras.empty() && !(algebra() == M.base))
      throw Error(ErrorKind::Mismatch, "module '" + M.name + "' does not lie over algebra '" + algebra().name + "'");
    const auto &V = variety_of(M.variety);
    json j{{"algebra", M.base.name}, {"module", M.name}, {"variety", V.name}};
    const auto *Q = pointed_or_null();
    std::optional<ExtGroup> holder;
    if (Q) {
      j["overalgebra"] = Q->name;
      holder = ext_of_overalgebra(*Q, M, V).ext;
    } else {
      holder = ext_group(M, V);
    }
    const auto &G = *holder;
    j["invariant_factors"] = to_json(G.invariant_factors());
    j["order"] = to_string(G.order());
    j["constraint_rows"] = G.constraint_rows;
    j["distinct_rows"] = G.distinct_rows;
    json gens = json::array();
    for (const auto &g : G.generators) gens.push_back(cochain_json(g, G.M));
    j["generators"] = gens;
    if (o_.oracle) {
      if (Q) throw UsageError("--oracle is available for ext-group without -q");
      auto r = oracle::ext_by_enumeration(M, V, cap_or(1L << 20));
      Vec f(r.invariant_factors.begin(), r.invariant_factors.end());
      j["oracle"] = {{"method", r.method}, {"invariant_factors", to_json(f)}, {"order", r.order}, {"enumerated", r.enumerated},
                     {"agrees", f == G.invariant_factors()}};
    }
    return j;
  }

  auto factor_set_verb() -> json {
    const auto &X = w_.extension(arg(0, "EXTENSION"));
    const auto &V = variety_of(X.M.variety);
    auto s = canonical_section(X);
    auto f = factor_set(X, s);
    auto fs = is_factor_set(f, X.M, V);
    json j{{"extension", X.name}, {"section", to_json(s)}, {"factor_set", cochain_json(f, X.M)}, {"is_factor_set", fs.holds}};
    if (fs.holds) j["class"] = to_json(ext_group(X.M, V).classify_cochain(f));
    return j;
  }

  auto build_extension() -> json {
    const auto &M = module();
    const auto &V = variety_of(M.variety);
    auto G = ext_group(M, V);
    Vec coords;
    for (size_t i = 0; i < o_.args.size(); ++i) coords.push_back(int_arg(i, "class coordinate"));
    if (coords.size() != G.invariant_factors().size())
      throw UsageError("expected " + std::to_string(G.invariant_factors().size()) + " class coordinates");
    auto X = G.representative(coords, "E_" + M.name);
    X.E.name = "E_" + M.name + "_alg";
    json j{{"module", M.name}, {"coordinates", to_json(coords)}};
    j.update(extension_json(X, V));
    return j;
  }

  auto equivalent() -> json {
    const auto &X1 = w_.extension(arg(0, "EXTENSION"));
    const auto &X2 = w_.extension(arg(1, "EXTENSION"));
    auto g = are_equivalent(X1, X2);
    json j{{"first", X1.name}, {"second", X2.name}, {"equivalent", g.has_value()}};
    j["gamma"] = g ? to_json(*g) : json(nullptr);
    if (same_structure(X1.M, X2.M)) {
      const auto &V = variety_of(X1.M.variety);
      j["classes"] = {classify_json(X1, V), classify_json(X2, V)};
    }
    return j;
  }

  auto pullback_verb() -> json {
    const auto &X = w_.extension(arg(0, "EXTENSION"));
    const auto &g = w_.hom(arg(1, "HOMOMORPHISM"));
    if (g.cod != X.M.base.name) throw Error(ErrorKind::Mismatch, "homomorphism '" + g.name + "' does not land on the base of '" + X.name + "'");
    const auto &A2 = w_.algebra(g.dom);
    auto P = pullback(X, A2, g.map, X.name + "_" + g.name);
    P.E.name = P.name + "_alg";
    P.M.name = X.M.name + "_" + g.name;
    json j{{"extension", X.name}, {"along", g.name}};
    j.update(extension_json(P, variety_of(X.M.variety)));
    return j;
  }

  auto pushforward_verb() -> json {
    const auto &X = w_.extension(arg(0, "EXTENSION"));
    const auto &h = w_.abhom(arg(1, "ABELIAN HOMOMORPHISM"));
    if (h.dom != X.M.name) throw Error(ErrorKind::Mismatch, "'" + h.name + "' does not start at the coefficients of '" + X.name + "'");
    const auto &N = w_.abov(h.cod);
    auto P = pushforward(X, h, N, h.name + "_" + X.name);
    P.E.name = P.name + "_alg";
    json j{{"extension", X.name}, {"along", h.name}};
    j.update(extension_json(P, variety_of(N.variety)));
    return j;
  }

  auto baer_sum_verb() -> json {
    const auto &X1 = w_.extension(arg(0, "EXTENSION"));
    const auto &X2 = w_.extension(arg(1, "EXTENSION"));
    if (!same_structure(X1.M, X2.M)) throw Error(ErrorKind::Mismatch, "Baer sum needs extensions by the same coefficients");
    auto G = ext_group(X1.M, variety_of(X1.M.variety));
    auto B = baer_sum(X1, X2, G);
    return {{"first", X1.name},
            {"second", X2.name},
            {"classes", {to_json(G.classify(X1)), to_json(G.classify(X2))}},
            {"by_cochains", to_json(B.by_cochains)},
            {"by_pipeline", to_json(B.by_pipeline)},
            {"agree", B.by_cochains == B.by_pipeline},
            {"restriction_matches", B.restriction_matches}};
  }

  auto outer_product_verb() -> json {
    if (o_.args.empty()) throw UsageError("outer-product needs module names");
    std::vector<AbOveralgebra> Ms;
    for (const auto &n : o_.args) Ms.push_back(w_.abov(n));
    auto P = outer_product(Ms, Ms.front().base.sig);
    if (P.name.empty()) P.name = "outer";
    P.base.name = P.name + "_base";
    return {{"factors", o_.args}, {"base_size", P.base.size}, {"fibers", fibers_json(P)}, {"dsl", render_abov(P)}};
  }

  auto module_bridge() -> json {
    const auto &X = w_.extension(arg(0, "EXTENSION"));
    auto S = module_forward(X);
    auto back = module_backward(S, X.M, X.name + "_back");
    bool round = back == X || are_equivalent(X, back).has_value();
    auto S2 = module_forward(back);
    std::vector<int> id(S.E.size);
    for (int e = 0; e < S.E.size; ++e) id[e] = e;
    return {{"extension", X.name},
            {"kernel", to_json(S.kernel.moduli)},
            {"iota", to_json(S.iota)},
            {"pi", to_json(S.pi)},
            {"chi_round_trip", round},
            {"iota_round_trip", is_module_equivalence(S, S2, id)}};
  }

  auto params() const -> TruncationParams {
    TruncationParams p;
    p.depth = o_.depth;
    p.arity = o_.arity;
    p.max_dim = o_.max_dim;
    p.jobs = o_.jobs;
    if (o_.cap > 0) p.cell_cap = o_.cap;
    return p;
  }

  static auto params_json(const TruncationParams &p) -> json {
    return {{"depth", p.depth}, {"arity", p.arity}, {"max_dim", p.max_dim}, {"cell_cap", p.cell_cap}, {"unknown_cap", p.unknown_cap}};
  }

  auto cohomology_verb() -> json {
    const auto &M = module();
    const auto &V = variety_of(M.variety);
    const auto *Q = pointed_or_null();
    auto r = cohomology(V, M, Q, params());
    json j{{"module", M.name}, {"variety", V.name}, {"overalgebra", Q ? json(Q->name) : json(nullptr)}, {"params", params_json(r.params)}};
    j["base_size"] = r.base_size;
    j["pool"] = {{"terms", r.pool_terms}, {"term_classes", r.term_classes}, {"level_classes", r.level_classes}, {"identity_instances", r.identity_seeds}};
    j["cell_counts"] = r.cell_counts;
    json checks = json::array();
    for (const auto &c : r.checks)
      checks.push_back({{"dim", c.dim}, {"cells", c.cells}, {"simplicial_failures", c.simplicial_failures}, {"boundary_failures", c.boundary_failures}});
    j["complex_checks"] = checks;
    json groups = json::array();
    for (const auto &g : r.groups) {
      json x{{"dim", g.dim}, {"status", g.status}, {"cells", g.cells}, {"classes", g.classes}, {"unknowns", g.unknowns}};
      if (g.computed) {
        x["rows"] = g.rows;
        x["distinct_rows"] = g.distinct_rows;
        x["cocycle_order"] = to_string(g.cocycles.order());
        x["coboundary_order"] = to_string(g.coboundaries.order());
        x["invariant_factors"] = to_json(g.invariant_factors());
      }
      x["truncated"] = true;
      groups.push_back(x);
    }
    j["cohomology"] = groups;
    j["h1_exact"] = to_json(r.h1_exact);
    j["h1_agrees"] = r.h1_agrees ? json(*r.h1_agrees) : json(nullptr);
    j["warnings"] = r.warnings;
    return j;
  }

  auto relative_verb() -> json {
    const auto &V = w_.variety(arg(0, "VARIETY"));
    const auto &Vp = w_.variety(arg(1, "SMALLER VARIETY"));
    const auto &M = module();
    auto r = relative_cohomology(V, Vp, M, pointed_or_null(), params());
    json checks = json::array();
    for (const auto &c : r.checks) checks.push_back({{"check", c.name}, {"holds", c.holds}, {"detail", c.detail}});
    json img = json::array();
    for (const auto &v : r.iota_h1) img.push_back(to_json(v));
    return {{"larger", r.larger},
            {"smaller", r.smaller},
            {"module", M.name},
            {"params", params_json(r.params)},
            {"classes", {{"larger", r.classes_v}, {"smaller", r.classes_vp}, {"relative", r.classes_rel}}},
            {"unknowns", {{"larger", r.unknowns_v}, {"smaller", r.unknowns_vp}, {"relative", r.unknowns_rel}}},
            {"h0_smaller", to_json(r.h0_vp)},
            {"h0_larger", to_json(r.h0_v)},
            {"h1_smaller", to_json(r.h1_vp)},
            {"h1_larger", to_json(r.h1_v)},
            {"h1_relative", to_json(r.h1_rel)},
            {"h1_map", img},
            {"checks", checks},
            {"exact", r.ok()},
            {"warnings", r.warnings}};
  }

  auto oracle_verb() -> json {
    const auto &kind = arg(0, "oracle kind (ext, module-ext, group-h2)");
    oracle::OracleReport r;
    json j{{"oracle", kind}};
    if (kind == "ext") {
      const auto &M = module();
      r = oracle::ext_by_enumeration(M, variety_of(M.variety), cap_or(1L << 20));
      j["module"] = M.name;
    } else if (kind == "module-ext") {
      r = oracle::module_ext(static_cast<int>(int_arg(1, "n")), static_cast<int>(int_arg(2, "m")));
    } else if (kind == "group-h2") {
      const auto &G = algebra();
      int mul = G.sig.find("mul");
      if (mul < 0) throw Error(ErrorKind::UnknownSymbol, "group-h2 needs a binary symbol named mul");
      std::vector<long> moduli;
      for (size_t i = 1; i < o_.args.size(); ++i) moduli.push_back(int_arg(i, "modulus"));
      r = oracle::group_h2(G, mul, moduli);
      j["algebra"] = G.name;
    } else {
      throw UsageError("unknown oracle kind '" + kind + "'");
    }
    json f = json::array();
    for (auto x : r.invariant_factors) f.push_back(x);
    j["method"] = r.method;
    j["invariant_factors"] = f;
    j["order"] = r.order;
    j["enumerated"] = r.enumerated;
    return j;
  }
};

void emit(const json &j, const Options &o, std::ostream &out) {
  if (o.as_json) {
    out << j.dump(2) << "\n";
    return;
  }
  for (const auto &[k, v] : j.items()) {
    if (v.is_string())
      out << k << ": " << v.get<std::string>() << "\n";
    else
      out << k << ": " << v.dump() << "\n";
  }
}

auto run(const std::vector<std::string> &argv, std::ostream &out, std::ostream &err) -> int;

auto batch(const Options &o, std::ostream &out, std::ostream &err) -> int {
  std::ifstream in(o.path);
  if (!in) {
    emit({{"error", {{"kind", "io"}, {"message", "cannot open manifest '" + o.path + "'"}}}}, o, out);
    return 1;
  }
  auto dir = std::filesystem::path(o.path).parent_path();
  json results = json::array();
  int failed = 0;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::stringstream ss(line);
    std::vector<std::string> args;
    for (std::string t; ss >> t;) args.push_back(t);
    if (args.empty()) continue;
    if (args.size() > 1 && args[0] != "batch") {
      std::filesystem::path p(args[1]);
      if (p.is_relative() && !std::filesystem::exists(p)) args[1] = (dir / p).string();
    }
    args.emplace_back("--json");
    if (o.no_meta) args.emplace_back("--no-meta");
    std::ostringstream sub;
    int code = run(args, sub, err);
    json r{{"command", line.substr(0, line.find_last_not_of(" \t") + 1)}, {"exit", code}};
    auto parsed = json::parse(sub.str(), nullptr, false);
    r["result"] = parsed.is_discarded() ? json(sub.str()) : parsed;
    if (code != 0) ++failed;
    results.push_back(r);
  }
  json j{{"commands", results}, {"count", results.size()}, {"failed", failed}};
  emit(j, o, out);
  return failed ? 1 : 0;
}

auto run(const std::vector<std::string> &argv, std::ostream &out, std::ostream &err) -> int {
  Options o;
  CLI::App app{"abelext: abelian extensions and clone cohomology of finite algebras"};
  app.add_option("verb", o.verb, "validate, congruences, commutator, difference-check, abelianize, free-abelian, ext-group, "
                                  "factor-set, build-extension, equivalent, pullback, pushforward, baer-sum, outer-product, "
                                  "module-bridge, cohomology, relative-cohomology, oracle, batch")
      ->required();
  app.add_option("workspace", o.path, "workspace document (or manifest for batch)")->required();
  app.add_option("args", o.args, "entity names or values, depending on the verb");
  app.add_option("-a,--algebra", o.algebras, "algebra name (repeatable)")->allow_extra_args(false);
  app.add_option("-m,--module", o.module, "abelian group overalgebra name");
  app.add_option("-q,--overalgebra", o.over, "pointed overalgebra name");
  app.add_option("--theta", o.theta, "congruence: top, bot, or generator pairs a-b,c-d");
  app.add_option("--psi", o.psi, "congruence: top, bot, or generator pairs a-b,c-d");
  app.add_option("--depth", o.depth, "term budget of the cell pool")->check(CLI::Range(1, 6));
  app.add_option("--arity", o.arity, "largest arity of pool terms")->check(CLI::Range(0, 6));
  app.add_option("--max-dim", o.max_dim, "highest cohomology dimension")->check(CLI::Range(0, 3));
  app.add_option("--cap", o.cap, "enumeration cap")->check(CLI::PositiveNumber);
  app.add_flag("--oracle", o.oracle, "also run the brute-force reference");
  app.add_flag("--json", o.as_json, "JSON output");
  app.add_flag("--no-meta", o.no_meta, "omit timing and timestamp");
  app.add_option("--jobs", o.jobs, "worker threads, 0 for all cores")->check(CLI::Range(0, 256));
  std::vector<std::string> rev(argv.rbegin(), argv.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError &e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }
  auto t0 = std::chrono::steady_clock::now();
  if (o.verb == "batch") return batch(o, out, err);
  try {
    Runner r(o, load_workspace(o.path));
    json j{{"verb", o.verb}};
    j.update(r.run());
    if (!o.no_meta) {
      std::time_t now = std::time(nullptr);
      char stamp[32];
      std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
      j["meta"] = {{"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}, {"timestamp", stamp}, {"jobs", o.jobs}};
    }
    emit(j, o, out);
    return 0;
  } catch (const UsageError &e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error &e) {
    json j{{"verb", o.verb}, {"error", {{"kind", kind_name(e.kind())}, {"message", e.what()}}}};
    if (e.line()) {
      j["error"]["line"] = e.line();
      j["error"]["column"] = e.column();
    }
    emit(j, o, out);
    return 1;
  }
}

} // namespace

auto main(int argc, char **argv) -> int {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}
