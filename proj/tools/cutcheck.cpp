// cutcheck command line: run, tree, prune, check, oracle.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cutcheck/cutcheck.hpp"

namespace {

using namespace cutcheck;

enum Exit { kOk = 0, kRefuted = 1, kInputError = 2, kUnknown = 3 };

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int exit_for(const Verdict& v) { return v.verified_p() ? kOk : v.refuted_p() ? kRefuted : kUnknown; }

struct Options {
  std::string program_file;
  std::string spec_file;
  std::string query;
  std::string kind;
  std::string dot_file;
  bool prune = false;
  bool json = false;
  bool timing = false;
  BoundOverrides flags;
};

struct Inputs {
  std::string program_text, spec_text;
  Program program;
  std::optional<SpecSuite> spec;
  std::optional<Query> query;
  Bounds bounds;
};

Inputs load(const Options& o, bool need_spec, bool need_query) {
  Inputs in;
  in.program_text = slurp(o.program_file);
  in.program = parse_program(in.program_text);
  if (need_spec) {
    if (o.spec_file.empty()) throw InputError("a spec file is required");
    in.spec_text = slurp(o.spec_file);
    in.spec = parse_spec(in.spec_text);
  }
  if (!o.query.empty()) in.query = parse_query(o.query);
  if (need_query && !in.query) throw InputError("a query is required");
  in.bounds = resolve_bounds(o.flags, std::getenv("CUTCHECK_BUDGET_NODES"), in.spec ? &*in.spec : nullptr);
  return in;
}

int cmd_run(const Options& o) {
  auto in = load(o, false, true);
  auto r = prolog_search(in.program, *in.query, Budget{in.bounds.nodes, in.bounds.steps});
  for (const auto& a : r.answers) std::cout << to_string(a) << "\n";
  std::cout << "% " << r.answers.size() << (r.answers.size() == 1 ? " answer" : " answers")
            << (r.exact ? " (exact)" : " (truncated)") << "\n";
  return r.exact ? kOk : kUnknown;
}

int cmd_tree(const Options& o) {
  auto in = load(o, false, true);
  auto t = build_tree(in.program, *in.query, Budget{in.bounds.nodes, in.bounds.steps});
  std::optional<PrunedTree> pt;
  if (o.prune) pt = prune(t);
  std::string dot = to_dot(t, pt ? &*pt : nullptr);
  if (o.dot_file.empty()) {
    std::cout << dot;
  } else {
    std::ofstream f(o.dot_file, std::ios::binary);
    if (!f) throw InputError("cannot write " + o.dot_file);
    f << dot;
  }
  return t.exact() ? kOk : kUnknown;
}

int cmd_prune(const Options& o) {
  auto in = load(o, false, true);
  auto t = build_tree(in.program, *in.query, Budget{in.bounds.nodes, in.bounds.steps});
  auto pt = prune(t);
  for (const auto& step : pt.iteration_log) {
    if (step.removed.empty()) continue;
    std::cout << "% cut at n" << step.executing << " (" << to_string(t.node(step.executing).query) << ") prunes:";
    for (NodeId id : step.removed) std::cout << " n" << id;
    std::cout << "\n";
  }
  auto ans = answers_of_pruned(pt);
  for (const auto& a : ans) std::cout << to_string(a) << "\n";
  std::cout << "% " << ans.size() << (ans.size() == 1 ? " answer" : " answers")
            << (pt.exact ? " (exact)" : " (truncated)") << "\n";
  return pt.exact ? kOk : kUnknown;
}

void emit(const CheckReport& r, const Options& o) {
  if (o.json)
    std::cout << report_json(r).dump(2) << "\n";
  else
    std::cout << report_text(r);
}

int cmd_check(const Options& o, bool oracle) {
  const std::string kind = oracle ? "oracle" : o.kind;
  bool need_query = kind == "complete" || kind == "oracle";
  auto in = load(o, true, need_query);
  auto t0 = std::chrono::steady_clock::now();

  Program program = in.program;
  SpecSuite spec = *in.spec;
  Query query = in.query.value_or(Query{});
  std::string transformed;
  if (kind == "complete" && has_cut(query)) {
    GroundUniverse u(effective_alphabet(program, query, spec));
    auto qt = query_transform(program, query, spec, u, in.bounds.depth);
    transformed = to_string(qt.added);
    program = qt.program;
    spec = qt.spec;
    query = qt.query;
  }
  Verifier v(program, spec, effective_alphabet(program, query, spec), in.bounds);

  CheckReport r;
  if (kind == "complete") {
    r = v.completeness(query);
    if (!transformed.empty()) r.stages.insert(r.stages.begin(), {"query transform", Verdict::verified(transformed)});
  } else {
    r.check = kind;
    r.bounds = in.bounds;
    if (kind == "oracle") {
      r.verdict = v.oracle_tree_complete(query);
    } else if (kind == "semicomplete") {
      auto c = v.semi_complete();
      r.verdict = c.verdict;
      r.per_atom = std::move(c.per_atom);
      r.atoms_checked = c.checked;
    } else if (kind == "correct") {
      r.verdict = v.correct();
    } else if (kind == "cscorrect") {
      const auto& c = v.cs_correct();
      r.verdict = c.verdict;
      r.per_atom = c.per_atom;
      r.atoms_checked = c.checked;
    } else if (kind == "recurrent" || kind == "acceptable") {
      Verdict lv = kind == "recurrent" ? v.recurrent() : v.acceptable();
      if (in.query) {
        r.stages.push_back({kind, lv});
        r.stages.push_back({"bounded query", bounded_query(query, spec.level_maps)});
        r.verdict = conjoin(lv, r.stages.back().verdict);
      } else {
        r.verdict = lv;
      }
    } else {
      throw InputError("unknown check kind: " + kind);
    }
  }
  r.digest = input_digest({in.program_text, in.spec_text, o.query, kind});
  if (o.timing)
    r.timing_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  emit(r, o);
  return exit_for(r.verdict);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cutcheck: LD-trees, pruning and completeness checks for programs with cut"};
  app.require_subcommand(1);
  Options o;

  auto budget_flags = [&](CLI::App* c) {
    c->add_option("--depth", o.flags.depth, "term depth bound for ground enumeration");
    c->add_option("--nodes", o.flags.nodes, "node budget per tree");
    c->add_option("--steps", o.flags.steps, "derivation length budget per branch");
  };

  auto* run = app.add_subcommand("run", "print the answers Prolog computes, in order");
  run->add_option("program", o.program_file)->required();
  run->add_option("query", o.query)->required();
  budget_flags(run);

  auto* tree = app.add_subcommand("tree", "render the LD-tree as Graphviz DOT");
  tree->add_option("program", o.program_file)->required();
  tree->add_option("query", o.query)->required();
  tree->add_option("--dot", o.dot_file, "write DOT here instead of stdout");
  tree->add_flag("--prune", o.prune, "mark pruned nodes and cutting sequences");
  budget_flags(tree);

  auto* prn = app.add_subcommand("prune", "prune the LD-tree and list what each cut removes");
  prn->add_option("program", o.program_file)->required();
  prn->add_option("query", o.query)->required();
  budget_flags(prn);

  auto* check = app.add_subcommand("check", "run a verifier check");
  check->add_option("kind", o.kind)
      ->required()
      ->check(CLI::IsMember({"complete", "semicomplete", "correct", "cscorrect", "recurrent", "acceptable"}));
  check->add_option("program", o.program_file)->required();
  check->add_option("spec", o.spec_file)->required();
  check->add_option("query", o.query);
  check->add_flag("--json", o.json, "JSON report");
  check->add_flag("--timing", o.timing, "include timing_ms in the report");
  budget_flags(check);

  auto* oracle = app.add_subcommand("oracle", "compare the pruned tree's answers with S");
  oracle->add_option("program", o.program_file)->required();
  oracle->add_option("spec", o.spec_file)->required();
  oracle->add_option("query", o.query)->required();
  oracle->add_flag("--json", o.json, "JSON report");
  oracle->add_flag("--timing", o.timing, "include timing_ms in the report");
  budget_flags(oracle);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (*run) return cmd_run(o);
    if (*tree) return cmd_tree(o);
    if (*prn) return cmd_prune(o);
    if (*check) return cmd_check(o, false);
    if (*oracle) return cmd_check(o, true);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kInputError;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
