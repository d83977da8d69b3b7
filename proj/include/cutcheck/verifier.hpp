#pragma once

// Correctness and completeness checks for programs with cut against a
// specification suite, all bounded by term depth where they cannot be exact.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cutcheck/enumerate.hpp"
#include "cutcheck/ld_tree.hpp"
#include "cutcheck/pruning.hpp"
#include "cutcheck/solve.hpp"
#include "cutcheck/spec_file.hpp"
#include "cutcheck/spec_sets.hpp"
#include "cutcheck/term.hpp"
#include "cutcheck/termination.hpp"
#include "cutcheck/verdict.hpp"
#include "cutcheck/well_asserted.hpp"

namespace cutcheck {

class CutInQueryError : public std::invalid_argument {
 public:
  CutInQueryError() : std::invalid_argument("query contains a cut; apply query_transform first") {}
};

inline bool has_cut(const Query& q) {
  for (const auto& a : q)
    if (a.is_cut()) return true;
  return false;
}

inline std::optional<std::size_t> first_cut(const Clause& c) {
  for (std::size_t i = 0; i < c.body.size(); ++i)
    if (c.body[i].is_cut()) return i;
  return std::nullopt;
}

inline std::optional<std::size_t> last_cut(const Clause& c) {
  for (std::size_t i = c.body.size(); i > 0; --i)
    if (c.body[i - 1].is_cut()) return i - 1;
  return std::nullopt;
}

inline Query body_slice(const Clause& c, std::size_t from, std::size_t to) {
  return Query(c.body.begin() + static_cast<std::ptrdiff_t>(from), c.body.begin() + static_cast<std::ptrdiff_t>(to));
}

inline std::set<std::string> var_set(const Atom& a) {
  auto v = vars_of(a);
  return {v.begin(), v.end()};
}

inline std::string depth_note(std::size_t d) { return "up to term depth " + std::to_string(d); }

/// a is covered by clause c w.r.t. S: some ground instance of c has head a and
/// every body atom in S or !. On success `instance` is that ground instance.
struct Coverage {
  Verdict verdict;
  std::optional<Clause> instance;
};

inline Coverage covered_by(const Atom& a, const Clause& c, SetIndex& s, std::optional<std::size_t> clause_index = {}) {
  auto miss = [&](std::string note) {
    return Coverage{Verdict::refuted(Witness{"not_covered", a, clause_index, {}, std::nullopt, std::move(note)}), {}};
  };
  if (c.head.predicate() != a.predicate() || c.head.arity() != a.arity()) return miss("different predicate");
  auto th = match(c.head, a);
  if (!th) return miss("head does not match");
  SolveStats st;
  auto eta = solve_first(c.body, *th, vars_of(c), s, st);
  if (eta) return Coverage{Verdict::verified(), eta->apply(c)};
  if (!st.exhaustive)
    return Coverage{Verdict::unknown("depth", s.depth(), "no body instance in S " + depth_note(s.depth())), {}};
  return miss("no ground instance of the body lies in S");
}

/// Per-atom outcome of a check over the members of S.
struct AtomCheck {
  Verdict verdict;
  std::vector<AtomReport> per_atom;  // only the atoms that are not Verified
  std::size_t checked = 0;
};

class Verifier {
 public:
  Verifier(Program program, SpecSuite spec, Alphabet alphabet, Bounds bounds = {})
      : program_(std::move(program)),
        spec_(std::move(spec)),
        bounds_(bounds),
        universe_(std::make_unique<GroundUniverse>(std::move(alphabet))),
        s_(std::make_unique<SetIndex>(spec_.s, *universe_, bounds_.depth)),
        post_(std::make_unique<SetIndex>(spec_.post, *universe_, bounds_.depth)) {}

  // the indexes refer to spec_
  Verifier(const Verifier&) = delete;
  Verifier& operator=(const Verifier&) = delete;

  const Program& program() const { return program_; }
  const SpecSuite& spec() const { return spec_; }
  const Bounds& bounds() const { return bounds_; }
  GroundUniverse& universe() { return *universe_; }
  SetIndex& s_index() { return *s_; }
  SetIndex& post_index() { return *post_; }

  /// Members of S up to the depth bound, cached.
  const EnumResult& s_members() {
    if (!s_members_) s_members_ = enumerate(spec_.s, *universe_, bounds_.depth);
    return *s_members_;
  }

  Coverage covered(const Atom& a, std::size_t clause_index) {
    return covered_by(a, program_.clauses.at(clause_index), *s_, clause_index);
  }

  /// Every atom of S is covered by some clause.
  AtomCheck semi_complete() {
    AtomCheck out;
    out.verdict = Verdict::verified("all atoms of S " + depth_note(bounds_.depth));
    const auto& ms = s_members();
    for (const auto& a : ms.atoms) {
      AtomReport r{a, Verdict::refuted(Witness{"not_covered", a, std::nullopt, {}, std::nullopt,
                                               "no clause covers the atom w.r.t. S"}),
                   std::nullopt, {}};
      bool any = false;
      for (std::size_t i = 0; i < program_.clauses.size(); ++i) {
        const Clause& c = program_.clauses[i];
        if (c.head.predicate() != a.predicate() || c.head.arity() != a.arity()) continue;
        auto cov = covered(a, i);
        r.details.push_back({clause_label(i), cov.verdict});
        if (!any) {
          r.verdict = cov.verdict;
          any = true;
        } else {
          r.verdict = disjoin(r.verdict, cov.verdict);
        }
        if (cov.verdict.verified_p() && !r.clause_index) r.clause_index = i;
      }
      out.verdict = conjoin(out.verdict, r.verdict);
      ++out.checked;
      if (!r.verdict.verified_p()) out.per_atom.push_back(std::move(r));
    }
    if (!ms.complete && out.verdict.verified_p())
      out.verdict = Verdict::unknown("members", kDefaultEnumCap, "enumeration of S stopped at its cap");
    return out;
  }

  /// For each clause, every ground instance whose body lies in S ∪ {!} has its
  /// head in S.
  Verdict correct() {
    Verdict v = Verdict::verified(depth_note(bounds_.depth));
    for (std::size_t i = 0; i < program_.clauses.size(); ++i) {
      v = conjoin(v, correct_clause(i));
      if (v.refuted_p()) break;
    }
    return v;
  }

  Verdict correct_clause(std::size_t ci) {
    const Clause& c = program_.clauses.at(ci);
    if (spec_.s.is_universal()) return Verdict::verified("S is the Herbrand base");
    std::optional<Witness> bad;
    bool capped = false;
    SolveStats st;
    const auto values = universe_->up_to(bounds_.depth);
    solve_all(c.body, Substitution{}, *s_, st, [&](const Substitution& eta) {
      Atom h = eta.apply(c.head);
      if (spec_.s.contains(h)) return true;
      auto vs = vars_of(h);
      if (vs.empty()) {
        bad = Witness{"incorrect", h, ci, eta, eta.apply(c), "head instance is not in S"};
        return false;
      }
      std::size_t work = 0;
      detail::for_each_grounding(vs, values, [&](const Substitution& g) {
        if (++work > kDefaultSolveCap) {
          capped = true;
          return false;
        }
        Atom hg = g.apply(h);
        if (!spec_.s.contains(hg)) {
          Substitution full = eta.compose(g);
          bad = Witness{"incorrect", hg, ci, full, full.apply(c), "head instance is not in S"};
          return false;
        }
        return true;
      });
      return !bad && !capped;
    });
    if (bad) return Verdict::refuted(*bad);
    if (capped) return Verdict::unknown("instances", kDefaultSolveCap, "ground instance limit reached");
    return Verdict::verified(st.exhaustive ? "exact" : depth_note(bounds_.depth));
  }

  /// Every clause is well-asserted w.r.t. pre and post.
  const AtomCheck& cs_correct() {
    if (cs_) return *cs_;
    AtomCheck& out = cs_.emplace();
    out.verdict = Verdict::verified();
    for (std::size_t i = 0; i < program_.clauses.size(); ++i) {
      Verdict v = well_asserted_clause(program_.clauses[i], spec_.pre, spec_.post, *universe_, i);
      out.verdict = conjoin(out.verdict, v);
      ++out.checked;
      if (!v.verified_p()) out.per_atom.push_back(AtomReport{program_.clauses[i].head, v, i, {}});
    }
    return out;
  }

  Verdict well_asserted_query(const Query& q) {
    auto taken = predicate_names(program_, {&spec_.s, &spec_.pre, &spec_.post}, q);
    return cutcheck::well_asserted_query(q, spec_.pre, spec_.post, *universe_, taken);
  }

  /// S ⊆ post, checked over the members of S up to the depth bound.
  Verdict s_subset_post() {
    if (s_in_post_) return *s_in_post_;
    Verdict v = Verdict::verified();
    if (spec_.post.is_universal()) {
      v.note = "post is the Herbrand base";
    } else if (spec_.s.is_universal()) {
      v = Verdict::refuted(Witness{"s_not_in_post", std::nullopt, std::nullopt, {}, std::nullopt,
                                   "S is the Herbrand base but post is not"});
    } else {
      const auto& ms = s_members();
      for (const auto& a : ms.atoms)
        if (!spec_.post.contains(a)) {
          v = Verdict::refuted(Witness{"s_not_in_post", a, std::nullopt, {}, std::nullopt, "atom of S is not in post"});
          break;
        }
      if (v.verified_p()) {
        v.note = spec_.s.is_extensional() ? "exact" : depth_note(bounds_.depth);
        if (!ms.complete) v = Verdict::unknown("members", kDefaultEnumCap, "enumeration of S stopped at its cap");
      }
    }
    s_in_post_ = v;
    return v;
  }

  /// The three c-covered conditions for a ∈ S, per candidate clause; the
  /// atom is c-covered if some clause satisfies all three.
  const AtomReport& c_covered(const Atom& a) {
    auto it = c_cache_.find(a);
    if (it != c_cache_.end()) return it->second;
    AtomReport r{a, Verdict::refuted(Witness{"not_c_covered", a, std::nullopt, {}, std::nullopt,
                                             "no clause for the predicate"}),
                 std::nullopt, {}};
    bool any = false;
    for (std::size_t i = 0; i < program_.clauses.size(); ++i) {
      const Clause& c = program_.clauses[i];
      if (c.head.predicate() != a.predicate() || c.head.arity() != a.arity()) continue;
      Verdict v = clause_c_covered(a, i, r.details);
      if (!any) {
        r.verdict = v;
        any = true;
      } else {
        r.verdict = disjoin(r.verdict, v);
      }
      if (v.verified_p() && !r.clause_index) r.clause_index = i;
    }
    return c_cache_.emplace(a, std::move(r)).first->second;
  }

  /// Exact pruned tree for q, or Unknown with the budget that ran out.
  struct TreeResult {
    std::unique_ptr<LdTree> tree;
    PrunedTree pruned;
    Verdict verdict;
  };

  TreeResult pruned_tree(const Query& q) {
    TreeResult out;
    out.tree = std::make_unique<LdTree>(build_tree(program_, q, Budget{bounds_.nodes, bounds_.steps}));
    out.pruned = prune(*out.tree);
    if (out.pruned.exact) {
      out.verdict = Verdict::verified("pruned tree is finite");
    } else {
      bool node_cap = out.tree->size() >= bounds_.nodes;
      out.verdict = node_cap ? Verdict::unknown("nodes", bounds_.nodes, "pruned tree exceeds the node budget")
                             : Verdict::unknown("steps", bounds_.steps, "a pruned branch exceeds the step budget");
    }
    return out;
  }

  /// The sufficient condition for completeness of a cut-free query: finite
  /// pruned tree, cs-correct program, well-asserted query, and every atom of S
  /// c-covered. The verdict is the weakest stage; if S ⊄ post the condition
  /// does not apply and the result is at best Unknown.
  CheckReport completeness(const Query& q) {
    if (has_cut(q)) throw CutInQueryError();
    CheckReport rep;
    rep.check = "complete";
    rep.bounds = bounds_;
    Verdict premise = s_subset_post();
    rep.stages.push_back({"S subset of post", premise});
    auto tr = pruned_tree(q);
    rep.stages.push_back({"finite pruned tree", tr.verdict});
    rep.stages.push_back({"cs-correct", cs_correct().verdict});
    rep.stages.push_back({"well-asserted query", well_asserted_query(q)});
    const AtomCheck& cc = c_covered_all();
    rep.per_atom = cc.per_atom;
    rep.atoms_checked = cc.checked;
    rep.stages.push_back({"c-covered", cc.verdict});
    Verdict v = Verdict::verified("complete for the query");
    for (std::size_t i = 1; i < rep.stages.size(); ++i) v = conjoin(v, rep.stages[i].verdict);
    if (!premise.verified_p() && !v.unknown_p()) {
      std::string why = premise.witness && premise.witness->atom ? to_string(*premise.witness->atom) : premise.note;
      v = Verdict::unknown("premise", 0, "S is not a subset of post (" + why + ")");
    }
    rep.verdict = v;
    return rep;
  }

  /// c_covered over every member of S; it does not depend on the query.
  const AtomCheck& c_covered_all() {
    if (cc_all_) return *cc_all_;
    AtomCheck& out = cc_all_.emplace();
    out.verdict = Verdict::verified("all atoms of S " + depth_note(bounds_.depth));
    const auto& ms = s_members();
    for (const auto& a : ms.atoms) {
      const AtomReport& r = c_covered(a);
      out.verdict = conjoin(out.verdict, r.verdict);
      ++out.checked;
      if (!r.verdict.verified_p()) out.per_atom.push_back(r);
    }
    if (!ms.complete && out.verdict.verified_p())
      out.verdict = Verdict::unknown("members", kDefaultEnumCap, "enumeration of S stopped at its cap");
    return out;
  }

  /// Ground test: every ground instance of q with all atoms in S is an
  /// instance of an answer of the pruned tree.
  Verdict oracle_tree_complete(const Query& q) {
    auto tr = pruned_tree(q);
    if (!tr.verdict.verified_p()) return tr.verdict;
    auto ans = answers_of_pruned(tr.pruned);
    Query plain;
    for (const auto& a : q)
      if (!a.is_cut()) plain.push_back(a);
    std::optional<Witness> bad;
    SolveStats st;
    solve_all(plain, Substitution{}, *s_, st, [&](const Substitution& eta) {
      Query inst = eta.apply(plain);
      for (const auto& an : ans) {
        Query an_plain;
        for (const auto& x : an)
          if (!x.is_cut()) an_plain.push_back(x);
        if (match(an_plain, inst)) return true;
      }
      bad = Witness{"missing_answer", inst.empty() ? std::nullopt : std::optional<Atom>(inst.front()), std::nullopt,
                    eta, std::nullopt, "instance " + to_string(inst) + " of the query is not an instance of any answer"};
      return false;
    });
    if (bad) return Verdict::refuted(*bad);
    return Verdict::verified(st.exhaustive ? "exact" : depth_note(bounds_.depth));
  }

  Verdict recurrent() {
    if (spec_.level_maps.empty()) throw MissingLevelMappingError("the program");
    return recurrent_check(program_, spec_.level_maps, *universe_, bounds_.depth);
  }

  Verdict acceptable() {
    if (spec_.level_maps.empty()) throw MissingLevelMappingError("the program");
    Verdict c = correct();
    if (!c.verified_p()) {
      if (c.refuted_p()) c.note = "S is not a model: " + c.note;
      return c;
    }
    return conjoin(acceptable_levels(program_, *s_, spec_.level_maps, *universe_, bounds_.depth), c);
  }

 private:
  static std::string clause_label(std::size_t i) { return "clause " + std::to_string(i + 1); }

  const Generalizations& pre_generalizations(const Atom& a) {
    auto it = gen_cache_.find(a);
    if (it != gen_cache_.end()) return it->second;
    return gen_cache_.emplace(a, max_generalizations(a, spec_.pre)).first->second;
  }

  Verdict clause_c_covered(const Atom& a, std::size_t i, std::vector<SubVerdict>& details) {
    const Clause& c = program_.clauses[i];
    const std::string label = clause_label(i);
    auto cut = last_cut(c);

    // Condition 1
    Verdict v1;
    if (cut && s_subset_post().verified_p()) {
      v1 = covered_by(a, Clause{c.head, body_slice(c, 0, *cut)}, *s_, i).verdict;
      if (v1.verified_p()) v1.note = "covered by the clause up to its last cut";
    } else {
      v1 = covered_by(a, c, *s_, i).verdict;
    }
    details.push_back({label + ": condition 1", v1});

    // Condition 2: no preceding clause with a cut fires on a generalization of a in pre.
    Verdict v2 = Verdict::verified();
    bool inexact2 = false;
    for (std::size_t j = 0; j < i && !v2.refuted_p(); ++j) {
      const Clause& cj = program_.clauses[j];
      if (cj.head.predicate() != a.predicate() || cj.head.arity() != a.arity()) continue;
      auto fc = first_cut(cj);
      if (!fc) continue;
      const auto& gens = pre_generalizations(a);
      if (!gens.complete) v2 = conjoin(v2, Verdict::unknown("lattice", kDefaultLatticeCap, "generalization search stopped at its cap"));
      for (const auto& g : gens.atoms) {
        Renamer rn(var_set(g));
        Clause cr = rn.rename_apart(cj);
        auto mu = unify(g, cr.head);
        if (!mu) continue;
        Query a0 = body_slice(cr, 0, *fc);
        auto extra = vars_of(cr.head);
        for (const auto& v : vars_of(g)) extra.push_back(v);
        SolveStats st;
        auto eta = solve_first(a0, *mu, extra, *post_, st);
        if (eta) {
          Clause inst = eta->apply(Clause{cr.head, a0});
          v2 = conjoin(v2, Verdict::refuted(Witness{
                               "cut_clause_fires", a, j, *eta, inst,
                               "clause " + std::to_string(j + 1) + " reaches its cut on " + to_string(eta->apply(g)) +
                                   ", an instance of " + to_string(g) + " in pre"}));
          break;
        }
        if (!st.exhaustive) inexact2 = true;
      }
    }
    if (v2.verified_p()) v2.note = inexact2 ? depth_note(bounds_.depth) : "exact";
    details.push_back({label + ": condition 2", v2});

    // Condition 3: after the last cut, the rest of the clause still covers a.
    Verdict v3 = Verdict::verified();
    if (cut) {
      Query b0 = body_slice(c, 0, *cut);
      Query b1 = body_slice(c, *cut + 1, c.body.size());
      const auto& gens = pre_generalizations(a);
      if (!gens.complete) v3 = conjoin(v3, Verdict::unknown("lattice", kDefaultLatticeCap, "generalization search stopped at its cap"));
      bool inexact3 = false;
      for (const auto& g : gens.atoms) {
        Renamer rn(var_set(g));
        Substitution ren = rn.fresh_for(vars_of(c));
        Clause cr = ren.apply(c);
        Query rb0 = ren.apply(b0);
        Query rb1 = ren.apply(b1);
        auto mu = unify(cr.head, g);
        if (!mu) continue;
        bool open_b0 = !vars_of(mu->apply(rb0)).empty();
        std::optional<Witness> bad;
        bool unknown = false;
        SolveStats st;
        solve_all(rb0, *mu, *post_, st, [&](const Substitution& eta) {
          Clause rest = eta.apply(Clause{cr.head, rb1});
          auto cov = covered_by(a, rest, *s_, i);
          if (cov.verdict.refuted_p()) {
            bad = Witness{"rest_not_covering", a, i, eta, rest,
                          "after the cut, " + to_string(rest) + " does not cover the atom w.r.t. S"};
            return false;
          }
          if (cov.verdict.unknown_p()) unknown = true;
          return true;
        });
        if (bad) {
          v3 = conjoin(v3, Verdict::refuted(*bad));
          break;
        }
        if (unknown) v3 = conjoin(v3, Verdict::unknown("depth", bounds_.depth, "coverage after the cut is undecided"));
        if (spec_.post.is_universal() && open_b0)
          v3 = conjoin(v3, Verdict::unknown("depth", bounds_.depth,
                                            "post is the Herbrand base; instances of the prefix were checked " +
                                                depth_note(bounds_.depth)));
        if (!st.exhaustive) inexact3 = true;
      }
      if (v3.verified_p()) v3.note = inexact3 ? depth_note(bounds_.depth) : "exact";
      details.push_back({label + ": condition 3", v3});
    }
    return conjoin(conjoin(v1, v2), v3);
  }

  Program program_;
  SpecSuite spec_;
  Bounds bounds_;
  std::unique_ptr<GroundUniverse> universe_;
  std::unique_ptr<SetIndex> s_;
  std::unique_ptr<SetIndex> post_;
  std::optional<EnumResult> s_members_;
  std::optional<Verdict> s_in_post_;
  std::optional<AtomCheck> cs_;
  std::optional<AtomCheck> cc_all_;
  std::map<Atom, AtomReport> c_cache_;
  std::map<Atom, Generalizations> gen_cache_;
};

/// p0(V) ← q added to the program, with p0 fresh and V the variables of q.
/// S grows by the ground instances p0(V)θ whose query instance qθ lies in
/// S ∪ {!} (listed up to the depth bound); pre and post grow by p0(V).
struct QueryTransform {
  Program program;
  Query query;
  SpecSuite spec;
  Clause added;
  bool exact = true;
};

inline QueryTransform query_transform(const Program& p, const Query& q, const SpecSuite& spec, GroundUniverse& u,
                                      std::size_t depth) {
  QueryTransform out{p, {}, spec, {}, true};
  auto taken = predicate_names(p, {&spec.s, &spec.pre, &spec.post}, q);
  std::vector<Term> vs;
  for (const auto& v : vars_of(q)) vs.push_back(Term::var(v));
  Atom head = Atom::make(fresh_predicate("p", taken), vs);
  out.added = Clause{head, q};
  out.program.clauses.push_back(out.added);
  out.query = Query{head};
  out.spec.pre.add({head, {}});
  out.spec.post.add({head, {}});
  if (spec.s.is_universal()) return out;
  SetIndex idx(spec.s, u, depth);
  SolveStats st;
  std::vector<Atom> extra;
  solve_all(q, Substitution{}, idx, st, [&](const Substitution& eta) {
    extra.push_back(eta.apply(head));
    return true;
  });
  out.exact = st.exhaustive;
  for (const auto& a : extra) out.spec.s.add({a, {}});
  return out;
}

}  // namespace cutcheck

namespace cutcheck {

/// Flags win over CUTCHECK_BUDGET_NODES, which wins over the spec's [bounds],
/// which win over the defaults.
struct BoundOverrides {
  std::optional<std::size_t> depth, nodes, steps;
};

class BadBudgetError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline Bounds resolve_bounds(const BoundOverrides& flags, const char* env_nodes, const SpecSuite* spec) {
  Bounds b;
  if (spec) {
    if (spec->depth) b.depth = *spec->depth;
    if (spec->nodes) b.nodes = *spec->nodes;
    if (spec->steps) b.steps = *spec->steps;
  }
  if (env_nodes && *env_nodes) {
    std::string s(env_nodes);
    if (s.find_first_not_of("0123456789") != std::string::npos || s.size() > 18)
      throw BadBudgetError("CUTCHECK_BUDGET_NODES must be a number: " + s);
    b.nodes = std::stoull(s);
  }
  if (flags.depth) b.depth = *flags.depth;
  if (flags.nodes) b.nodes = *flags.nodes;
  if (flags.steps) b.steps = *flags.steps;
  return b;
}

}  // namespace cutcheck
