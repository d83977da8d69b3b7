#pragma once

// Property suites shared by the GTest runner and the acceptance binary. Each
// returns counts and the first counterexample it met.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cutcheck/cutcheck.hpp"
#include "gen.hpp"

namespace props {

using namespace cutcheck;

struct Result {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first;

  void fail(const std::string& what) {
    if (failures++ == 0) first = what;
  }
  bool ok() const { return failures == 0; }
};

inline bool same_answers(const std::vector<Query>& a, const std::vector<Query>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!match(a[i], b[i]) || !match(b[i], a[i])) return false;
  return true;
}

inline std::string show(const std::vector<Query>& qs) {
  std::string s = "[";
  for (std::size_t i = 0; i < qs.size(); ++i) s += (i ? "; " : "") + to_string(qs[i]);
  return s + "]";
}

inline std::set<std::string> var_set(const Term& t) {
  auto v = vars_of(t);
  return {v.begin(), v.end()};
}

// ---------------------------------------------------------------------------
// Core algebra

/// Counts ground terms of depth <= d directly from the signature, as an
/// independent check on the universe enumeration.
inline std::size_t count_ground(const gen::Signature& s, std::size_t d) {
  std::size_t upto = s.constants.size();
  for (std::size_t k = 1; k <= d; ++k) {
    std::size_t next = s.constants.size();
    for (const auto& fn : s.functors) {
      std::size_t all = 1;
      for (std::size_t i = 0; i < fn.second; ++i) all *= upto;
      next += all;
    }
    upto = next;
  }
  return upto;
}

inline Result algebra(std::uint64_t seed, std::size_t n) {
  Result r;
  gen::Rng rng(seed);
  gen::Signature sig;
  auto all = enumerate_ground(gen::alphabet_of(sig, {}), 2);
  std::set<Term> listed(all.begin(), all.end());
  if (listed.size() != all.size()) r.fail("enumerate_ground lists duplicates");
  if (all.size() != count_ground(sig, 2)) r.fail("enumerate_ground count " + std::to_string(all.size()));
  for (std::size_t i = 0; i < n; ++i) {
    ++r.cases;
    Term s = gen::term(rng, sig, 3), t = gen::term(rng, sig, 3);
    auto sst = var_set(s), tvs = var_set(t);
    std::set<std::string> both = sst;
    both.insert(tvs.begin(), tvs.end());

    // unify: a unifier, idempotent, relevant
    auto u = unify(s, t);
    if (u) {
      if (u->apply(s) != u->apply(t)) r.fail("unifier does not unify " + to_string(s) + " = " + to_string(t));
      if (!u->is_idempotent()) r.fail("unifier not idempotent for " + to_string(s) + " = " + to_string(t));
      for (const auto& v : u->all_vars())
        if (!both.count(v)) r.fail("unifier not relevant: " + v);
      // most general: any ground unifier found by instantiating is an instance of it
      Substitution g;
      for (const auto& v : both) g.bind(v, gen::ground_term(rng, sig, 1));
      Substitution gu = u->compose(g);
      if (gu.apply(s) != gu.apply(t)) r.fail("instance of unifier fails to unify");
    } else {
      // independent check: random ground instantiations never make them equal
      for (int k = 0; k < 4; ++k) {
        Substitution g;
        for (const auto& v : both) g.bind(v, gen::ground_term(rng, sig, 1));
        if (g.apply(s) == g.apply(t)) r.fail("unify failed on unifiable " + to_string(s) + " = " + to_string(t));
      }
    }

    // occurs check: X against a proper superterm of X
    Term x = Term::var("X");
    Term wrapped = Term::make("f", {Term::make("g", {gen::term(rng, sig, 1), x})});
    if (unify(x, wrapped)) r.fail("occurs check missed for " + to_string(wrapped));

    // match: one-sided and sound; agrees with unify against ground terms
    Term gt = gen::ground_term(rng, sig, 3);
    auto m = match(s, gt);
    auto ug = unify(s, gt);
    if (m.has_value() != ug.has_value()) r.fail("match/unify disagree on ground " + to_string(s) + " vs " + to_string(gt));
    if (m) {
      if (m->apply(s) != gt) r.fail("matcher does not map " + to_string(s) + " to " + to_string(gt));
      for (const auto& v : m->domain())
        if (!sst.count(v)) r.fail("matcher binds foreign variable " + v);
    }
    auto inst = Substitution{{"X", gen::term(rng, sig, 1)}, {"Y", gen::term(rng, sig, 1)}};
    if (!match(s, inst.apply(s))) r.fail("instance not matched: " + to_string(s));

    // rename_apart: a variant with fresh variables
    Clause c{Atom::make("h", {s}), {Atom::make("b", {t})}};
    std::set<std::string> reserved{"X_1", "Y_2", "Z"};
    Renamer rn(reserved);
    Clause d = rn.rename_apart(c);
    auto cv = vars_of(c);
    for (const auto& v : vars_of(d)) {
      if (reserved.count(v) || std::find(cv.begin(), cv.end(), v) != cv.end())
        r.fail("rename_apart reused " + v);
    }
    Query cq{c.head, c.body[0]}, dq{d.head, d.body[0]};
    if (!match(cq, dq) || !match(dq, cq)) r.fail("rename_apart is not a variant of " + to_string(c));

    // enumerate_ground: every random ground term of depth <= 2 is listed
    Term g2 = gen::ground_term(rng, sig, 2);
    if (!listed.count(g2)) r.fail("enumerate_ground misses " + to_string(g2));
  }
  return r;
}

/// Subderivations: a variable of Q_0..Q_j or of the clause variants
/// used before Q_j that does not occur in B does not occur in any mgu of the
/// subderivation for B.
inline Result subderivation_variables(std::uint64_t seed, std::size_t n) {
  Result r;
  gen::Rng rng(seed);
  gen::Signature sig;
  gen::ProgramShape sh;
  while (r.cases < n) {
    Program p = gen::program(rng, sig, sh);
    Query q = gen::query(rng, sig, sh, 3);
    LdTree t = build_tree(p, q, Budget{400, 30});
    if (t.size() < 2) continue;
    NodeId leaf = rng.below(t.size());
    while (!t.node(leaf).children.empty()) leaf = t.node(leaf).children.front();
    Derivation d = branch(t, leaf);
    if (d.queries.size() < 2) continue;
    std::size_t j = rng.below(d.queries.size());
    const Query& qj = d.queries[j];
    std::size_t k = qj.empty() ? 0 : rng.below(qj.size() + 1);
    ++r.cases;
    Subderivation sd = subderivation(d, j, k);
    std::set<std::string> old;
    for (std::size_t i = 0; i <= j; ++i)
      for (const auto& v : vars_of(d.queries[i])) old.insert(v);
    for (std::size_t i = 0; i < j; ++i)
      if (d.steps[i].variant)
        for (const auto& v : vars_of(*d.steps[i].variant)) old.insert(v);
    auto bv = vars_of(Query(qj.begin(), qj.begin() + static_cast<std::ptrdiff_t>(k)));
    for (const auto& v : bv) old.erase(v);
    for (const auto& st : sd.derivation.steps)
      for (const auto& v : st.mgu.all_vars())
        if (old.count(v)) {
          r.fail("variable " + v + " outside B occurs in an mgu of the subderivation of " + to_string(qj));
          break;
        }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Oracle equivalence

inline void oracle_on(const Program& p, const Query& q, Budget b, Result& r) {
  LdTree t = build_tree(p, q, b);
  PrunedTree pt = prune(t);
  if (!pt.exact) return;
  auto search = prolog_search(p, q, Budget{b.nodes * 20, b.steps});
  ++r.cases;
  if (!search.exact) {
    r.fail("search truncated where the pruned tree is exact: " + to_string(q));
    return;
  }
  auto pruned = answers_of_pruned(pt);
  if (!same_answers(pruned, search.answers))
    r.fail("query " + to_string(q) + " on\n" + to_string(p) + "pruned " + show(pruned) + " search " + show(search.answers));
}

inline Result oracle_random(std::uint64_t seed, std::size_t n, std::size_t max_attempts) {
  Result r;
  gen::Rng rng(seed);
  gen::Signature sig;
  gen::ProgramShape sh;
  for (std::size_t a = 0; a < max_attempts && r.cases < n; ++a) {
    Program p = gen::program(rng, sig, sh);
    Query q = gen::query(rng, sig, sh);
    if (rng.chance(0.15)) q.insert(q.begin() + static_cast<std::ptrdiff_t>(rng.below(q.size() + 1)), Atom::cut());
    oracle_on(p, q, Budget{3000, 60}, r);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Soundness of the completeness condition on random triples

struct SoundnessStats {
  Result result;
  std::size_t attempts = 0;
  std::size_t verified = 0;
  std::size_t with_cuts = 0;  // verified triples whose program has a cut
};

/// Function-free programs; S is built from the least model (whole, a subset,
/// or with extra atoms). pre is all ground atoms or everything; post is all
/// ground atoms, everything, or the least model together with S. The tight
/// post is what lets cut-sensitive triples through the check at all.
inline SoundnessStats soundness(std::uint64_t seed, std::size_t want_verified, std::size_t max_attempts) {
  SoundnessStats st;
  gen::Rng rng(seed);
  gen::Signature sig;
  sig.functors.clear();
  sig.vars = {"X", "Y", "Z"};
  gen::ProgramShape sh;
  sh.preds = {{"p", 1}, {"q", 1}, {"r", 2}, {"s", 0}};
  sh.term_depth = 0;
  sh.cut_p = 0.35;
  auto base = gen::ground_base(sh.preds, sig.constants);
  Alphabet al = gen::alphabet_of(sig, sh.preds);
  while (st.verified < want_verified && st.attempts < max_attempts) {
    ++st.attempts;
    sh.range_restricted = rng.chance(0.5);
    Program p = gen::program(rng, sig, sh);
    auto model = gen::least_model(p, sig.constants);
    std::vector<Atom> s_atoms;
    int mode = static_cast<int>(rng.below(3));
    for (const auto& a : base) {
      bool in_m = model.count(a) > 0;
      if ((mode == 0 && in_m) || (mode == 1 && in_m && rng.chance(0.7)) || (mode == 2 && (in_m || rng.chance(0.2))))
        s_atoms.push_back(a);
    }
    std::vector<Atom> tight(model.begin(), model.end());
    tight.insert(tight.end(), s_atoms.begin(), s_atoms.end());
    SpecSuite spec;
    spec.s = AtomSet::extensional(s_atoms);
    bool ground_pre = rng.chance(0.5);
    spec.pre = ground_pre ? AtomSet::extensional(base) : AtomSet::universal();
    switch (rng.below(3)) {
      case 0: spec.post = AtomSet::extensional(base); break;
      case 1: spec.post = AtomSet::universal(); break;
      default: spec.post = AtomSet::extensional(tight); break;
    }
    Query q = gen::query(rng, sig, sh, 2, ground_pre ? 0.0 : 0.4);
    Verifier v(p, spec, al, Bounds{1, 3000, 60});
    CheckReport rep = v.completeness(q);
    if (!rep.verdict.verified_p()) continue;
    ++st.verified;
    ++st.result.cases;
    if (p.clauses.size() > 1 && std::any_of(p.clauses.begin(), p.clauses.end(), [](const Clause& c) { return c.has_cut(); }))
      ++st.with_cuts;
    Verdict o = v.oracle_tree_complete(q);
    if (o.refuted_p())
      st.result.fail("completeness verified but oracle refutes: query " + to_string(q) + " on\n" + to_string(p) + "S: " +
                     to_string(spec.s) + "witness: " + describe(o));
  }
  return st;
}

// ---------------------------------------------------------------------------
// Spec sets

/// Random pattern sets over list guards; contains agrees with enumerate.
inline Result contains_enumerate(std::uint64_t seed, std::size_t n) {
  Result r;
  gen::Rng rng(seed);
  const std::vector<std::string> menu{
      "[S-patterns]\nm(X, L) where ground_list(L), member(X, L).\n",
      "[S-patterns]\nin(U, T) where ground_list(U), ground_list(T), subset(U, T).\n",
      "[S-patterns]\napp(K, L, M) where concat(K, L, M).\n",
      "[S-patterns]\ne(X, Y) where eq(X, Y), ground(X).\n",
      "[S-patterns]\nl(X, [X|T]) where list(T).\n",
      "[S]\nm(1, [1]).\nm(2, [2,1]).\n",
  };
  Alphabet al;
  al.add_functor("[]", 0);
  al.add_functor(".", 2);
  al.add_functor("1", 0);
  al.add_functor("2", 0);
  for (auto [p, k] : std::vector<std::pair<const char*, std::size_t>>{{"m", 2}, {"in", 2}, {"app", 3}, {"e", 2}, {"l", 2}})
    al.add_predicate(p, k);
  GroundUniverse u(al);
  const std::size_t depth = 2;
  auto terms = u.up_to(depth);
  std::vector<SpecSuite> specs;
  std::vector<std::set<Atom>> listed;
  for (const auto& m : menu) {
    specs.push_back(parse_spec(m));
    auto e = enumerate(specs.back().s, u, depth);
    if (!e.complete) r.fail("enumeration incomplete for " + m);
    listed.emplace_back(e.atoms.begin(), e.atoms.end());
    for (const auto& a : e.atoms)
      if (!specs.back().s.contains(a)) r.fail("enumerated non-member " + to_string(a));
  }
  for (std::size_t i = 0; i < n; ++i) {
    ++r.cases;
    std::size_t k = rng.below(menu.size());
    const auto& pat = specs[k].s.patterns().front().templ;
    std::vector<Term> args;
    for (std::size_t j = 0; j < pat.arity(); ++j) args.push_back(rng.pick(terms));
    Atom a = Atom::make(pat.predicate(), args);
    bool in = specs[k].s.contains(a);
    if (in != (listed[k].count(a) > 0)) r.fail("contains/enumerate disagree on " + to_string(a));
  }
  return r;
}

/// Every maximal generalization is a member, has the atom as an instance, and
/// no one-step generalization of it is a member. The fast path agrees with
/// the lattice walk.
inline Result generalization_maximality(std::uint64_t seed, std::size_t n) {
  Result r;
  gen::Rng rng(seed);
  const std::vector<std::string> menu{
      "[pre]\nm(E, L) where list(L).\n",
      "[pre]\nin(U, T) where ground_list(U), ground_list(T).\n",
      "[pre]\np(a, T).\n",
      "[pre]\ne(X, Y) where eq(X, Y).\n",
      "[pre]\nc(K, L, M) where concat(K, L, M).\n",
      "[pre]\nn(X) where ground(X).\nn(f(Y)).\n",
  };
  gen::Signature sig;
  sig.constants = {"a", "[]"};
  sig.functors = {{"f", 1}, {".", 2}};
  std::vector<SpecSuite> specs;
  for (const auto& m : menu) specs.push_back(parse_spec(m));
  std::size_t tries = 0;
  while (r.cases < n && tries++ < n * 200) {
    std::size_t k = rng.below(menu.size());
    const auto& set = specs[k].pre;
    const auto& pat = set.patterns().front();
    std::vector<Term> args;
    for (std::size_t j = 0; j < pat.templ.arity(); ++j) args.push_back(gen::ground_term(rng, sig, 2));
    Atom a = Atom::make(pat.templ.predicate(), args);
    if (!set.contains(a)) {
      // bias towards members: instantiate the template itself
      Substitution th;
      for (const auto& v : vars_of(pat.templ)) th.bind(v, gen::ground_term(rng, sig, 2));
      a = th.apply(pat.templ);
      if (!set.contains(a)) continue;
    }
    ++r.cases;
    auto gs = max_generalizations(a, set);
    if (gs.atoms.empty()) r.fail("member " + to_string(a) + " has no maximal generalization");
    for (const auto& g : gs.atoms) {
      if (!set.contains(g)) r.fail("generalization " + to_string(g) + " is not a member");
      if (!match(g, a)) r.fail(to_string(a) + " is not an instance of " + to_string(g));
      // one-step generalizations: a non-variable subterm, or one occurrence of
      // a repeated variable, becomes a fresh variable
      std::map<std::string, std::size_t> occ;
      std::function<void(const Term&)> count = [&](const Term& t) {
        if (t.is_var()) ++occ[t.name()];
        for (const auto& x : t.args()) count(x);
      };
      count(g.as_term());
      std::vector<std::vector<std::size_t>> positions;
      std::vector<std::size_t> path;
      std::function<void(const Term&)> walk = [&](const Term& t) {
        if (!t.is_var() || occ[t.name()] > 1) positions.push_back(path);
        for (std::size_t i = 0; i < t.arity(); ++i) {
          path.push_back(i);
          walk(t.arg(i));
          path.pop_back();
        }
      };
      for (std::size_t i = 0; i < g.arity(); ++i) {
        path = {i};
        walk(g.arg(i));
      }
      std::function<Term(const Term&, const std::vector<std::size_t>&, std::size_t)> replace =
          [&](const Term& t, const std::vector<std::size_t>& pos, std::size_t d) -> Term {
        if (d == pos.size()) return Term::var("Fresh_0");
        std::vector<Term> as(t.args().begin(), t.args().end());
        as[pos[d]] = replace(as[pos[d]], pos, d + 1);
        return Term::make(t.name(), as);
      };
      for (const auto& pos : positions) {
        Atom h = Atom::from_term(replace(g.as_term(), pos, 0));
        if (set.contains(h))
          r.fail("generalization " + to_string(g) + " of " + to_string(a) + " is not maximal: " + to_string(h));
      }
    }
    if (detail::fast_path_applies(pat)) {
      auto w = max_generalizations_by_walk(a, pat);
      auto f = max_generalizations(a, pat);
      bool same = w.atoms.size() == f.atoms.size();
      for (std::size_t i = 0; same && i < w.atoms.size(); ++i) same = is_variant(w.atoms[i], f.atoms[i]);
      if (!same) r.fail("fast path and lattice walk disagree on " + to_string(a));
    }
  }
  return r;
}

/// Members stay members under instantiation of their variables.
inline Result closure(std::uint64_t seed, std::size_t n) {
  Result r;
  gen::Rng rng(seed);
  const std::vector<std::string> menu{
      "[pre]\nm(E, L) where list(L).\n", "[pre]\nc(K, L, M) where concat(K, L, M).\n",
      "[pre]\ne(X, Y) where eq(X, Y).\n", "[pre]\ns(U, T) where subset(U, T).\n",
      "[pre]\nk(X, L) where member(X, L).\n",
  };
  gen::Signature sig;
  sig.constants = {"a", "[]"};
  sig.functors = {{"f", 1}, {".", 2}};
  sig.vars = {"X", "Y"};
  std::vector<SpecSuite> specs;
  for (const auto& m : menu) specs.push_back(parse_spec(m));
  std::size_t tries = 0;
  while (r.cases < n && tries++ < n * 200) {
    std::size_t k = rng.below(menu.size());
    const auto& set = specs[k].pre;
    const auto& pat = set.patterns().front();
    Substitution th;
    for (const auto& v : vars_of(pat.templ)) th.bind(v, gen::term(rng, sig, 2));
    Atom a = th.apply(pat.templ);
    if (!set.contains(a)) continue;
    ++r.cases;
    Substitution inst;
    for (const auto& v : sig.vars) inst.bind(v, gen::term(rng, sig, 1));
    Atom b = inst.apply(a);
    if (!set.contains(b)) r.fail("member " + to_string(a) + " has non-member instance " + to_string(b));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Coverage

inline Result coverage_properties(std::uint64_t seed, std::size_t n) {
  Result r;
  gen::Rng rng(seed);
  gen::Signature sig;
  sig.functors.clear();
  gen::ProgramShape sh;
  sh.preds = {{"p", 1}, {"q", 1}, {"r", 2}};
  sh.term_depth = 0;
  auto base = gen::ground_base(sh.preds, sig.constants);
  Alphabet al = gen::alphabet_of(sig, sh.preds);
  while (r.cases < n) {
    Program p = gen::program(rng, sig, sh);
    std::vector<Atom> s1, s2;
    for (const auto& a : base) {
      bool in1 = rng.chance(0.4);
      if (in1) s1.push_back(a);
      if (in1 || rng.chance(0.3)) s2.push_back(a);
    }
    SpecSuite sp;
    sp.s = AtomSet::extensional(s1);
    sp.pre = AtomSet::universal();
    sp.post = AtomSet::extensional(base);
    GroundUniverse u(al);
    AtomSet big = AtomSet::extensional(s2);
    SetIndex i1(sp.s, u, 1), i2(big, u, 1);
    Verifier v(p, sp, al, Bounds{1, 2000, 50});
    bool cut_free = true;
    for (const auto& c : p.clauses)
      if (c.has_cut()) cut_free = false;
    for (const auto& a : base) {
      ++r.cases;
      bool any_cov = false;
      for (std::size_t ci = 0; ci < p.clauses.size(); ++ci) {
        auto c1 = covered_by(a, p.clauses[ci], i1, ci).verdict;
        auto c2 = covered_by(a, p.clauses[ci], i2, ci).verdict;
        if (c1.verified_p() && c2.refuted_p()) r.fail("covered is not monotone for " + to_string(a));
        if (c1.verified_p()) any_cov = true;
      }
      if (!sp.s.contains(a)) continue;
      const auto& cc = v.c_covered(a);
      if (cc.verdict.verified_p()) {
        auto c1 = covered_by(a, p.clauses[*cc.clause_index], i1, *cc.clause_index).verdict;
        // with S ⊆ post the first condition may use the clause up to its last cut
        auto lc = last_cut(p.clauses[*cc.clause_index]);
        Clause prefix = p.clauses[*cc.clause_index];
        if (lc) prefix.body.resize(*lc);
        auto c0 = covered_by(a, prefix, i1).verdict;
        if (!c1.verified_p() && !c0.verified_p()) r.fail("c-covered without covered: " + to_string(a));
      }
      if (cut_free && cc.verdict.verified_p() != any_cov)
        r.fail("cut-free program: c-covered and covered differ on " + to_string(a) + " in\n" + to_string(p));
    }
  }
  return r;
}

/// recurrent and bounded imply a finite tree.
inline Result termination(std::uint64_t seed, std::size_t n, const Program& in, const SpecSuite& in_spec) {
  Result r;
  gen::Rng rng(seed);
  Alphabet al;
  al.add_functor("[]", 0);
  al.add_functor(".", 2);
  al.add_functor("1", 0);
  al.add_functor("2", 0);
  GroundUniverse u(al);
  auto lists = u.lists_up_to(2);
  gen::Signature sig;
  sig.constants = {"1", "2"};
  sig.functors.clear();
  sig.vars = {"X", "Y"};
  if (!recurrent_check(in, in_spec.level_maps, u, 2).verified_p()) r.fail("IN is not recurrent");
  while (r.cases < n) {
    auto open_list = [&] {
      std::vector<Term> xs;
      std::size_t len = rng.below(4);
      for (std::size_t i = 0; i < len; ++i) xs.push_back(gen::term(rng, sig, 0, 0.4));
      Term tail = rng.chance(0.2) ? Term::var("T") : Term::nil();
      return Term::list(xs, tail);
    };
    Query q{rng.chance(0.5) ? Atom::make("in", {open_list(), open_list()}) : Atom::make("m", {gen::term(rng, sig, 0, 0.5), open_list()})};
    if (!bounded_query(q, in_spec.level_maps).verified_p()) continue;
    ++r.cases;
    LdTree t = build_tree(in, q, Budget{100000, 1000});
    if (!t.exact()) r.fail("bounded query has an infinite tree: " + to_string(q));
  }
  return r;
}

}  // namespace props
