#pragma once

// Well-asserted clauses and queries.
//
// Strategy A runs the definition symbolically. The head is unified with each
// pre pattern and each prefix atom with each post pattern; the guards of the
// chosen patterns become hypotheses ("facts") about the clause variables. An
// obligation B ∈ pre is discharged when some pattern matches B one-sidedly
// and the hypotheses entail its guards. Every instance with H ∈ pre and a
// prefix in post is an instance of one of these branches, so discharging all
// obligations proves the clause well-asserted.
//
// Strategy B tests the definition directly on concrete instances (each branch
// instance and small ground instantiations of it) and reports the first
// violation found.

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cutcheck/enumerate.hpp"
#include "cutcheck/spec_sets.hpp"
#include "cutcheck/term.hpp"
#include "cutcheck/verdict.hpp"

namespace cutcheck {

struct Fact {
  GuardKind kind;
  std::vector<Term> args;
  std::shared_ptr<const AtomSet> target;
};

/// Hypotheses about the terms of a clause instance.
class Facts {
 public:
  void add(const Guard& g, const Substitution& tau) {
    Fact f{g.kind, {}, g.target};
    for (const auto& a : g.args) f.args.push_back(tau.apply(a));
    if (f.kind != GuardKind::Any) facts_.push_back(std::move(f));
  }

  Facts instantiated(const Substitution& mu) const {
    Facts out;
    for (const auto& f : facts_) {
      Fact g{f.kind, {}, f.target};
      for (const auto& a : f.args) g.args.push_back(mu.apply(a));
      out.facts_.push_back(std::move(g));
    }
    return out;
  }

  /// False when no instance can satisfy the hypotheses (the branch is vacuous).
  bool satisfiable() const {
    for (const auto& f : facts_) {
      if (f.kind == GuardKind::List || f.kind == GuardKind::GroundList) {
        const Term* cur = &f.args[0];
        while (cur->is_cons()) cur = &cur->arg(1);
        if (!cur->is_var() && !cur->is_nil()) return false;
      }
      bool ground = std::all_of(f.args.begin(), f.args.end(), [](const Term& t) { return t.is_ground(); });
      if (ground && !holds_now(f)) return false;
    }
    return true;
  }

  /// Whether every instance satisfying the hypotheses satisfies g·tau.
  bool entails(const Guard& g, const Substitution& tau) const {
    Fact want{g.kind, {}, g.target};
    for (const auto& a : g.args) want.args.push_back(tau.apply(a));
    if (holds_now(want)) return true;  // guards are closed under instantiation
    switch (want.kind) {
      case GuardKind::Ground: return ground_known(want.args[0]);
      case GuardKind::List: return list_known(want.args[0]);
      case GuardKind::GroundList: return ground_known(want.args[0]) && list_known(want.args[0]);
      default:
        for (const auto& f : facts_)
          if (f.kind == want.kind && f.args == want.args && f.target == want.target) return true;
        return false;
    }
  }

  const std::vector<Fact>& facts() const { return facts_; }

  /// Whether concrete terms satisfy every hypothesis.
  bool hold_under(const Substitution& gamma) const {
    for (const auto& f : facts_) {
      Fact g{f.kind, {}, f.target};
      for (const auto& a : f.args) g.args.push_back(gamma.apply(a));
      if (!holds_now(g)) return false;
    }
    return true;
  }

 private:
  static bool holds_now(const Fact& f) {
    Guard g{f.kind, {}, {}, f.target};
    Substitution theta;
    std::size_t i = 0;
    for (const auto& a : f.args) {
      std::string v = "$" + std::to_string(i++);
      g.args.push_back(Term::var(v));
      theta.bind(v, a);
    }
    if (f.kind == GuardKind::NotIn && !f.target) return false;
    return guard_holds(g, theta);
  }

  std::set<std::string> ground_vars() const {
    std::set<std::string> g;
    auto all_in = [&](const Term& t) {
      for (const auto& v : vars_of(t))
        if (!g.count(v)) return false;
      return true;
    };
    auto add = [&](const Term& t) {
      bool changed = false;
      for (const auto& v : vars_of(t)) changed = g.insert(v).second || changed;
      return changed;
    };
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& f : facts_) {
        const auto& a = f.args;
        switch (f.kind) {
          case GuardKind::Ground:
          case GuardKind::GroundList: changed = add(a[0]) || changed; break;
          case GuardKind::NotIn: changed = add(a[0]) || changed; break;
          case GuardKind::Member:
            if (all_in(a[1])) changed = add(a[0]) || changed;
            break;
          case GuardKind::Subset:
            if (all_in(a[1])) changed = add(a[0]) || changed;
            break;
          case GuardKind::Concat:
            if (all_in(a[2])) {
              changed = add(a[0]) || changed;
              changed = add(a[1]) || changed;
            }
            if (all_in(a[0]) && all_in(a[1])) changed = add(a[2]) || changed;
            break;
          case GuardKind::Eq:
            if (all_in(a[0])) changed = add(a[1]) || changed;
            if (all_in(a[1])) changed = add(a[0]) || changed;
            break;
          default: break;
        }
      }
    }
    return g;
  }

  bool ground_known(const Term& t) const {
    if (t.is_ground()) return true;
    auto g = ground_vars();
    for (const auto& v : vars_of(t))
      if (!g.count(v)) return false;
    return true;
  }

  bool list_known(const Term& t) const {
    std::vector<Term> known;
    auto add_spine = [&](const Term& s) {
      const Term* cur = &s;
      for (;;) {
        known.push_back(*cur);
        if (!cur->is_cons()) break;
        cur = &cur->arg(1);
      }
    };
    for (const auto& f : facts_) {
      switch (f.kind) {
        case GuardKind::List:
        case GuardKind::GroundList: add_spine(f.args[0]); break;
        case GuardKind::Member: add_spine(f.args[1]); break;
        case GuardKind::Subset:
          add_spine(f.args[0]);
          add_spine(f.args[1]);
          break;
        case GuardKind::Concat:
          for (const auto& a : f.args) add_spine(a);
          break;
        default: break;
      }
    }
    const Term* cur = &t;
    for (;;) {
      if (cur->is_nil()) return true;
      if (std::find(known.begin(), known.end(), *cur) != known.end()) return true;
      if (!cur->is_cons()) return false;
      cur = &cur->arg(1);
    }
  }

  std::vector<Fact> facts_;
};

struct WellAssertedOptions {
  std::size_t ground_probe_depth = 1;   // depth of ground values tried by strategy B
  std::size_t probes_per_branch = 512;  // cap on ground instantiations per branch
  std::size_t max_branches = 100'000;
};

namespace detail {

class WellAssertedChecker {
 public:
  WellAssertedChecker(const AtomSet& pre, const AtomSet& post, GroundUniverse& u, WellAssertedOptions opt)
      : pre_(pre), post_(post), u_(u), opt_(opt) {}

  Verdict check(const Clause& c, std::optional<std::size_t> clause_index) {
    clause_ = c;
    index_ = clause_index;
    std::set<std::string> reserved;
    for (const auto& v : vars_of(c)) reserved.insert(v);
    renamer_ = Renamer(reserved);

    if (pre_.is_universal()) {
      explore(0, Substitution{}, Facts{});
    } else {
      for (const auto& p : pre_.patterns()) {
        if (p.templ.predicate() != c.head.predicate() || p.templ.arity() != c.head.arity()) continue;
        auto [templ, guards, tau0] = renamed(p);
        auto mu = unify(c.head, templ);
        if (!mu) continue;
        Facts f;
        for (const auto& g : guards) f.add(g, *mu);
        explore(0, *mu, f);
      }
    }
    if (counterexample_) return Verdict::refuted(*counterexample_);
    if (overflow_) return Verdict::unknown("branches", opt_.max_branches, "symbolic branch limit reached");
    if (!unproved_.empty())
      return Verdict::unknown("ground_probe_depth", opt_.ground_probe_depth,
                              "could not discharge: " + unproved_.front() + "; no counterexample found");
    return Verdict::verified();
  }

 private:
  struct Renamed {
    Atom templ;
    std::vector<Guard> guards;
    Substitution tau;
  };

  Renamed renamed(const AtomPattern& p) {
    Substitution tau = renamer_.fresh_for(vars_of(p.templ));
    std::vector<Guard> gs = p.guards;
    for (auto& g : gs)
      for (auto& a : g.args) a = tau.apply(a);
    return {tau.apply(p.templ), gs, tau};
  }

  // Membership of `a` in `set` for every instance allowed by `facts`.
  bool proves(const Atom& a, const AtomSet& set, const Facts& facts) const {
    if (a.is_cut() || set.is_universal()) return true;
    for (const auto& p : set.patterns()) {
      if (p.templ.predicate() != a.predicate() || p.templ.arity() != a.arity()) continue;
      auto tau = match(p.templ, a);
      if (!tau) continue;
      bool ok = true;
      for (const auto& g : p.guards)
        if (!facts.entails(g, *tau)) {
          ok = false;
          break;
        }
      if (ok) return true;
    }
    return false;
  }

  void explore(std::size_t k, const Substitution& theta, const Facts& facts) {
    if (counterexample_ || overflow_) return;
    if (++branches_ > opt_.max_branches) {
      overflow_ = true;
      return;
    }
    if (!facts.satisfiable()) return;
    const auto& body = clause_.body;
    bool proved;
    std::string what;
    if (k == body.size()) {
      Atom h = theta.apply(clause_.head);
      proved = proves(h, post_, facts);
      what = "head " + to_string(h) + " in post";
    } else {
      Atom b = theta.apply(body[k]);
      proved = proves(b, pre_, facts);
      what = "body atom " + to_string(b) + " in pre";
    }
    if (!proved) {
      unproved_.push_back(what);
      probe(theta, facts);
      if (counterexample_) return;
    }
    if (k == body.size()) return;

    Atom b = theta.apply(body[k]);
    if (b.is_cut() || post_.is_universal()) {
      explore(k + 1, theta, facts);
      return;
    }
    for (const auto& p : post_.patterns()) {
      if (p.templ.predicate() != b.predicate() || p.templ.arity() != b.arity()) continue;
      auto [templ, guards, tau0] = renamed(p);
      auto mu = unify(b, templ);
      if (!mu) continue;
      Facts f = facts.instantiated(*mu);
      for (const auto& g : guards) f.add(g, *mu);
      explore(k + 1, theta.compose(*mu), f);
      if (counterexample_ || overflow_) return;
    }
  }

  // Strategy B: the branch instance itself and ground instantiations of it.
  void probe(const Substitution& theta, const Facts& facts) {
    Clause inst = theta.apply(clause_);
    if (facts.hold_under(Substitution{})) {
      if (violates(inst, Substitution{})) return;
    }
    auto vs = vars_of(inst);
    if (vs.empty()) return;
    const auto values = u_.up_to(opt_.ground_probe_depth);
    std::vector<std::size_t> odo(vs.size(), 0);
    for (std::size_t n = 0; n < opt_.probes_per_branch; ++n) {
      Substitution gamma;
      for (std::size_t i = 0; i < vs.size(); ++i) gamma.bind(vs[i], values[odo[i]]);
      if (facts.hold_under(gamma) && violates(inst, gamma)) return;
      std::size_t j = vs.size();
      bool wrapped = true;
      while (j > 0) {
        --j;
        if (++odo[j] < values.size()) {
          wrapped = false;
          break;
        }
        odo[j] = 0;
      }
      if (wrapped) return;
    }
  }

  // Checks the definition on one concrete instance; records a witness.
  bool violates(const Clause& inst, const Substitution& gamma) {
    Clause c = gamma.apply(inst);
    if (!pre_.contains(c.head)) return false;
    for (std::size_t k = 0;; ++k) {
      if (k == c.body.size()) {
        if (!post_.contains(c.head)) {
          record(c, "head " + to_string(c.head) + " is not in post");
          return true;
        }
        return false;
      }
      const Atom& b = c.body[k];
      if (!b.is_cut() && !pre_.contains(b)) {
        record(c, "body atom " + std::to_string(k + 1) + " " + to_string(b) + " is not in pre");
        return true;
      }
      if (!b.is_cut() && !post_.contains(b)) return false;
    }
  }

  void record(const Clause& inst, std::string note) {
    Witness w;
    w.kind = "not_well_asserted";
    w.atom = inst.head;
    w.clause_index = index_;
    w.instance = inst;
    Query gen{clause_.head};
    gen.insert(gen.end(), clause_.body.begin(), clause_.body.end());
    Query spec{inst.head};
    spec.insert(spec.end(), inst.body.begin(), inst.body.end());
    if (auto s = match(gen, spec)) w.substitution = *s;
    w.note = std::move(note);
    counterexample_ = std::move(w);
  }

  const AtomSet& pre_;
  const AtomSet& post_;
  GroundUniverse& u_;
  WellAssertedOptions opt_;
  Clause clause_;
  std::optional<std::size_t> index_;
  Renamer renamer_;
  std::size_t branches_ = 0;
  bool overflow_ = false;
  std::vector<std::string> unproved_;
  std::optional<Witness> counterexample_;
};

}  // namespace detail

inline Verdict well_asserted_clause(const Clause& c, const AtomSet& pre, const AtomSet& post, GroundUniverse& u,
                                    std::optional<std::size_t> clause_index = std::nullopt,
                                    WellAssertedOptions opt = {}) {
  return detail::WellAssertedChecker(pre, post, u, opt).check(c, clause_index);
}

/// A predicate name occurring nowhere in the given program and sets.
inline std::string fresh_predicate(const std::string& base, const std::set<std::string>& taken) {
  for (std::size_t i = 0;; ++i) {
    std::string n = base + std::to_string(i);
    if (!taken.count(n)) return n;
  }
}

inline std::set<std::string> predicate_names(const Program& p, const std::vector<const AtomSet*>& sets, const Query& q = {}) {
  std::set<std::string> out;
  for (const auto& c : p.clauses) {
    out.insert(c.head.predicate());
    for (const auto& b : c.body)
      if (!b.is_cut()) out.insert(b.predicate());
  }
  for (const auto& a : q)
    if (!a.is_cut()) out.insert(a.predicate());
  for (const AtomSet* s : sets)
    for (const auto& pat : s->patterns()) out.insert(pat.templ.predicate());
  return out;
}

/// The query is well-asserted iff the clause p ← q is, w.r.t. pre ∪ {p} and
/// post ∪ {p}, for a 0-ary p that is otherwise unused.
inline Verdict well_asserted_query(const Query& q, const AtomSet& pre, const AtomSet& post, GroundUniverse& u,
                                   const std::set<std::string>& taken_predicates = {}, WellAssertedOptions opt = {}) {
  std::set<std::string> taken = taken_predicates;
  auto more = predicate_names(Program{}, {&pre, &post}, q);
  taken.insert(more.begin(), more.end());
  Atom p = Atom::make(fresh_predicate("query", taken));
  AtomSet pre2 = pre, post2 = post;
  pre2.add({p, {}});
  post2.add({p, {}});
  return well_asserted_clause(Clause{p, q}, pre2, post2, u, std::nullopt, opt);
}

}  // namespace cutcheck
