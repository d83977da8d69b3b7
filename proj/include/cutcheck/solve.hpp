#pragma once

// Finding ground instances of atom sequences whose atoms lie in a
// specification set (plus !). Pattern sets are searched through their
// bounded enumeration; extensional and universal sets are searched exactly.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cutcheck/enumerate.hpp"
#include "cutcheck/spec_sets.hpp"
#include "cutcheck/term.hpp"

namespace cutcheck {

/// A set together with its ground members up to a depth, grouped by
/// predicate and built on first use.
class SetIndex {
 public:
  SetIndex(const AtomSet& s, GroundUniverse& u, std::size_t depth) : set_(s), u_(u), depth_(depth) {}

  const AtomSet& set() const { return set_; }
  std::size_t depth() const { return depth_; }
  GroundUniverse& universe() { return u_; }

  /// Ground members of the given predicate (not available for the universal set).
  const std::vector<Atom>& members(const std::string& pred, std::size_t arity) {
    build();
    static const std::vector<Atom> kNone;
    auto it = by_pred_.find({pred, arity});
    return it == by_pred_.end() ? kNone : it->second;
  }

  /// True when members() lists every ground member of the set.
  bool exact() const { return set_.is_extensional(); }
  bool enumeration_complete() {
    build();
    return complete_;
  }

 private:
  void build() {
    if (built_ || set_.is_universal()) return;
    built_ = true;
    auto e = enumerate(set_, u_, depth_);
    complete_ = e.complete;
    for (auto& a : e.atoms) by_pred_[{a.predicate(), a.arity()}].push_back(std::move(a));
  }

  const AtomSet& set_;
  GroundUniverse& u_;
  std::size_t depth_;
  bool built_ = false;
  bool complete_ = true;
  std::map<std::pair<std::string, std::size_t>, std::vector<Atom>> by_pred_;
};

struct SolveStats {
  bool exhaustive = true;  // false if some branch relied on depth-bounded enumeration
};

namespace detail {

class BodySolver {
 public:
  BodySolver(SetIndex& idx, SolveStats& stats) : idx_(idx), stats_(stats) {}

  // Calls `k` with each solution; `k` returns false to stop. Returns false
  // if stopped.
  bool run(const Query& atoms, const Substitution& theta, bool all_groundings, std::size_t cap,
           const std::function<bool(const Substitution&)>& k) {
    all_ = all_groundings;
    cap_ = cap;
    return step(atoms, theta, k);
  }

 private:
  bool step(const Query& atoms, const Substitution& theta, const std::function<bool(const Substitution&)>& k) {
    // Ground atoms first: they only filter.
    std::optional<std::size_t> open;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (atoms[i].is_cut()) continue;
      Atom a = theta.apply(atoms[i]);
      if (a.is_ground()) {
        if (!idx_.set().contains(a)) return true;
      } else if (!open) {
        open = i;
      }
    }
    if (!open) return k(theta);
    Atom a = theta.apply(atoms[*open]);
    if (idx_.set().is_universal()) {
      auto vs = vars_of(a);
      if (!all_) {
        Substitution g;
        Term c = idx_.universe().any_constant();
        for (const auto& v : vs) g.bind(v, c);
        return step(atoms, theta.compose(g), k);
      }
      stats_.exhaustive = false;
      const auto values = idx_.universe().up_to(idx_.depth());
      std::vector<std::size_t> odo(vs.size(), 0);
      for (;;) {
        if (++count_ > cap_) return false;
        Substitution g;
        for (std::size_t i = 0; i < vs.size(); ++i) g.bind(vs[i], values[odo[i]]);
        if (!step(atoms, theta.compose(g), k)) return false;
        std::size_t j = vs.size();
        while (j > 0) {
          --j;
          if (++odo[j] < values.size()) break;
          odo[j] = 0;
          if (j == 0) return true;
        }
        if (vs.empty()) return true;
      }
    }
    if (!idx_.exact()) stats_.exhaustive = false;
    if (!idx_.enumeration_complete()) stats_.exhaustive = false;
    for (const auto& m : idx_.members(a.predicate(), a.arity())) {
      auto tau = match(a, m);
      if (!tau) continue;
      if (++count_ > cap_) {
        stats_.exhaustive = false;
        return false;
      }
      if (!step(atoms, theta.compose(*tau), k)) return false;
    }
    return true;
  }

  SetIndex& idx_;
  SolveStats& stats_;
  bool all_ = false;
  std::size_t cap_ = 0;
  std::size_t count_ = 0;
};

}  // namespace detail

inline constexpr std::size_t kDefaultSolveCap = 5'000'000;

/// Some ground η over vars(atoms θ) ∪ extra with every atom in the set or !.
inline std::optional<Substitution> solve_first(const Query& atoms, const Substitution& theta,
                                               const std::vector<std::string>& extra, SetIndex& idx, SolveStats& stats) {
  std::optional<Substitution> found;
  detail::BodySolver(idx, stats).run(atoms, theta, false, kDefaultSolveCap, [&](const Substitution& s) {
    found = s;
    return false;
  });
  if (found) {
    Substitution out = *found;
    Term c = idx.universe().any_constant();
    for (const auto& v : extra) {
      Term t = out.apply(Term::var(v));
      for (const auto& w : vars_of(t)) out = out.compose(Substitution{{w, c}});
    }
    for (const auto& a : atoms)
      for (const auto& w : vars_of(out.apply(a))) out = out.compose(Substitution{{w, c}});
    return out;
  }
  return std::nullopt;
}

/// Every ground η over vars(atoms θ) with all atoms in the set or !, up to the
/// index depth. `k` returns false to stop early.
inline void solve_all(const Query& atoms, const Substitution& theta, SetIndex& idx, SolveStats& stats,
                      const std::function<bool(const Substitution&)>& k, std::size_t cap = kDefaultSolveCap) {
  detail::BodySolver(idx, stats).run(atoms, theta, true, cap, k);
}

}  // namespace cutcheck
