#pragma once

// Depth-first, left-to-right interpreter with cut barriers, written the way a
// Prolog engine backtracks. Shares no traversal code with the tree pruner so
// the two can be checked against each other.

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cutcheck/ld_tree.hpp"
#include "cutcheck/term.hpp"

namespace cutcheck {

struct SearchResult {
  std::vector<Query> answers;  // discovery order
  bool exact = true;           // false if the budget stopped the search
};

namespace detail {

class PrologMachine {
 public:
  PrologMachine(const Program& p, Budget b, std::set<std::string> reserved)
      : program_(p), budget_(b), renamer_(std::move(reserved)) {}

  SearchResult run(const Query& q) {
    SearchResult result;
    std::vector<Goal> goals;
    for (const auto& a : q) goals.push_back({a, 0});
    Query answer = q;
    std::size_t depth = 0;
    cut_height_.assign(1, 0);
    std::size_t steps = 0;

    for (;;) {
      bool need_backtrack = false;
      if (goals.empty()) {
        result.answers.push_back(answer);
        need_backtrack = true;
      } else if (depth >= budget_.steps || ++steps > budget_.nodes) {
        result.exact = false;
        return result;
      } else if (goals.front().atom.is_cut()) {
        // Commit: drop the choice points of the clause's call and all younger ones.
        choices_.resize(cut_height_[goals.front().barrier]);
        goals.erase(goals.begin());
        ++depth;
        continue;
      } else {
        std::size_t frame = cut_height_.size();
        cut_height_.push_back(choices_.size());
        choices_.push_back({std::move(goals), std::move(answer), 0, frame, depth});
        need_backtrack = true;
      }
      if (need_backtrack && !resume(goals, answer, depth)) return result;
    }
  }

 private:
  struct Goal {
    Atom atom;
    std::size_t barrier;  // call frame that a ! commits; 0 is the top level
  };
  struct ChoicePoint {
    std::vector<Goal> goals;  // goals[0] is the call being resolved
    Query answer;
    std::size_t next_clause;
    std::size_t frame;
    std::size_t depth;
  };

  // Takes the next untried clause of the youngest choice point, popping
  // exhausted ones. Returns false when the search space is exhausted.
  bool resume(std::vector<Goal>& goals, Query& answer, std::size_t& depth) {
    while (!choices_.empty()) {
      ChoicePoint& cp = choices_.back();
      const Atom& call = cp.goals.front().atom;
      while (cp.next_clause < program_.clauses.size()) {
        const Clause& c = program_.clauses[cp.next_clause++];
        if (c.head.predicate() != call.predicate() || c.head.arity() != call.arity()) continue;
        Clause v = renamer_.rename_apart(c);
        auto mgu = unify(call, v.head);
        if (!mgu) continue;
        goals.clear();
        for (const auto& b : v.body) goals.push_back({mgu->apply(b), cp.frame});
        for (std::size_t k = 1; k < cp.goals.size(); ++k)
          goals.push_back({mgu->apply(cp.goals[k].atom), cp.goals[k].barrier});
        answer = mgu->apply(cp.answer);
        depth = cp.depth + 1;
        return true;
      }
      choices_.pop_back();
    }
    return false;
  }

  const Program& program_;
  Budget budget_;
  Renamer renamer_;
  std::vector<ChoicePoint> choices_;
  std::vector<std::size_t> cut_height_;  // frame -> choice stack height at call time
};

}  // namespace detail

/// All answers Prolog would report for `q`, in order. `budget.nodes` bounds the
/// total number of steps, `budget.steps` the derivation length.
inline SearchResult prolog_search(const Program& program, const Query& q, Budget budget = {}) {
  return detail::PrologMachine(program, budget, var_set(q)).run(q);
}

}  // namespace cutcheck
