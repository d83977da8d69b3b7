#pragma once

// Level-mapping termination checks: recurrent and acceptable programs, and
// bounded queries.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cutcheck/enumerate.hpp"
#include "cutcheck/solve.hpp"
#include "cutcheck/spec_file.hpp"
#include "cutcheck/term.hpp"
#include "cutcheck/verdict.hpp"

namespace cutcheck {

class MissingLevelMappingError : public std::invalid_argument {
 public:
  explicit MissingLevelMappingError(const std::string& pred)
      : std::invalid_argument("no level mapping declared for " + pred) {}
};

using LevelMaps = std::map<PredKey, LevelMapping>;

inline std::size_t level_of(const Atom& a, const LevelMaps& lm) {
  if (a.is_cut()) return 0;
  auto it = lm.find({a.predicate(), a.arity()});
  if (it == lm.end()) throw MissingLevelMappingError(a.predicate() + "/" + std::to_string(a.arity()));
  return it->second.eval(a);
}

inline void require_levels(const Program& p, const LevelMaps& lm) {
  for (const auto& c : p.clauses) {
    level_of(Atom::make(c.head.predicate(), std::vector<Term>(c.head.arity(), Term::nil())), lm);
    for (const auto& b : c.body)
      if (!b.is_cut()) level_of(Atom::make(b.predicate(), std::vector<Term>(b.arity(), Term::nil())), lm);
  }
}

namespace detail {

// One ground representative for each (list norm, size) signature among the
// ground terms of depth <= d. Levels built from len and size depend on a
// variable's value only through this signature, so trying representatives
// covers every ground instance with values of depth <= d.
inline std::vector<Term> signature_representatives(GroundUniverse& u, std::size_t d) {
  std::map<std::pair<std::size_t, std::size_t>, Term> rep;
  for (const auto& t : u.up_to(d)) rep.emplace(std::make_pair(list_norm(t), term_size(t)), t);
  std::vector<Term> out;
  for (auto& [k, t] : rep) out.push_back(t);
  return out;
}

template <typename F>
bool for_each_grounding(const std::vector<std::string>& vs, const std::vector<Term>& values, F&& f) {
  std::vector<std::size_t> odo(vs.size(), 0);
  for (;;) {
    Substitution s;
    for (std::size_t i = 0; i < vs.size(); ++i) s.bind(vs[i], values[odo[i]]);
    if (!f(s)) return false;
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

}  // namespace detail

/// |H| > |B_i| for every ground instance of every clause, with variable
/// values of depth <= depth.
inline Verdict recurrent_check(const Program& p, const LevelMaps& lm, GroundUniverse& u, std::size_t depth) {
  require_levels(p, lm);
  const auto reps = detail::signature_representatives(u, depth);
  for (std::size_t ci = 0; ci < p.clauses.size(); ++ci) {
    const Clause& c = p.clauses[ci];
    std::optional<Witness> bad;
    detail::for_each_grounding(vars_of(c), reps, [&](const Substitution& s) {
      Clause g = s.apply(c);
      std::size_t h = level_of(g.head, lm);
      for (std::size_t i = 0; i < g.body.size(); ++i) {
        if (g.body[i].is_cut()) continue;
        std::size_t b = level_of(g.body[i], lm);
        if (h <= b) {
          bad = Witness{"level_not_decreasing", g.head, ci, s, g,
                        "|" + to_string(g.head) + "| = " + std::to_string(h) + " <= |" + to_string(g.body[i]) +
                            "| = " + std::to_string(b)};
          return false;
        }
      }
      return true;
    });
    if (bad) return Verdict::refuted(*bad);
  }
  return Verdict::verified("all ground instances with values of depth <= " + std::to_string(depth));
}

inline constexpr std::size_t kAcceptableCap = 2'000'000;

/// Bounded check of acceptability: the correctness premise is checked by the
/// caller; here |H| > |B_i| whenever B_1..B_{i-1} are in S.
inline Verdict acceptable_levels(const Program& p, SetIndex& s, const LevelMaps& lm, GroundUniverse& u,
                                 std::size_t depth) {
  require_levels(p, lm);
  const auto values = u.up_to(depth);
  std::size_t work = 0;
  bool capped = false;
  for (std::size_t ci = 0; ci < p.clauses.size(); ++ci) {
    const Clause& c = p.clauses[ci];
    for (std::size_t i = 0; i < c.body.size(); ++i) {
      if (c.body[i].is_cut()) continue;
      Query prefix(c.body.begin(), c.body.begin() + static_cast<std::ptrdiff_t>(i));
      std::optional<Witness> bad;
      SolveStats st;
      solve_all(prefix, Substitution{}, s, st, [&](const Substitution& eta) {
        Clause partial = eta.apply(c);
        std::vector<std::string> rest;
        for (const auto& v : vars_of(Query{partial.head, partial.body[i]})) rest.push_back(v);
        return detail::for_each_grounding(rest, values, [&](const Substitution& g) {
          if (++work > kAcceptableCap) {
            capped = true;
            return false;
          }
          Atom h = g.apply(partial.head);
          Atom b = g.apply(partial.body[i]);
          if (level_of(h, lm) <= level_of(b, lm)) {
            Substitution full = eta.compose(g);
            bad = Witness{"level_not_decreasing", h, ci, full, full.apply(c),
                          "|" + to_string(h) + "| <= |" + to_string(b) + "| with the prefix in S"};
            return false;
          }
          return true;
        });
      });
      if (bad) return Verdict::refuted(*bad);
      if (capped) return Verdict::unknown("instances", kAcceptableCap, "ground instance limit reached");
    }
  }
  return Verdict::verified("ground instances with values of depth <= " + std::to_string(depth));
}

/// Decided on the linear forms: an argument contributes a constant unless a
/// variable can grow it (an open list tail under len, any variable under size)
/// and its coefficient is positive.
inline Verdict bounded_query(const Query& q, const LevelMaps& lm) {
  std::size_t k = 0;
  for (const auto& a : q) {
    if (a.is_cut()) continue;
    auto it = lm.find({a.predicate(), a.arity()});
    if (it == lm.end()) throw MissingLevelMappingError(a.predicate() + "/" + std::to_string(a.arity()));
    std::size_t level = it->second.constant;
    for (const auto& sm : it->second.summands) {
      const Term& t = a.arg(sm.arg);
      std::size_t value;
      std::optional<std::string> grows;
      if (sm.norm == Norm::Len) {
        const Term* cur = &t;
        std::size_t n = 0;
        while (cur->is_cons()) {
          ++n;
          cur = &cur->arg(1);
        }
        if (cur->is_var()) grows = cur->name();
        value = n;
      } else {
        auto vs = vars_of(t);
        if (!vs.empty()) grows = vs.front();
        value = t.is_ground() ? term_size(t) : 0;
      }
      if (grows && sm.coefficient > 0) {
        Witness w{"unbounded_query", a, std::nullopt, {}, std::nullopt,
                  "level of " + to_string(a) + " grows without bound with " + *grows};
        return Verdict::refuted(w);
      }
      level += sm.coefficient * value;
    }
    k = std::max(k, level + 1);
  }
  return Verdict::verified("every ground instance has level < " + std::to_string(k));
}

}  // namespace cutcheck
