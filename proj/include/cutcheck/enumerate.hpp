#pragma once

// Alphabets and bounded enumeration of ground terms.

#include <algorithm>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cutcheck/term.hpp"

namespace cutcheck {

struct Symbol {
  std::string name;
  std::size_t arity = 0;
  friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

struct Alphabet {
  std::vector<Symbol> functors;
  std::vector<Symbol> predicates;

  bool has_constant() const {
    return std::any_of(functors.begin(), functors.end(), [](const Symbol& s) { return s.arity == 0; });
  }
  bool has_functor(const std::string& name, std::size_t arity) const {
    return std::find(functors.begin(), functors.end(), Symbol{name, arity}) != functors.end();
  }
  void add_functor(const std::string& name, std::size_t arity) {
    if (!has_functor(name, arity)) functors.push_back({name, arity});
  }
  void add_predicate(const std::string& name, std::size_t arity) {
    Symbol s{name, arity};
    if (std::find(predicates.begin(), predicates.end(), s) == predicates.end()) predicates.push_back(s);
  }
  /// Sorted, duplicate-free functor list (the enumeration order).
  std::vector<Symbol> sorted_functors() const {
    auto f = functors;
    std::sort(f.begin(), f.end());
    f.erase(std::unique(f.begin(), f.end()), f.end());
    return f;
  }
};

class EmptyUniverseError : public std::invalid_argument {
 public:
  EmptyUniverseError() : std::invalid_argument("alphabet has no constant; the Herbrand universe is empty") {}
};

inline void collect_symbols(const Term& t, Alphabet& a) {
  if (t.is_var()) return;
  a.add_functor(t.name(), t.arity());
  for (const auto& x : t.args()) collect_symbols(x, a);
}
inline void collect_symbols(const Atom& at, Alphabet& a) {
  if (at.is_cut()) return;
  a.add_predicate(at.predicate(), at.arity());
  for (const auto& x : at.args()) collect_symbols(x, a);
}
inline void collect_symbols(const Program& p, Alphabet& a) {
  for (const auto& c : p.clauses) {
    collect_symbols(c.head, a);
    for (const auto& b : c.body) collect_symbols(b, a);
  }
}

/// Ground terms of the alphabet, generated lazily by exact depth and cached.
/// A cap on the number of materialized terms keeps accidental blow-ups from
/// exhausting memory; callers see `complete() == false` when it is hit.
class GroundUniverse {
 public:
  explicit GroundUniverse(Alphabet alphabet, std::size_t cap = 1'000'000)
      : alphabet_(alphabet), functors_(alphabet.sorted_functors()), cap_(cap) {
    if (!alphabet_.has_constant()) throw EmptyUniverseError();
    std::vector<Term> d0;
    for (const auto& f : functors_)
      if (f.arity == 0) d0.push_back(Term::make(f.name));
    std::sort(d0.begin(), d0.end());
    by_depth_.push_back(std::move(d0));
  }

  /// All ground terms of depth exactly d, sorted.
  const std::vector<Term>& exact(std::size_t d) {
    while (by_depth_.size() <= d && complete_) grow();
    static const std::vector<Term> kEmpty;
    return d < by_depth_.size() ? by_depth_[d] : kEmpty;
  }

  /// All ground terms of depth <= d in enumeration order.
  std::vector<Term> up_to(std::size_t d) {
    std::vector<Term> out;
    for (std::size_t i = 0; i <= d; ++i) {
      const auto& e = exact(i);
      out.insert(out.end(), e.begin(), e.end());
    }
    return out;
  }

  /// Proper ground lists of depth <= d, sorted.
  std::vector<Term> lists_up_to(std::size_t d) {
    auto it = lists_.find(d);
    if (it != lists_.end()) return it->second;
    std::vector<Term> out{Term::nil()};
    if (d > 0) {
      auto heads = up_to(d - 1);
      auto tails = lists_up_to(d - 1);
      for (const auto& h : heads)
        for (const auto& t : tails) {
          out.push_back(Term::cons(h, t));
          if (out.size() > cap_) {
            complete_ = false;
            break;
          }
        }
    }
    std::sort(out.begin(), out.end());
    lists_.emplace(d, out);
    return out;
  }

  bool complete() const { return complete_; }
  std::size_t cap() const { return cap_; }
  const Alphabet& alphabet() const { return alphabet_; }
  /// Some constant, used to close off otherwise unconstrained variables.
  Term any_constant() { return exact(0).front(); }

 private:
  void grow() {
    std::size_t d = by_depth_.size();
    std::vector<Term> below;
    for (const auto& level : by_depth_) below.insert(below.end(), level.begin(), level.end());
    std::vector<Term> out;
    std::size_t total = below.size();
    for (const auto& f : functors_) {
      if (f.arity == 0) continue;
      // Odometer over below^arity; keep tuples with at least one arg of depth d-1.
      std::vector<std::size_t> idx(f.arity, 0);
      if (below.empty()) continue;
      for (;;) {
        bool reaches = false;
        std::vector<Term> args;
        args.reserve(f.arity);
        for (auto i : idx) {
          args.push_back(below[i]);
          reaches = reaches || below[i].depth() + 1 == d;
        }
        if (reaches) {
          out.push_back(Term::make(f.name, std::move(args)));
          if (out.size() + total > cap_) {
            complete_ = false;
            break;
          }
        }
        std::size_t k = f.arity;
        while (k > 0) {
          --k;
          if (++idx[k] < below.size()) break;
          idx[k] = 0;
          if (k == 0) goto done;
        }
        if (f.arity == 0) break;
      }
    done:
      if (!complete_) break;
    }
    std::sort(out.begin(), out.end());
    by_depth_.push_back(std::move(out));
  }

  Alphabet alphabet_;
  std::vector<Symbol> functors_;
  std::size_t cap_;
  bool complete_ = true;
  std::vector<std::vector<Term>> by_depth_;
  std::map<std::size_t, std::vector<Term>> lists_;
};

/// Every ground term of construction depth <= depth, each exactly once, ordered
/// by depth, then functor, then arguments.
inline std::vector<Term> enumerate_ground(const Alphabet& alphabet, std::size_t depth) {
  GroundUniverse u(alphabet);
  return u.up_to(depth);
}

}  // namespace cutcheck
