#pragma once

// Three-valued check results.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cutcheck/term.hpp"

namespace cutcheck {

enum class Outcome { Verified, Refuted, Unknown };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Verified: return "verified";
    case Outcome::Refuted: return "refuted";
    case Outcome::Unknown: return "unknown";
  }
  return "?";
}

/// A counterexample with enough data to re-run the failing check: the atom,
/// the clause (by program index), and the substitution or clause instance
/// that exhibits the failure.
struct Witness {
  std::string kind;
  std::optional<Atom> atom;
  std::optional<std::size_t> clause_index;
  Substitution substitution;
  std::optional<Clause> instance;
  std::string note;
};

struct Verdict {
  Outcome outcome = Outcome::Verified;
  std::optional<Witness> witness;  // set iff Refuted
  std::string bound;               // Unknown: the bound that ran out
  std::size_t bound_value = 0;
  std::string note;

  static Verdict verified(std::string note = {}) {
    Verdict v;
    v.note = std::move(note);
    return v;
  }
  static Verdict refuted(Witness w) {
    Verdict v;
    v.outcome = Outcome::Refuted;
    v.note = w.note;
    v.witness = std::move(w);
    return v;
  }
  static Verdict unknown(std::string bound, std::size_t value, std::string note = {}) {
    Verdict v;
    v.outcome = Outcome::Unknown;
    v.bound = std::move(bound);
    v.bound_value = value;
    v.note = std::move(note);
    return v;
  }

  bool verified_p() const { return outcome == Outcome::Verified; }
  bool refuted_p() const { return outcome == Outcome::Refuted; }
  bool unknown_p() const { return outcome == Outcome::Unknown; }
};

namespace detail {
inline int severity(Outcome o) { return o == Outcome::Verified ? 0 : o == Outcome::Unknown ? 1 : 2; }
}  // namespace detail

/// Conjunction: the weakest of the two (Refuted < Unknown < Verified); ties keep `a`.
inline Verdict conjoin(const Verdict& a, const Verdict& b) {
  return detail::severity(b.outcome) > detail::severity(a.outcome) ? b : a;
}

/// Disjunction: the strongest of the two; ties keep `a`.
inline Verdict disjoin(const Verdict& a, const Verdict& b) {
  return detail::severity(b.outcome) < detail::severity(a.outcome) ? b : a;
}

struct SubVerdict {
  std::string label;
  Verdict verdict;
};

struct AtomReport {
  Atom atom;
  Verdict verdict;
  std::optional<std::size_t> clause_index;  // the clause that settled it, if any
  std::vector<SubVerdict> details;
};

struct Bounds {
  std::size_t depth = 3;
  std::size_t nodes = 50'000;
  std::size_t steps = 200'000;
};

struct CheckReport {
  std::string check;
  std::string digest;
  Verdict verdict;
  Bounds bounds;
  std::vector<SubVerdict> stages;
  std::vector<AtomReport> per_atom;  // atoms that are not Verified
  std::size_t atoms_checked = 0;
  std::optional<double> timing_ms;
};

}  // namespace cutcheck
