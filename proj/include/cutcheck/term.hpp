#pragma once

// First-order terms, atoms, substitutions, unification and matching.
//
// Terms are immutable and share structure through reference-counted nodes,
// so copying a Term is cheap and values can be handed across threads.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <compare>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cutcheck {

inline constexpr const char* kNil = "[]";
inline constexpr const char* kCons = ".";
inline constexpr const char* kCutName = "!";

class Term {
 public:
  Term() : Term(make(kNil)) {}

  static Term var(std::string name) {
    if (name.empty()) throw std::invalid_argument("variable name must be nonempty");
    auto n = std::make_shared<Node>();
    n->is_var = true;
    n->name = std::move(name);
    n->ground = false;
    n->depth = 0;
    return Term(std::move(n));
  }

  static Term make(std::string functor, std::vector<Term> args = {}) {
    auto n = std::make_shared<Node>();
    n->is_var = false;
    n->name = std::move(functor);
    n->ground = true;
    n->depth = 0;
    n->size = 1;
    for (const auto& a : args) {
      n->ground = n->ground && a.is_ground();
      n->depth = std::max(n->depth, a.depth() + 1);
      n->size = a.size() > kMaxSize - n->size ? kMaxSize : n->size + a.size();
    }
    n->args = std::move(args);
    return Term(std::move(n));
  }

  static Term cons(Term head, Term tail) { return make(kCons, {std::move(head), std::move(tail)}); }
  static Term nil() { return make(kNil); }

  /// Builds [e1,...,en|tail].
  static Term list(std::span<const Term> elems, Term tail = nil()) {
    Term t = std::move(tail);
    for (auto it = elems.rbegin(); it != elems.rend(); ++it) t = cons(*it, t);
    return t;
  }
  static Term list(std::initializer_list<Term> elems, Term tail = nil()) {
    return list(std::span<const Term>(elems.begin(), elems.size()), std::move(tail));
  }

  bool is_var() const { return node_->is_var; }
  bool is_compound() const { return !node_->is_var; }
  bool is_constant() const { return !node_->is_var && node_->args.empty(); }
  bool is_nil() const { return is_constant() && node_->name == kNil; }
  bool is_cons() const { return !node_->is_var && node_->name == kCons && node_->args.size() == 2; }

  /// Variable name or functor symbol.
  const std::string& name() const { return node_->name; }
  std::span<const Term> args() const { return node_->args; }
  std::size_t arity() const { return node_->args.size(); }
  const Term& arg(std::size_t i) const { return node_->args.at(i); }

  bool is_ground() const { return node_->ground; }

  /// depth(constant) = depth(var) = 0, depth(f(t...)) = 1 + max depth(t).
  std::size_t depth() const { return node_->depth; }

  /// Number of symbol occurrences, saturating. Terms built by repeated
  /// substitution share subterms, so this can be far larger than the memory
  /// they take; traversals switch to per-node memoization above kShared.
  std::size_t size() const { return node_->size; }
  static constexpr std::size_t kMaxSize = std::numeric_limits<std::size_t>::max();
  static constexpr std::size_t kShared = 512;
  bool large() const { return node_->size > kShared; }

  bool same_node(const Term& o) const { return node_ == o.node_; }
  const void* node_id() const { return node_.get(); }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.large() && b.large()) {
      std::set<std::pair<const void*, const void*>> seen;
      return equal_shared(a, b, seen);
    }
    return equal_plain(a, b);
  }

  // Total order: by depth, variables before compounds, then by name, arity
  // and arguments left to right.
  friend std::strong_ordering operator<=>(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (auto c = a.depth() <=> b.depth(); c != 0) return c;
    if (a.is_var() != b.is_var()) return a.is_var() ? std::strong_ordering::less : std::strong_ordering::greater;
    if (auto c = a.name().compare(b.name()); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    if (auto c = a.arity() <=> b.arity(); c != 0) return c;
    for (std::size_t i = 0; i < a.arity(); ++i)
      if (auto c = a.arg(i) <=> b.arg(i); c != 0) return c;
    return std::strong_ordering::equal;
  }

 private:
  struct Node {
    bool is_var = false;
    std::string name;
    std::vector<Term> args;
    bool ground = true;
    std::size_t depth = 0;
    std::size_t size = 1;
  };
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static bool equal_head(const Term& a, const Term& b) {
    return a.node_->is_var == b.node_->is_var && a.node_->name == b.node_->name &&
           a.node_->args.size() == b.node_->args.size() && a.node_->ground == b.node_->ground &&
           a.node_->depth == b.node_->depth && a.node_->size == b.node_->size;
  }
  static bool equal_shared(const Term& a, const Term& b, std::set<std::pair<const void*, const void*>>& seen) {
    if (a.node_ == b.node_) return true;
    if (!equal_head(a, b)) return false;
    if (!seen.insert({a.node_id(), b.node_id()}).second) return true;
    for (std::size_t i = 0; i < a.node_->args.size(); ++i)
      if (!equal_shared(a.node_->args[i], b.node_->args[i], seen)) return false;
    return true;
  }
  static bool equal_plain(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    if (!equal_head(a, b)) return false;
    for (std::size_t i = 0; i < a.node_->args.size(); ++i)
      if (!equal_plain(a.node_->args[i], b.node_->args[i])) return false;
    return true;
  }
  std::shared_ptr<const Node> node_;
};

/// Thrown when a cut atom is handed to unification. Cut is consumed by the
/// derivation step, never resolved against a clause head.
class CutUnificationError : public std::logic_error {
 public:
  CutUnificationError() : std::logic_error("cut atom cannot be unified") {}
};

class Atom {
 public:
  Atom() : Atom(cut()) {}

  static Atom cut() { return Atom(Term::make(kCutName), true); }
  static Atom make(std::string predicate, std::vector<Term> args = {}) {
    if (predicate == kCutName && !args.empty()) throw std::invalid_argument("! takes no arguments");
    bool is_cut = predicate == kCutName;
    return Atom(Term::make(std::move(predicate), std::move(args)), is_cut);
  }
  /// Reinterprets a compound term as an atom with the same symbol and arguments.
  static Atom from_term(const Term& t) {
    if (t.is_var()) throw std::invalid_argument("a variable is not an atom");
    return Atom(t, t.name() == kCutName && t.arity() == 0);
  }

  bool is_cut() const { return cut_; }
  const std::string& predicate() const { return term_.name(); }
  std::span<const Term> args() const { return term_.args(); }
  std::size_t arity() const { return term_.arity(); }
  const Term& arg(std::size_t i) const { return term_.arg(i); }
  bool is_ground() const { return term_.is_ground(); }
  const Term& as_term() const { return term_; }

  friend bool operator==(const Atom& a, const Atom& b) { return a.cut_ == b.cut_ && a.term_ == b.term_; }
  friend std::strong_ordering operator<=>(const Atom& a, const Atom& b) {
    if (a.cut_ != b.cut_) return a.cut_ ? std::strong_ordering::less : std::strong_ordering::greater;
    if (auto c = a.predicate().compare(b.predicate()); c != 0)
      return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    return a.term_ <=> b.term_;
  }

 private:
  Atom(Term t, bool is_cut) : term_(std::move(t)), cut_(is_cut) {}
  Term term_;
  bool cut_ = false;
};

using Query = std::vector<Atom>;

struct Clause {
  Atom head;
  std::vector<Atom> body;

  bool has_cut() const {
    return std::any_of(body.begin(), body.end(), [](const Atom& a) { return a.is_cut(); });
  }
  friend bool operator==(const Clause&, const Clause&) = default;
};

struct Program {
  std::vector<Clause> clauses;
  friend bool operator==(const Program&, const Program&) = default;
};

// ---------------------------------------------------------------------------
// Variables

namespace detail {
inline void collect_vars(const Term& t, std::vector<std::string>& out, std::set<std::string>& seen,
                         std::set<const void*>* visited = nullptr) {
  if (t.is_ground()) return;
  if (t.large() && !visited) {
    std::set<const void*> v;
    collect_vars(t, out, seen, &v);
    return;
  }
  if (visited && !t.is_var() && !visited->insert(t.node_id()).second) return;
  if (t.is_var()) {
    if (seen.insert(t.name()).second) out.push_back(t.name());
    return;
  }
  for (const auto& a : t.args()) collect_vars(a, out, seen, visited);
}
}  // namespace detail

/// Variables in order of first occurrence.
inline std::vector<std::string> vars_of(const Term& t) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  detail::collect_vars(t, out, seen);
  return out;
}
inline std::vector<std::string> vars_of(std::span<const Atom> atoms) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& a : atoms) detail::collect_vars(a.as_term(), out, seen);
  return out;
}
inline std::vector<std::string> vars_of(const Atom& a) { return vars_of(a.as_term()); }
inline std::vector<std::string> vars_of(const Clause& c) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  detail::collect_vars(c.head.as_term(), out, seen);
  for (const auto& b : c.body) detail::collect_vars(b.as_term(), out, seen);
  return out;
}

template <typename E>
std::set<std::string> var_set(const E& e) {
  auto v = vars_of(e);
  return {v.begin(), v.end()};
}

inline bool occurs_in(const std::string& var, const Term& t) {
  if (t.is_ground()) return false;
  if (t.is_var()) return t.name() == var;
  if (t.large()) {
    std::vector<std::string> vs;
    std::set<std::string> seen;
    detail::collect_vars(t, vs, seen);
    return seen.count(var) > 0;
  }
  for (const auto& a : t.args())
    if (occurs_in(var, a)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Substitutions

class Substitution {
 public:
  Substitution() = default;
  Substitution(std::initializer_list<std::pair<const std::string, Term>> init) {
    for (const auto& [k, v] : init) bind(k, v);
  }

  /// Adds X/t. Identity bindings are dropped.
  void bind(const std::string& var, Term t) {
    if (t.is_var() && t.name() == var) {
      bindings_.erase(var);
      return;
    }
    bindings_.insert_or_assign(var, std::move(t));
  }

  const Term* lookup(const std::string& var) const {
    auto it = bindings_.find(var);
    return it == bindings_.end() ? nullptr : &it->second;
  }
  bool binds(const std::string& var) const { return bindings_.count(var) != 0; }
  bool empty() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }
  const std::map<std::string, Term>& bindings() const { return bindings_; }

  std::set<std::string> domain() const {
    std::set<std::string> d;
    for (const auto& [k, v] : bindings_) d.insert(k);
    return d;
  }
  std::set<std::string> range_vars() const {
    std::set<std::string> r;
    for (const auto& [k, v] : bindings_)
      for (auto& x : vars_of(v)) r.insert(x);
    return r;
  }
  std::set<std::string> all_vars() const {
    auto d = domain();
    auto r = range_vars();
    d.insert(r.begin(), r.end());
    return d;
  }
  bool is_idempotent() const {
    auto r = range_vars();
    return std::none_of(bindings_.begin(), bindings_.end(), [&](const auto& kv) { return r.count(kv.first); });
  }
  bool is_ground() const {
    return std::all_of(bindings_.begin(), bindings_.end(), [](const auto& kv) { return kv.second.is_ground(); });
  }

  Term apply(const Term& t) const {
    if (bindings_.empty() || t.is_ground()) return t;
    if (t.large()) {
      std::map<const void*, Term> memo;
      return apply_shared(t, memo);
    }
    if (t.is_var()) {
      const Term* b = lookup(t.name());
      return b ? *b : t;
    }
    std::vector<Term> args;
    args.reserve(t.arity());
    bool changed = false;
    for (const auto& a : t.args()) {
      args.push_back(apply(a));
      changed = changed || !args.back().same_node(a);
    }
    return changed ? Term::make(t.name(), std::move(args)) : t;
  }
  Term apply_shared(const Term& t, std::map<const void*, Term>& memo) const {
    if (t.is_ground()) return t;
    if (t.is_var()) {
      const Term* b = lookup(t.name());
      return b ? *b : t;
    }
    if (auto it = memo.find(t.node_id()); it != memo.end()) return it->second;
    std::vector<Term> args;
    args.reserve(t.arity());
    bool changed = false;
    for (const auto& a : t.args()) {
      args.push_back(apply_shared(a, memo));
      changed = changed || !args.back().same_node(a);
    }
    Term out = changed ? Term::make(t.name(), std::move(args)) : t;
    memo.emplace(t.node_id(), out);
    return out;
  }
  Atom apply(const Atom& a) const {
    if (a.is_cut()) return a;
    return Atom::from_term(apply(a.as_term()));
  }
  Query apply(std::span<const Atom> q) const {
    Query out;
    out.reserve(q.size());
    for (const auto& a : q) out.push_back(apply(a));
    return out;
  }
  Clause apply(const Clause& c) const { return Clause{apply(c.head), apply(c.body)}; }

  /// Composition: (this then other), i.e. E(this·other) = (E this) other.
  Substitution compose(const Substitution& other) const {
    Substitution out;
    for (const auto& [k, v] : bindings_) out.bind(k, other.apply(v));
    for (const auto& [k, v] : other.bindings_)
      if (!binds(k)) out.bind(k, v);
    return out;
  }

  Substitution restrict_to(const std::set<std::string>& vars) const {
    Substitution out;
    for (const auto& [k, v] : bindings_)
      if (vars.count(k)) out.bind(k, v);
    return out;
  }

  friend bool operator==(const Substitution&, const Substitution&) = default;

 private:
  std::map<std::string, Term> bindings_;
};

// ---------------------------------------------------------------------------
// Unification (Robinson, occurs-check always on)

namespace detail {

class Unifier {
 public:
  bool unify(const Term& a, const Term& b) {
    Term x = walk(a);
    Term y = walk(b);
    if (x.same_node(y)) return true;
    if (x.is_var() && y.is_var() && x.name() == y.name()) return true;
    if (x.is_var()) return bind(x.name(), y);
    if (y.is_var()) return bind(y.name(), x);
    if (x.name() != y.name() || x.arity() != y.arity()) return false;
    // a pair seen before is already unified (or failure ended the run)
    if ((x.large() || y.large()) && !done_.insert({x.node_id(), y.node_id()}).second) return true;
    for (std::size_t i = 0; i < x.arity(); ++i)
      if (!unify(x.arg(i), y.arg(i))) return false;
    return true;
  }

  // Fully resolved, hence idempotent, substitution.
  Substitution result() const {
    Substitution s;
    std::map<const void*, Term> memo;
    for (const auto& [k, v] : triangle_) s.bind(k, resolve(v, memo));
    return s;
  }

 private:
  Term walk(Term t) const {
    while (t.is_var()) {
      auto it = triangle_.find(t.name());
      if (it == triangle_.end()) break;
      t = it->second;
    }
    return t;
  }
  Term resolve(const Term& t, std::map<const void*, Term>& memo) const {
    if (t.is_ground()) return t;
    Term w = walk(t);
    if (w.is_var()) return w;
    if (auto it = memo.find(w.node_id()); it != memo.end()) return it->second;
    std::vector<Term> args;
    args.reserve(w.arity());
    for (const auto& a : w.args()) args.push_back(resolve(a, memo));
    Term out = Term::make(w.name(), std::move(args));
    memo.emplace(w.node_id(), out);
    return out;
  }
  bool occurs(const std::string& v, const Term& t, std::set<const void*>* seen) const {
    if (t.is_ground()) return false;
    Term w = walk(t);
    if (w.is_var()) return w.name() == v;
    if (seen && !seen->insert(w.node_id()).second) return false;
    for (const auto& a : w.args())
      if (occurs(v, a, seen)) return true;
    return false;
  }
  bool bind(const std::string& v, const Term& t) {
    std::set<const void*> seen;
    if (occurs(v, t, t.large() ? &seen : nullptr)) return false;
    triangle_.emplace(v, t);
    return true;
  }

  std::map<std::string, Term> triangle_;
  std::set<std::pair<const void*, const void*>> done_;
};

}  // namespace detail

/// Most general unifier (idempotent and relevant), or nullopt.
inline std::optional<Substitution> unify(const Term& a, const Term& b) {
  detail::Unifier u;
  if (!u.unify(a, b)) return std::nullopt;
  return u.result();
}

inline std::optional<Substitution> unify(const Atom& a, const Atom& b) {
  if (a.is_cut() || b.is_cut()) throw CutUnificationError();
  if (a.predicate() != b.predicate() || a.arity() != b.arity()) return std::nullopt;
  return unify(a.as_term(), b.as_term());
}

/// Simultaneous unification of two equal-length atom sequences (no cuts).
inline std::optional<Substitution> unify(std::span<const Atom> a, std::span<const Atom> b) {
  if (a.size() != b.size()) return std::nullopt;
  detail::Unifier u;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_cut() || b[i].is_cut()) throw CutUnificationError();
    if (a[i].predicate() != b[i].predicate() || a[i].arity() != b[i].arity()) return std::nullopt;
    if (!u.unify(a[i].as_term(), b[i].as_term())) return std::nullopt;
  }
  return u.result();
}

// ---------------------------------------------------------------------------
// Matching: one-sided, variables of `specific` are rigid.

namespace detail {
inline bool match_into(const Term& g, const Term& s, std::map<std::string, Term>& m,
                       std::set<std::pair<const void*, const void*>>* seen = nullptr) {
  if (g.is_var()) {
    auto [it, inserted] = m.emplace(g.name(), s);
    return inserted || it->second == s;
  }
  if (s.is_var() || g.name() != s.name() || g.arity() != s.arity()) return false;
  if (g.is_ground()) return g == s;
  std::set<std::pair<const void*, const void*>> local;
  if (!seen && (g.large() || s.large())) seen = &local;
  if (seen && !seen->insert({g.node_id(), s.node_id()}).second) return true;
  for (std::size_t i = 0; i < g.arity(); ++i)
    if (!match_into(g.arg(i), s.arg(i), m, seen)) return false;
  return true;
}
}  // namespace detail

inline std::optional<Substitution> match(const Term& general, const Term& specific) {
  std::map<std::string, Term> m;
  if (!detail::match_into(general, specific, m)) return std::nullopt;
  Substitution s;
  for (auto& [k, v] : m) s.bind(k, v);
  return s;
}

inline std::optional<Substitution> match(const Atom& general, const Atom& specific) {
  if (general.is_cut() || specific.is_cut())
    return general.is_cut() && specific.is_cut() ? std::optional<Substitution>(Substitution{}) : std::nullopt;
  if (general.predicate() != specific.predicate() || general.arity() != specific.arity()) return std::nullopt;
  return match(general.as_term(), specific.as_term());
}

inline std::optional<Substitution> match(std::span<const Atom> general, std::span<const Atom> specific) {
  if (general.size() != specific.size()) return std::nullopt;
  std::map<std::string, Term> m;
  for (std::size_t i = 0; i < general.size(); ++i) {
    if (general[i].is_cut() != specific[i].is_cut()) return std::nullopt;
    if (general[i].is_cut()) continue;
    if (!detail::match_into(general[i].as_term(), specific[i].as_term(), m)) return std::nullopt;
  }
  Substitution s;
  for (auto& [k, v] : m) s.bind(k, v);
  return s;
}

template <typename E>
bool is_instance_of(const E& specific, const E& general) {
  return match(general, specific).has_value();
}

/// True iff the two expressions are variants (instances of each other).
inline bool is_variant(const Atom& a, const Atom& b) { return match(a, b) && match(b, a); }

// ---------------------------------------------------------------------------
// Renaming apart

/// Produces standardized-apart clause variants. Names are `<orig>_<n>` with
/// a monotone counter, so a run is reproducible and no two calls share a name.
class Renamer {
 public:
  explicit Renamer(std::set<std::string> reserved = {}) : reserved_(std::move(reserved)) {}

  void reserve(const std::set<std::string>& names) { reserved_.insert(names.begin(), names.end()); }

  Substitution fresh_for(const std::vector<std::string>& vars) {
    for (;;) {
      std::size_t n = ++counter_;
      Substitution s;
      bool clash = false;
      for (const auto& v : vars) {
        std::string fresh = v + "_" + std::to_string(n);
        if (reserved_.count(fresh)) {
          clash = true;
          break;
        }
        s.bind(v, Term::var(fresh));
      }
      if (!clash) return s;
    }
  }

  Clause rename_apart(const Clause& c) { return fresh_for(vars_of(c)).apply(c); }
  Clause rename_apart(const Clause& c, const std::set<std::string>& forbidden) {
    reserve(forbidden);
    return rename_apart(c);
  }
  Atom rename_apart(const Atom& a) { return fresh_for(vars_of(a)).apply(a); }

  std::size_t counter() const { return counter_; }

 private:
  std::set<std::string> reserved_;
  std::size_t counter_ = 0;
};

// ---------------------------------------------------------------------------
// Lists and norms

inline bool is_list(const Term& t) {
  const Term* cur = &t;
  while (cur->is_cons()) cur = &cur->arg(1);
  return cur->is_nil();
}

/// Elements of a proper list; nullopt for anything else.
inline std::optional<std::vector<Term>> list_elements(const Term& t) {
  std::vector<Term> out;
  const Term* cur = &t;
  while (cur->is_cons()) {
    out.push_back(cur->arg(0));
    cur = &cur->arg(1);
  }
  if (!cur->is_nil()) return std::nullopt;
  return out;
}

class NotAListError : public std::domain_error {
 public:
  NotAListError() : std::domain_error("list_length of a non-list") {}
};

inline std::size_t list_length(const Term& t) {
  auto e = list_elements(t);
  if (!e) throw NotAListError();
  return e->size();
}

/// |[h|t]| = 1 + |t|, |f(...)| = 0 for any other functor. Variables count 0.
inline std::size_t list_norm(const Term& t) {
  std::size_t n = 0;
  const Term* cur = &t;
  while (cur->is_cons()) {
    ++n;
    cur = &cur->arg(1);
  }
  return n;
}

/// Number of constructor occurrences.
inline std::size_t term_size(const Term& t) {
  if (t.is_var()) return 0;
  std::size_t n = 1;
  for (const auto& a : t.args()) n += term_size(a);
  return n;
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {
inline bool is_plain_name(const std::string& s) {
  if (s.empty()) return false;
  if (s == kNil || s == kCutName) return true;
  if (std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) return true;
  if (!(s[0] >= 'a' && s[0] <= 'z')) return false;
  std::size_t i = 1;
  while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
  while (i < s.size() && s[i] == '\'') ++i;
  return i == s.size();
}
inline std::string quote_name(const std::string& s) {
  if (is_plain_name(s)) return s;
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "''";
    else out += c;
  }
  return out + "'";
}
inline void print(std::ostream& os, const Term& t) {
  if (t.is_var()) {
    os << t.name();
    return;
  }
  if (t.is_cons()) {
    os << '[';
    print(os, t.arg(0));
    const Term* cur = &t.arg(1);
    while (cur->is_cons()) {
      os << ',';
      print(os, cur->arg(0));
      cur = &cur->arg(1);
    }
    if (!cur->is_nil()) {
      os << '|';
      print(os, *cur);
    }
    os << ']';
    return;
  }
  os << quote_name(t.name());
  if (t.arity() == 0) return;
  os << '(';
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) os << ',';
    print(os, t.arg(i));
  }
  os << ')';
}
}  // namespace detail

inline std::string to_string(const Term& t) {
  std::ostringstream os;
  detail::print(os, t);
  return os.str();
}
inline std::string to_string(const Atom& a) { return a.is_cut() ? std::string(kCutName) : to_string(a.as_term()); }
inline std::string to_string(std::span<const Atom> q) {
  std::string out;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (i) out += ", ";
    out += to_string(q[i]);
  }
  return out;
}
inline std::string to_string(const Clause& c) {
  std::string out = to_string(c.head);
  if (!c.body.empty()) out += " :- " + to_string(std::span<const Atom>(c.body));
  return out + ".";
}
inline std::string to_string(const Program& p) {
  std::string out;
  for (const auto& c : p.clauses) out += to_string(c) + "\n";
  return out;
}
inline std::string to_string(const Substitution& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& [k, v] : s.bindings()) {
    if (!first) out += ", ";
    first = false;
    out += k + "/" + to_string(v);
  }
  return out + "}";
}

inline std::ostream& operator<<(std::ostream& os, const Term& t) { return os << to_string(t); }
inline std::ostream& operator<<(std::ostream& os, const Atom& a) { return os << to_string(a); }
inline std::ostream& operator<<(std::ostream& os, const Substitution& s) { return os << to_string(s); }

}  // namespace cutcheck
