#pragma once

// Specification sets: extensional ground sets, pattern sets with guards, and
// the universal set TB.
//
// A pattern denotes the atoms (ground or not) that are instances of its
// template under a matcher satisfying every guard. Guards are evaluated
// syntactically on whatever terms the matcher supplies:
//
//   list(X)            X is a '[]'-terminated list (its elements may be open)
//   ground(X)          X has no variables
//   ground_list(X)     both of the above
//   member(X, L)       L is a list and X is identical to one of its elements
//   subset(L1, L2)     both lists, each element of L1 is an element of L2
//   concat(A, B, C)    A and B are lists and C is identical to A ++ B
//   eq(T1, T2)         T1 and T2 are identical
//   not_in(A, Set)     A is ground and not in Set (S, pre or post)
//   any(X)             no constraint
//
// Each of these is preserved by instantiation, so every pattern set is
// closed under substitution and membership is decided exactly.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cutcheck/enumerate.hpp"
#include "cutcheck/term.hpp"
#include "cutcheck/verdict.hpp"

namespace cutcheck {

class AtomSet;

enum class GuardKind { List, Ground, GroundList, Member, Subset, Concat, Eq, NotIn, Any };

struct GuardInfo {
  GuardKind kind;
  const char* name;
  std::size_t arity;
};

inline constexpr GuardInfo kGuards[] = {
    {GuardKind::List, "list", 1},       {GuardKind::Ground, "ground", 1}, {GuardKind::GroundList, "ground_list", 1},
    {GuardKind::Member, "member", 2},   {GuardKind::Subset, "subset", 2}, {GuardKind::Concat, "concat", 3},
    {GuardKind::Eq, "eq", 2},           {GuardKind::NotIn, "not_in", 2},  {GuardKind::Any, "any", 1},
};

inline const GuardInfo* guard_info(const std::string& name) {
  for (const auto& g : kGuards)
    if (name == g.name) return &g;
  return nullptr;
}

inline const char* guard_name(GuardKind k) {
  for (const auto& g : kGuards)
    if (g.kind == k) return g.name;
  return "?";
}

struct Guard {
  GuardKind kind = GuardKind::Any;
  std::vector<Term> args;            // NotIn: args[0] is the atom, as a term
  std::string target_name;           // NotIn: "S", "pre" or "post"
  std::shared_ptr<const AtomSet> target;  // NotIn: resolved target set

  /// Every guard of the vocabulary is preserved by instantiation.
  bool instantiation_closed() const { return true; }
};

inline std::string to_string(const Guard& g) {
  std::string s = guard_name(g.kind);
  s += "(";
  for (std::size_t i = 0; i < g.args.size(); ++i) {
    if (i) s += ", ";
    s += to_string(g.args[i]);
  }
  if (g.kind == GuardKind::NotIn) s += ", " + g.target_name;
  return s + ")";
}

namespace detail {
inline bool is_element(const Term& x, const std::vector<Term>& elems) {
  return std::find(elems.begin(), elems.end(), x) != elems.end();
}
}  // namespace detail

/// Evaluates `g` on the terms `theta` assigns to its variables.
inline bool guard_holds(const Guard& g, const Substitution& theta);

struct AtomPattern {
  Atom templ;
  std::vector<Guard> guards;

  bool is_ground_fact() const { return templ.is_ground() && guards.empty(); }

  /// The matcher witnessing membership of `a`, if any.
  std::optional<Substitution> admits(const Atom& a) const {
    if (a.is_cut()) return std::nullopt;
    auto theta = match(templ, a);
    if (!theta) return std::nullopt;
    for (const auto& g : guards)
      if (!guard_holds(g, *theta)) return std::nullopt;
    return theta;
  }
};

inline std::string to_string(const AtomPattern& p) {
  std::string s = to_string(p.templ);
  if (!p.guards.empty()) {
    s += " where ";
    for (std::size_t i = 0; i < p.guards.size(); ++i) {
      if (i) s += ", ";
      s += to_string(p.guards[i]);
    }
  }
  return s;
}

class AtomSet {
 public:
  AtomSet() = default;

  static AtomSet universal() {
    AtomSet s;
    s.universal_ = true;
    return s;
  }
  static AtomSet extensional(const std::vector<Atom>& atoms) {
    AtomSet s;
    for (const auto& a : atoms) {
      if (!a.is_ground() || a.is_cut()) throw std::invalid_argument("extensional sets hold ground atoms only: " + to_string(a));
      s.patterns_.push_back({a, {}});
    }
    return s;
  }
  static AtomSet of_patterns(std::vector<AtomPattern> ps) {
    AtomSet s;
    s.patterns_ = std::move(ps);
    return s;
  }

  bool is_universal() const { return universal_; }
  bool is_extensional() const {
    return !universal_ && std::all_of(patterns_.begin(), patterns_.end(), [](const AtomPattern& p) { return p.is_ground_fact(); });
  }
  bool empty() const { return !universal_ && patterns_.empty(); }
  const std::vector<AtomPattern>& patterns() const { return patterns_; }

  void add(AtomPattern p) {
    if (!universal_) patterns_.push_back(std::move(p));
  }
  void add_all(const AtomSet& other) {
    if (other.universal_) {
      universal_ = true;
      patterns_.clear();
      return;
    }
    for (const auto& p : other.patterns_) add(p);
  }

  /// Exact membership in the denotation. Cut is never a member.
  bool contains(const Atom& a) const {
    if (a.is_cut()) return false;
    if (universal_) return true;
    for (const auto& p : patterns_) {
      if (p.templ.predicate() != a.predicate() || p.templ.arity() != a.arity()) continue;
      if (p.admits(a)) return true;
    }
    return false;
  }

  /// Whether some pattern could hold atoms of this predicate.
  bool mentions(const std::string& pred, std::size_t arity) const {
    if (universal_) return true;
    return std::any_of(patterns_.begin(), patterns_.end(), [&](const AtomPattern& p) {
      return p.templ.predicate() == pred && p.templ.arity() == arity;
    });
  }

 private:
  bool universal_ = false;
  std::vector<AtomPattern> patterns_;
};

inline std::string to_string(const AtomSet& s) {
  if (s.is_universal()) return "any.";
  std::string out;
  for (const auto& p : s.patterns()) out += to_string(p) + ".\n";
  return out;
}

inline bool guard_holds(const Guard& g, const Substitution& theta) {
  auto arg = [&](std::size_t i) { return theta.apply(g.args.at(i)); };
  switch (g.kind) {
    case GuardKind::Any: return true;
    case GuardKind::List: return is_list(arg(0));
    case GuardKind::Ground: return arg(0).is_ground();
    case GuardKind::GroundList: {
      Term t = arg(0);
      return t.is_ground() && is_list(t);
    }
    case GuardKind::Member: {
      auto elems = list_elements(arg(1));
      return elems && detail::is_element(arg(0), *elems);
    }
    case GuardKind::Subset: {
      auto sub = list_elements(arg(0));
      auto sup = list_elements(arg(1));
      if (!sub || !sup) return false;
      return std::all_of(sub->begin(), sub->end(), [&](const Term& x) { return detail::is_element(x, *sup); });
    }
    case GuardKind::Concat: {
      auto a = list_elements(arg(0));
      Term b = arg(1);
      if (!a || !is_list(b)) return false;
      return Term::list(*a, b) == arg(2);
    }
    case GuardKind::Eq: return arg(0) == arg(1);
    case GuardKind::NotIn: {
      if (!g.target) throw std::logic_error("not_in guard with unresolved target " + g.target_name);
      Atom a = Atom::from_term(arg(0));
      return a.is_ground() && !g.target->contains(a);
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Enumeration

struct EnumResult {
  std::vector<Atom> atoms;  // sorted, duplicate-free
  bool complete = true;     // false if a size cap cut the enumeration short
};

namespace detail {

// Ground members of one pattern with argument depth <= depth. Variables that
// a guard can compute from already bound ones (eq, concat, member, subset)
// are derived; the rest are drawn from the universe, lists first where a
// guard demands a list.
class PatternEnumerator {
 public:
  PatternEnumerator(const AtomPattern& p, GroundUniverse& u, std::size_t depth, std::size_t cap, std::set<Atom>& out)
      : p_(p), u_(u), depth_(depth), cap_(cap), out_(out) {
    vars_ = vars_of(p.templ);
    for (const auto& a : p.templ.args()) note_nesting(a, 0);
  }

  bool run() {
    Substitution theta;
    solve(theta);
    return complete_;
  }

 private:
  void note_nesting(const Term& t, std::size_t k) {
    if (t.is_var()) {
      auto& m = max_nesting_[t.name()];
      m = std::max(m, k);
      return;
    }
    for (const auto& a : t.args()) note_nesting(a, k + 1);
  }

  bool bound(const Term& t, const Substitution& th) const { return th.apply(t).is_ground(); }
  bool var_bound(const std::string& v, const Substitution& th) const { return th.binds(v); }

  std::optional<std::size_t> var_depth(const std::string& v) const {
    auto it = max_nesting_.find(v);
    std::size_t k = it == max_nesting_.end() ? 0 : it->second;
    if (k > depth_) return std::nullopt;
    return depth_ - k;
  }

  void emit(const Substitution& th) {
    for (const auto& g : p_.guards)
      if (!guard_holds(g, th)) return;
    Atom a = th.apply(p_.templ);
    for (const auto& x : a.args())
      if (x.depth() > depth_) return;
    out_.insert(a);
    if (out_.size() > cap_) complete_ = false;
  }

  void with(Substitution th, const std::string& v, const Term& t) {
    th.bind(v, t);
    solve(th);
  }

  bool is_unbound_var(const Term& t, const Substitution& th) const { return t.is_var() && !th.binds(t.name()); }

  // Tries to derive a variable from a guard. Returns true if the guard was
  // used (the caller then stops; the derived branches recursed already).
  bool derive(const Guard& g, const Substitution& th) {
    const auto& a = g.args;
    switch (g.kind) {
      case GuardKind::Eq:
        for (int side = 0; side < 2; ++side) {
          const Term& src = a[side];
          const Term& dst = a[1 - side];
          if (!bound(src, th) || bound(dst, th)) continue;
          auto m = match(th.apply(dst), th.apply(src));
          if (!m) return true;  // dead branch
          Substitution next = th;
          for (const auto& [k, v] : m->bindings()) next.bind(k, v);
          solve(next);
          return true;
        }
        return false;
      case GuardKind::Concat: {
        bool ba = bound(a[0], th), bb = bound(a[1], th), bc = bound(a[2], th);
        if (ba && bb && !bc) {
          if (!is_unbound_var(a[2], th)) return false;
          auto xs = list_elements(th.apply(a[0]));
          Term ys = th.apply(a[1]);
          if (!xs || !is_list(ys)) return true;
          with(th, a[2].name(), Term::list(*xs, ys));
          return true;
        }
        if (bc && (!ba || !bb)) {
          if ((!ba && !is_unbound_var(a[0], th)) || (!bb && !is_unbound_var(a[1], th))) return false;
          auto zs = list_elements(th.apply(a[2]));
          if (!zs) return true;
          for (std::size_t k = 0; k <= zs->size(); ++k) {
            Term pre = Term::list(std::vector<Term>(zs->begin(), zs->begin() + static_cast<std::ptrdiff_t>(k)));
            Term post = Term::list(std::vector<Term>(zs->begin() + static_cast<std::ptrdiff_t>(k), zs->end()));
            if (ba && th.apply(a[0]) != pre) continue;
            if (bb && th.apply(a[1]) != post) continue;
            Substitution next = th;
            if (!ba) next.bind(a[0].name(), pre);
            if (!bb) next.bind(a[1].name(), post);
            solve(next);
          }
          return true;
        }
        return false;
      }
      case GuardKind::Member: {
        if (!bound(a[1], th) || !is_unbound_var(a[0], th)) return false;
        auto elems = list_elements(th.apply(a[1]));
        if (!elems) return true;
        std::set<Term> seen(elems->begin(), elems->end());
        for (const auto& e : seen) with(th, a[0].name(), e);
        return true;
      }
      case GuardKind::Subset: {
        if (!bound(a[1], th) || !is_unbound_var(a[0], th)) return false;
        auto elems = list_elements(th.apply(a[1]));
        if (!elems) return true;
        std::set<Term> distinct(elems->begin(), elems->end());
        std::vector<Term> pool(distinct.begin(), distinct.end());
        auto d = var_depth(a[0].name());
        if (!d) return true;
        for (const auto& l : lists_over(pool, *d)) with(th, a[0].name(), l);
        return true;
      }
      default: return false;
    }
  }

  // Lists of depth <= d whose elements come from `pool`.
  std::vector<Term> lists_over(const std::vector<Term>& pool, std::size_t d) {
    std::vector<Term> out{Term::nil()};
    if (d == 0) return out;
    for (const auto& t : lists_over(pool, d - 1))
      for (const auto& h : pool)
        if (h.depth() + 1 <= d) out.push_back(Term::cons(h, t));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  enum class Domain { Universe, List };

  void solve(const Substitution& th) {
    if (!complete_) return;
    std::optional<std::string> next;
    for (const auto& v : vars_)
      if (!th.binds(v)) {
        next = v;
        break;
      }
    if (!next) {
      emit(th);
      return;
    }
    for (const auto& g : p_.guards)
      if (derive(g, th)) return;

    // Pick a source variable: a list a relational guard reads from, else the
    // first unbound one.
    std::string v = *next;
    Domain dom = Domain::Universe;
    auto prefer = [&](const Term& t) {
      if (is_unbound_var(t, th)) {
        v = t.name();
        dom = Domain::List;
        return true;
      }
      return false;
    };
    bool chosen = false;
    for (const auto& g : p_.guards)
      if (!chosen && g.kind == GuardKind::Concat) chosen = prefer(g.args[2]);
    for (const auto& g : p_.guards)
      if (!chosen && (g.kind == GuardKind::Subset || g.kind == GuardKind::Member)) chosen = prefer(g.args[1]);
    if (!chosen)
      for (const auto& g : p_.guards)
        if (g.kind == GuardKind::List || g.kind == GuardKind::GroundList)
          if (g.args[0].is_var() && g.args[0].name() == v) dom = Domain::List;

    auto d = var_depth(v);
    if (!d) return;
    const std::vector<Term> values = dom == Domain::List ? u_.lists_up_to(*d) : u_.up_to(*d);
    if (!u_.complete()) complete_ = false;
    for (const auto& t : values) {
      if (!complete_) return;
      with(th, v, t);
    }
  }

  const AtomPattern& p_;
  GroundUniverse& u_;
  std::size_t depth_;
  std::size_t cap_;
  std::set<Atom>& out_;
  std::vector<std::string> vars_;
  std::map<std::string, std::size_t> max_nesting_;
  bool complete_ = true;
};

}  // namespace detail

inline constexpr std::size_t kDefaultEnumCap = 2'000'000;

/// Ground members of `s` whose arguments have depth <= depth, sorted and
/// duplicate-free. The universal set enumerates every ground atom of the
/// universe's alphabet.
inline EnumResult enumerate(const AtomSet& s, GroundUniverse& u, std::size_t depth, std::size_t cap = kDefaultEnumCap) {
  std::set<Atom> out;
  bool complete = true;
  std::vector<AtomPattern> ps = s.patterns();
  if (s.is_universal()) {
    ps.clear();
    for (const auto& pr : u.alphabet().predicates) {
      std::vector<Term> args;
      for (std::size_t i = 0; i < pr.arity; ++i) args.push_back(Term::var("X" + std::to_string(i + 1)));
      ps.push_back({Atom::make(pr.name, args), {}});
    }
  }
  for (const auto& p : ps) {
    detail::PatternEnumerator e(p, u, depth, cap, out);
    if (!e.run()) complete = false;
    if (!complete) break;
  }
  return {{out.begin(), out.end()}, complete};
}

// ---------------------------------------------------------------------------
// Maximal generalizations

struct Generalizations {
  std::vector<Atom> atoms;
  bool complete = true;  // false if the lattice walk hit its cap
};

inline constexpr std::size_t kDefaultLatticeCap = 200'000;

namespace detail {

inline bool fast_path_applies(const AtomPattern& p) {
  auto vs = vars_of(p.templ);
  std::map<std::string, int> count;
  std::function<void(const Term&)> walk = [&](const Term& t) {
    if (t.is_var()) {
      ++count[t.name()];
      return;
    }
    for (const auto& a : t.args()) walk(a);
  };
  walk(p.templ.as_term());
  for (const auto& [v, n] : count)
    if (n > 1) return false;
  for (const auto& g : p.guards) {
    switch (g.kind) {
      case GuardKind::Any:
      case GuardKind::List:
      case GuardKind::Ground:
      case GuardKind::GroundList:
        if (!g.args[0].is_var()) return false;
        break;
      default: return false;
    }
  }
  return true;
}

inline Atom fast_generalization(const AtomPattern& p, const Substitution& theta) {
  std::map<std::string, int> kind;  // 0 free, 1 list, 2 verbatim
  for (const auto& g : p.guards) {
    int& k = kind[g.args[0].name()];
    if (g.kind == GuardKind::List) k = std::max(k, 1);
    if (g.kind == GuardKind::Ground || g.kind == GuardKind::GroundList) k = 2;
  }
  std::size_t fresh = 0;
  auto new_var = [&] { return Term::var("G" + std::to_string(++fresh)); };
  Substitution out;
  for (const auto& v : vars_of(p.templ)) {
    const Term& val = *theta.lookup(v);
    int k = kind[v];
    if (k == 2) {
      out.bind(v, val);
    } else if (k == 1) {
      auto elems = list_elements(val);
      std::vector<Term> skel;
      for (std::size_t i = 0; i < elems->size(); ++i) skel.push_back(new_var());
      out.bind(v, Term::list(skel));
    } else {
      out.bind(v, new_var());
    }
  }
  return out.apply(p.templ);
}

// All generalizations of a ground atom, each once up to variable renaming;
// variables are G1, G2, ... in order of first occurrence.
class LatticeWalk {
 public:
  LatticeWalk(std::size_t cap, std::function<void(const Atom&)> visit) : cap_(cap), visit_(std::move(visit)) {}

  bool run(const Atom& a) {
    std::vector<Term> args(a.args().begin(), a.args().end());
    std::vector<Term> out;
    gen_args(args, 0, out, [&] { visit_(Atom::make(a.predicate(), out)); });
    return !capped_;
  }

 private:
  using Cont = std::function<void()>;

  void gen_args(const std::vector<Term>& ts, std::size_t i, std::vector<Term>& out, const Cont& k) {
    if (capped_) return;
    if (i == ts.size()) {
      if (++count_ > cap_) {
        capped_ = true;
        return;
      }
      k();
      return;
    }
    gen(ts[i], [&](const Term& g) {
      out.push_back(g);
      gen_args(ts, i + 1, out, k);
      out.pop_back();
    });
  }

  void gen(const Term& t, const std::function<void(const Term&)>& k) {
    if (capped_) return;
    env_.push_back({t, "G" + std::to_string(env_.size() + 1)});
    k(Term::var(env_.back().second));
    env_.pop_back();
    for (std::size_t i = 0; i < env_.size(); ++i)
      if (env_[i].first == t) k(Term::var(env_[i].second));
    if (t.is_constant()) {
      k(t);
      return;
    }
    std::vector<Term> args(t.args().begin(), t.args().end());
    std::vector<Term> out;
    gen_sub(t.name(), args, 0, out, k);
  }

  void gen_sub(const std::string& f, const std::vector<Term>& ts, std::size_t i, std::vector<Term>& out,
               const std::function<void(const Term&)>& k) {
    if (capped_) return;
    if (i == ts.size()) {
      k(Term::make(f, out));
      return;
    }
    gen(ts[i], [&](const Term& g) {
      out.push_back(g);
      gen_sub(f, ts, i + 1, out, k);
      out.pop_back();
    });
  }

  std::size_t cap_;
  std::function<void(const Atom&)> visit_;
  std::vector<std::pair<Term, std::string>> env_;
  std::size_t count_ = 0;
  bool capped_ = false;
};

inline std::vector<Atom> maximal_elements(std::vector<Atom> xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<Atom> out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < xs.size() && !dominated; ++j) {
      if (i == j) continue;
      // xs[j] strictly more general than xs[i]
      if (match(xs[j], xs[i]) && !match(xs[i], xs[j])) dominated = true;
      // keep one representative of each variant class
      if (j < i && is_variant(xs[i], xs[j])) dominated = true;
    }
    if (!dominated) out.push_back(xs[i]);
  }
  return out;
}

}  // namespace detail

/// The lattice walk on its own; used to cross-check the fast path.
inline Generalizations max_generalizations_by_walk(const Atom& a, const AtomPattern& p,
                                                   std::size_t cap = kDefaultLatticeCap) {
  if (!a.is_ground()) throw std::invalid_argument("max_generalizations: atom must be ground");
  Generalizations out;
  if (!p.admits(a)) return out;
  std::vector<Atom> members;
  detail::LatticeWalk walk(cap, [&](const Atom& g) {
    if (p.admits(g)) members.push_back(g);
  });
  out.complete = walk.run(a);
  out.atoms = detail::maximal_elements(std::move(members));
  return out;
}

/// The most general members of the pattern's denotation having `a` as an
/// instance. Unary guards on a linear template are handled directly; other
/// patterns go through the bounded lattice walk.
inline Generalizations max_generalizations(const Atom& a, const AtomPattern& p, std::size_t cap = kDefaultLatticeCap) {
  if (!a.is_ground()) throw std::invalid_argument("max_generalizations: atom must be ground");
  auto theta = p.admits(a);
  if (!theta) return {};
  if (detail::fast_path_applies(p)) return {{detail::fast_generalization(p, *theta)}, true};
  return max_generalizations_by_walk(a, p, cap);
}

/// Maximal generalizations of `a` within a whole set.
inline Generalizations max_generalizations(const Atom& a, const AtomSet& s, std::size_t cap = kDefaultLatticeCap) {
  if (!a.is_ground()) throw std::invalid_argument("max_generalizations: atom must be ground");
  if (s.is_universal()) {
    std::vector<Term> args;
    for (std::size_t i = 0; i < a.arity(); ++i) args.push_back(Term::var("G" + std::to_string(i + 1)));
    return {{Atom::make(a.predicate(), args)}, true};
  }
  Generalizations out;
  std::vector<Atom> all;
  for (const auto& p : s.patterns()) {
    if (p.templ.predicate() != a.predicate() || p.templ.arity() != a.arity()) continue;
    auto g = max_generalizations(a, p, cap);
    out.complete = out.complete && g.complete;
    all.insert(all.end(), g.atoms.begin(), g.atoms.end());
  }
  out.atoms = detail::maximal_elements(std::move(all));
  return out;
}

// ---------------------------------------------------------------------------
// Closure under substitution

/// Static check that every guard is instantiation-closed, followed by a probe:
/// non-ground members (maximal generalizations of small ground members) are
/// instantiated variable by variable and must stay in the set.
inline Verdict closure_check(const AtomSet& s, GroundUniverse& u, std::size_t probe_depth = 1,
                             std::size_t probe_limit = 200) {
  if (s.is_universal()) return Verdict::verified("universal set");
  for (const auto& p : s.patterns())
    for (const auto& g : p.guards)
      if (!g.instantiation_closed()) return Verdict::unknown("guard", 0, std::string("guard ") + guard_name(g.kind) + " is not known to be closed");
  auto members = enumerate(s, u, probe_depth);
  std::size_t probed = 0;
  const auto& consts = u.exact(0);
  for (const auto& m : members.atoms) {
    if (probed++ >= probe_limit) break;
    for (const auto& g : max_generalizations(m, s).atoms) {
      if (!s.contains(g)) {
        Witness w{"closure", g, std::nullopt, {}, std::nullopt, "maximal generalization is not a member"};
        return Verdict::refuted(w);
      }
      for (const auto& v : vars_of(g))
        for (const auto& c : consts) {
          Substitution th{{v, c}};
          Atom inst = th.apply(g);
          if (!s.contains(inst)) {
            Witness w{"closure", inst, std::nullopt, th, std::nullopt,
                      "instance of member " + to_string(g) + " is not a member"};
            return Verdict::refuted(w);
          }
        }
    }
  }
  return Verdict::verified("all guards are instantiation-closed");
}

}  // namespace cutcheck
