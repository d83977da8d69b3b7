#pragma once

// Spec files: one verification task per file, split into sections.
//
//   [alphabet]    a/0.  f/1.  '[]'/0.  '.'/2.  predicate p/2.
//   [S]           ground atoms
//   [S-patterns]  patterns, added to S
//   [pre]         patterns, or `any.`
//   [post]        patterns, or `any.`
//   [level]       in(S,T) = len(S) + len(T).   m(E,L) = 2*len(L) + 1.
//   [bounds]      depth=3 nodes=20000 steps=100000
//
// A pattern is `atom.` or `atom where guard, ..., guard.`; see spec_sets.hpp
// for the guard vocabulary.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cutcheck/enumerate.hpp"
#include "cutcheck/parser.hpp"
#include "cutcheck/spec_sets.hpp"
#include "cutcheck/term.hpp"

namespace cutcheck {

enum class Norm { Len, Size };

struct LevelMapping {
  struct Summand {
    std::size_t coefficient = 1;
    Norm norm = Norm::Len;
    std::size_t arg = 0;
  };
  std::size_t constant = 0;
  std::vector<Summand> summands;

  /// Level of a ground atom; the cut has level 0.
  std::size_t eval(const Atom& a) const {
    if (a.is_cut()) return 0;
    std::size_t v = constant;
    for (const auto& s : summands) {
      const Term& t = a.arg(s.arg);
      v += s.coefficient * (s.norm == Norm::Len ? list_norm(t) : term_size(t));
    }
    return v;
  }
};

using PredKey = std::pair<std::string, std::size_t>;

struct SpecSuite {
  AtomSet s;
  AtomSet pre;
  AtomSet post;
  std::map<PredKey, LevelMapping> level_maps;
  Alphabet declared;              // symbols listed under [alphabet]
  bool alphabet_declared = false;  // functors were listed explicitly
  std::optional<std::size_t> depth;
  std::optional<std::size_t> nodes;
  std::optional<std::size_t> steps;
};

namespace detail {

struct RawSection {
  std::string name;
  std::string text;  // the section body, header blanked so columns stay right
  std::size_t first_line = 1;
  std::size_t header_line = 1;
};

inline std::vector<RawSection> split_sections(std::string_view text) {
  static const std::regex header(R"(^(\s*)\[(alphabet|S|S-patterns|pre|post|level|bounds)\])");
  std::vector<RawSection> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(pos, end - pos));
    ++line_no;
    std::smatch m;
    if (std::regex_search(line, m, header)) {
      RawSection s;
      s.name = m[2];
      s.first_line = line_no;
      s.header_line = line_no;
      std::string rest = line;
      for (std::size_t i = 0; i < static_cast<std::size_t>(m.length(0)); ++i) rest[i] = ' ';
      s.text = rest + "\n";
      out.push_back(std::move(s));
    } else if (!out.empty()) {
      out.back().text += line + "\n";
    } else {
      // Text before the first header must be blank or comments.
      auto toks = tokenize(line, line_no);
      if (toks.front().kind != Tok::End)
        throw ParseError(ParseErrorKind::Syntax, line_no, toks.front().column, "content before the first section header",
                         {"section header"});
    }
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

class SpecReader {
 public:
  SpecSuite read(std::string_view text) {
    std::map<std::string, std::vector<AtomPattern>> raw;
    bool pre_any = false, post_any = false;
    std::set<std::string> seen;
    for (auto& sec : split_sections(text)) {
      if (!seen.insert(sec.name).second)
        throw ParseError(ParseErrorKind::Semantic, sec.header_line, 1, "duplicate section [" + sec.name + "]");
      TermReader r(tokenize(sec.text, sec.first_line));
      if (sec.name == "alphabet") {
        alphabet(r);
      } else if (sec.name == "S") {
        while (!r.at_end()) {
          Atom a = r.atom();
          if (!a.is_ground()) r.fail_semantic("[S] lists ground atoms; use [S-patterns] for " + to_string(a));
          expect_dot(r);
          raw["S"].push_back({a, {}});
        }
      } else if (sec.name == "S-patterns") {
        while (!r.at_end()) raw["S"].push_back(pattern(r));
      } else if (sec.name == "pre" || sec.name == "post") {
        bool& any = sec.name == "pre" ? pre_any : post_any;
        while (!r.at_end()) {
          if (r.at(Tok::Name) && r.peek().text == "any" && r.peek(1).kind == Tok::Dot) {
            r.next();
            r.next();
            any = true;
            continue;
          }
          raw[sec.name].push_back(pattern(r));
        }
      } else if (sec.name == "level") {
        while (!r.at_end()) level(r);
      } else if (sec.name == "bounds") {
        bounds(r);
      }
    }

    suite_.s = AtomSet::of_patterns(raw["S"]);
    suite_.pre = pre_any ? AtomSet::universal() : AtomSet::of_patterns(raw["pre"]);
    suite_.post = post_any ? AtomSet::universal() : AtomSet::of_patterns(raw["post"]);
    resolve_targets();
    check_arities();
    return std::move(suite_);
  }

 private:
  static void expect_dot(TermReader& r) {
    if (!r.accept(Tok::Dot)) r.fail({"'.'"});
  }

  std::size_t number(TermReader& r) {
    const Token& t = r.peek();
    if (t.kind != Tok::Name || t.text.empty() || t.text.find_first_not_of("0123456789") != std::string::npos)
      r.fail({"number"});
    r.next();
    return static_cast<std::size_t>(std::stoull(t.text));
  }

  void alphabet(TermReader& r) {
    while (!r.at_end()) {
      bool is_pred = false;
      if (r.at(Tok::Name) && r.peek().text == "predicate" && r.peek(1).kind == Tok::Name) {
        r.next();
        is_pred = true;
      }
      std::string name;
      if (r.at(Tok::LBrack) && r.peek(1).kind == Tok::RBrack) {
        r.next();
        r.next();
        name = kNil;
      } else {
        name = r.expect(Tok::Name).text;
      }
      r.expect(Tok::Slash);
      std::size_t n = number(r);
      expect_dot(r);
      if (is_pred) {
        suite_.declared.add_predicate(name, n);
      } else {
        suite_.declared.add_functor(name, n);
        suite_.alphabet_declared = true;
      }
    }
  }

  AtomPattern pattern(TermReader& r) {
    AtomPattern p{r.atom(), {}};
    std::set<std::string> tvars;
    for (const auto& v : vars_of(p.templ)) tvars.insert(v);
    if (r.at(Tok::Name) && r.peek().text == "where") {
      r.next();
      p.guards.push_back(guard(r, tvars));
      while (r.accept(Tok::Comma)) p.guards.push_back(guard(r, tvars));
    }
    if (!r.at(Tok::Dot)) r.fail({"'.'", "','", "where"});
    r.next();
    return p;
  }

  Guard guard(TermReader& r, const std::set<std::string>& tvars) {
    const Token head = r.peek();
    Term t = r.term();
    const GuardInfo* info = t.is_var() ? nullptr : guard_info(t.name());
    if (!info) throw ParseError(ParseErrorKind::Semantic, head.line, head.column, "unknown guard '" + head.text + "'");
    if (t.arity() != info->arity)
      throw ParseError(ParseErrorKind::Semantic, head.line, head.column,
                       std::string("guard ") + info->name + " takes " + std::to_string(info->arity) + " arguments");
    Guard g;
    g.kind = info->kind;
    auto check_vars = [&](const Term& x) {
      for (const auto& v : vars_of(x))
        if (!tvars.count(v))
          throw ParseError(ParseErrorKind::Semantic, head.line, head.column,
                           "guard variable " + v + " does not occur in the pattern");
    };
    switch (g.kind) {
      case GuardKind::Eq:
        g.args = {t.arg(0), t.arg(1)};
        check_vars(t.arg(0));
        check_vars(t.arg(1));
        break;
      case GuardKind::NotIn: {
        const Term& target = t.arg(1);
        // S is written like a variable; pre and post like constants.
        if (!(target.is_var() || target.is_constant()) ||
            (target.name() != "S" && target.name() != "pre" && target.name() != "post"))
          throw ParseError(ParseErrorKind::Semantic, head.line, head.column, "not_in target must be S, pre or post");
        if (t.arg(0).is_var()) throw ParseError(ParseErrorKind::Semantic, head.line, head.column, "not_in needs an atom");
        g.args = {t.arg(0)};
        g.target_name = target.name();
        check_vars(t.arg(0));
        break;
      }
      default:
        for (const auto& a : t.args()) {
          if (!a.is_var())
            throw ParseError(ParseErrorKind::Semantic, head.line, head.column,
                             std::string("guard ") + info->name + " takes variables");
          check_vars(a);
          g.args.push_back(a);
        }
    }
    return g;
  }

  void level(TermReader& r) {
    const Token head = r.peek();
    Atom a = r.atom();
    std::map<std::string, std::size_t> position;
    for (std::size_t i = 0; i < a.arity(); ++i) {
      const Term& x = a.arg(i);
      if (!x.is_var() || !position.emplace(x.name(), i).second)
        throw ParseError(ParseErrorKind::Semantic, head.line, head.column,
                         "level mapping head needs distinct variables as arguments");
    }
    r.expect(Tok::Equals);
    LevelMapping lm;
    summand(r, lm, position);
    while (r.accept(Tok::Plus)) summand(r, lm, position);
    expect_dot(r);
    PredKey key{a.predicate(), a.arity()};
    if (!suite_.level_maps.emplace(key, lm).second)
      throw ParseError(ParseErrorKind::Semantic, head.line, head.column, "duplicate level mapping for " + a.predicate());
  }

  void summand(TermReader& r, LevelMapping& lm, const std::map<std::string, std::size_t>& position) {
    std::size_t coef = 1;
    bool have_coef = false;
    if (r.at(Tok::Name) && r.peek(1).kind != Tok::LParen) {
      coef = number(r);
      have_coef = true;
      if (!r.accept(Tok::Star)) {
        lm.constant += coef;
        return;
      }
    }
    const Token head = r.peek();
    if (!r.at(Tok::Name)) r.fail(have_coef ? std::set<std::string>{"len", "size"} : std::set<std::string>{"number", "len", "size"});
    std::string fn = r.next().text;
    if (fn != "len" && fn != "size")
      throw ParseError(ParseErrorKind::Semantic, head.line, head.column, "unknown norm '" + fn + "' (expected len or size)");
    r.expect(Tok::LParen);
    const Token vt = r.expect(Tok::Var);
    r.expect(Tok::RParen);
    auto it = position.find(vt.text);
    if (it == position.end())
      throw ParseError(ParseErrorKind::Semantic, vt.line, vt.column, "variable " + vt.text + " is not an argument");
    lm.summands.push_back({coef, fn == "len" ? Norm::Len : Norm::Size, it->second});
  }

  void bounds(TermReader& r) {
    while (!r.at_end()) {
      const Token key = r.expect(Tok::Name);
      r.expect(Tok::Equals);
      std::size_t v = number(r);
      if (key.text == "depth") suite_.depth = v;
      else if (key.text == "nodes") suite_.nodes = v;
      else if (key.text == "steps") suite_.steps = v;
      else throw ParseError(ParseErrorKind::Semantic, key.line, key.column, "unknown bound '" + key.text + "'");
      r.accept(Tok::Dot);
    }
  }

  AtomSet* set_named(const std::string& n) {
    if (n == "S") return &suite_.s;
    if (n == "pre") return &suite_.pre;
    return &suite_.post;
  }

  static std::set<std::string> targets_of(const AtomSet& s) {
    std::set<std::string> out;
    for (const auto& p : s.patterns())
      for (const auto& g : p.guards)
        if (g.kind == GuardKind::NotIn) out.insert(g.target_name);
    return out;
  }

  // not_in guards point at a snapshot of their target set; targets are
  // resolved before the sets that refer to them.
  void resolve_targets() {
    std::map<std::string, std::shared_ptr<const AtomSet>> done;
    const std::vector<std::string> names{"S", "pre", "post"};
    for (std::size_t round = 0; round < names.size() + 1 && done.size() < names.size(); ++round) {
      for (const auto& n : names) {
        if (done.count(n)) continue;
        auto deps = targets_of(*set_named(n));
        bool ready = true;
        for (const auto& d : deps)
          if (!done.count(d)) ready = false;
        if (!ready) continue;
        std::vector<AtomPattern> ps = set_named(n)->patterns();
        for (auto& p : ps)
          for (auto& g : p.guards)
            if (g.kind == GuardKind::NotIn) g.target = done.at(g.target_name);
        if (!set_named(n)->is_universal()) *set_named(n) = AtomSet::of_patterns(std::move(ps));
        done[n] = std::make_shared<const AtomSet>(*set_named(n));
      }
    }
    if (done.size() < names.size()) throw ParseError(ParseErrorKind::Semantic, 1, 1, "cyclic not_in references between sets");
  }

  void check_arities() {
    if (!suite_.alphabet_declared) return;
    auto check_term = [&](const Term& t, auto& self) -> void {
      if (t.is_var()) return;
      if (!suite_.declared.has_functor(t.name(), t.arity()))
        throw ParseError(ParseErrorKind::Semantic, 1, 1,
                         "functor " + t.name() + "/" + std::to_string(t.arity()) + " is not in the declared alphabet");
      for (const auto& a : t.args()) self(a, self);
    };
    bool preds_declared = !suite_.declared.predicates.empty();
    for (const AtomSet* s : {&suite_.s, &suite_.pre, &suite_.post})
      for (const auto& p : s->patterns()) {
        if (preds_declared &&
            std::find(suite_.declared.predicates.begin(), suite_.declared.predicates.end(),
                      Symbol{p.templ.predicate(), p.templ.arity()}) == suite_.declared.predicates.end())
          throw ParseError(ParseErrorKind::Semantic, 1, 1,
                           "predicate " + p.templ.predicate() + "/" + std::to_string(p.templ.arity()) +
                               " is not in the declared alphabet");
        for (const auto& a : p.templ.args()) check_term(a, check_term);
      }
  }

  SpecSuite suite_;
};

}  // namespace detail

inline SpecSuite parse_spec(std::string_view text) { return detail::SpecReader().read(text); }

/// The alphabet a check runs over: the declared functors if any, else those of
/// the program, query and spec; predicates are always the union. An inferred
/// alphabet without constants gets the constant c0.
inline Alphabet effective_alphabet(const Program& p, const Query& q, const SpecSuite& spec) {
  Alphabet inferred;
  collect_symbols(p, inferred);
  for (const auto& a : q) collect_symbols(a, inferred);
  for (const AtomSet* s : {&spec.s, &spec.pre, &spec.post})
    for (const auto& pat : s->patterns()) {
      collect_symbols(pat.templ, inferred);
      for (const auto& g : pat.guards) {
        if (g.kind == GuardKind::NotIn) {
          for (const auto& t : g.args.front().args()) collect_symbols(t, inferred);
          continue;
        }
        for (const auto& t : g.args) collect_symbols(t, inferred);
      }
    }
  Alphabet out;
  if (spec.alphabet_declared) {
    out.functors = spec.declared.functors;
  } else {
    out.functors = inferred.functors;
    // usual convention: a language without constants gets one
    if (!out.has_constant()) out.add_functor("c0", 0);
  }
  for (const auto& pr : spec.declared.predicates) out.add_predicate(pr.name, pr.arity);
  for (const auto& pr : inferred.predicates) out.add_predicate(pr.name, pr.arity);
  return out;
}

}  // namespace cutcheck
