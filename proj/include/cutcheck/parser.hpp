#pragma once

// Reader for the definite-clause-with-cut subset of Prolog.
//
//   clause  := atom '.' | atom ':-' body '.'
//   body    := batom { ',' batom }
//   batom   := '!' | atom
//   atom    := name [ '(' term { ',' term } ')' ]
//   term    := VAR | name [ '(' term { ',' term } ')' ] | list
//   list    := '[' ']' | '[' term { ',' term } [ '|' term ] ']'
//
// Names are lowercase identifiers (optionally ending in primes, as in a'),
// digit strings, or single-quoted atoms. `%` starts a line comment.

#include <cctype>
#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cutcheck/term.hpp"

namespace cutcheck {

enum class ParseErrorKind { Syntax, CutInHead, Semantic };

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, std::size_t line, std::size_t column, std::string message,
             std::set<std::string> expected = {})
      : std::runtime_error(format(line, column, message, expected)),
        kind_(kind),
        line_(line),
        column_(column),
        expected_(std::move(expected)) {}

  ParseErrorKind kind() const { return kind_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::set<std::string>& expected() const { return expected_; }

 private:
  static std::string format(std::size_t line, std::size_t col, const std::string& msg,
                            const std::set<std::string>& expected) {
    std::string s = std::to_string(line) + ":" + std::to_string(col) + ": " + msg;
    if (!expected.empty()) {
      s += " (expected";
      for (const auto& e : expected) s += " " + e;
      s += ")";
    }
    return s;
  }
  ParseErrorKind kind_;
  std::size_t line_;
  std::size_t column_;
  std::set<std::string> expected_;
};

enum class Tok { Name, Var, LParen, RParen, LBrack, RBrack, Comma, Bar, Dot, Neck, Cut, Equals, Plus, Star, Slash, End };

inline std::string_view tok_name(Tok t) {
  switch (t) {
    case Tok::Name: return "name";
    case Tok::Var: return "variable";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrack: return "'['";
    case Tok::RBrack: return "']'";
    case Tok::Comma: return "','";
    case Tok::Bar: return "'|'";
    case Tok::Dot: return "'.'";
    case Tok::Neck: return "':-'";
    case Tok::Cut: return "'!'";
    case Tok::Equals: return "'='";
    case Tok::Plus: return "'+'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

inline std::vector<Token> tokenize(std::string_view src, std::size_t first_line = 1) {
  std::vector<Token> out;
  std::size_t i = 0, line = first_line, col = 1;
  auto advance = [&](std::size_t n = 1) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto is_ident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
      continue;
    }
    if (c == '%') {
      while (i < src.size() && src[i] != '\n') advance();
      continue;
    }
    std::size_t l = line, cl = col;
    auto push = [&](Tok k, std::string text) { out.push_back({k, std::move(text), l, cl}); };
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && is_ident(src[j])) ++j;
      while (j < src.size() && src[j] == '\'') ++j;
      std::string text(src.substr(i, j - i));
      bool var = std::isupper(static_cast<unsigned char>(c)) || c == '_';
      push(var ? Tok::Var : Tok::Name, text);
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      push(Tok::Name, std::string(src.substr(i, j - i)));
      advance(j - i);
      continue;
    }
    if (c == '\'') {
      std::string text;
      advance();
      for (;;) {
        if (i >= src.size()) throw ParseError(ParseErrorKind::Syntax, l, cl, "unterminated quoted atom");
        char q = src[i];
        if (q == '\\' && i + 1 < src.size()) {
          text += src[i + 1];
          advance(2);
          continue;
        }
        if (q == '\'') {
          if (i + 1 < src.size() && src[i + 1] == '\'') {
            text += '\'';
            advance(2);
            continue;
          }
          advance();
          break;
        }
        text += q;
        advance();
      }
      push(Tok::Name, text);
      continue;
    }
    if (c == ':' && i + 1 < src.size() && src[i + 1] == '-') {
      push(Tok::Neck, ":-");
      advance(2);
      continue;
    }
    Tok k;
    switch (c) {
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case '[': k = Tok::LBrack; break;
      case ']': k = Tok::RBrack; break;
      case ',': k = Tok::Comma; break;
      case '|': k = Tok::Bar; break;
      case '.': k = Tok::Dot; break;
      case '!': k = Tok::Cut; break;
      case '=': k = Tok::Equals; break;
      case '+': k = Tok::Plus; break;
      case '*': k = Tok::Star; break;
      case '/': k = Tok::Slash; break;
      default:
        throw ParseError(ParseErrorKind::Syntax, l, cl, std::string("unexpected character '") + c + "'");
    }
    push(k, std::string(1, c));
    advance();
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

/// Recursive-descent reader over a token vector. Reused by the spec-file reader.
class TermReader {
 public:
  explicit TermReader(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_end() const { return at(Tok::End); }
  Token next() {
    Token t = peek();
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool accept(Tok k) {
    if (!at(k)) return false;
    next();
    return true;
  }
  Token expect(Tok k) {
    if (!at(k)) fail({std::string(tok_name(k))});
    return next();
  }
  [[noreturn]] void fail(std::set<std::string> expected, const std::string& what = "") const {
    const Token& t = peek();
    std::string msg = what.empty()
                          ? (t.kind == Tok::End ? std::string("unexpected end of input") : "unexpected token '" + t.text + "'")
                          : what;
    throw ParseError(ParseErrorKind::Syntax, t.line, t.column, msg, std::move(expected));
  }
  [[noreturn]] void fail_semantic(const std::string& what) const {
    const Token& t = peek();
    throw ParseError(ParseErrorKind::Semantic, t.line, t.column, what);
  }

  Term term() {
    if (at(Tok::Var)) return Term::var(next().text);
    if (at(Tok::LBrack)) return list();
    if (at(Tok::Name)) {
      std::string f = next().text;
      return Term::make(f, maybe_args());
    }
    fail({"term"});
  }

  Atom atom() {
    if (at(Tok::Name)) {
      std::string p = next().text;
      return Atom::make(p, maybe_args());
    }
    if (at(Tok::LBrack) && peek(1).kind == Tok::RBrack) {
      next();
      next();
      return Atom::make(kNil);
    }
    fail({"atom"});
  }

  Atom body_atom() {
    if (accept(Tok::Cut)) return Atom::cut();
    return atom();
  }

  std::vector<Atom> body() {
    std::vector<Atom> out{body_atom()};
    while (accept(Tok::Comma)) out.push_back(body_atom());
    return out;
  }

  Clause clause() {
    if (at(Tok::Cut)) {
      const Token& t = peek();
      throw ParseError(ParseErrorKind::CutInHead, t.line, t.column, "cut cannot be a clause head");
    }
    Clause c{atom(), {}};
    if (accept(Tok::Neck)) c.body = body();
    if (!at(Tok::Dot)) fail({"'.'", "':-'", "','"});
    next();
    return c;
  }

  std::size_t position() const { return pos_; }

 private:
  std::vector<Term> maybe_args() {
    std::vector<Term> args;
    if (!accept(Tok::LParen)) return args;
    args.push_back(term());
    while (accept(Tok::Comma)) args.push_back(term());
    if (!accept(Tok::RParen)) fail({"','", "')'"});
    return args;
  }

  Term list() {
    expect(Tok::LBrack);
    if (accept(Tok::RBrack)) return Term::nil();
    std::vector<Term> elems{term()};
    while (accept(Tok::Comma)) elems.push_back(term());
    Term tail = Term::nil();
    if (accept(Tok::Bar)) tail = term();
    if (!accept(Tok::RBrack)) fail({"','", "'|'", "']'"});
    return Term::list(elems, tail);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

inline Program parse_program(std::string_view text) {
  TermReader r(tokenize(text));
  Program p;
  while (!r.at_end()) p.clauses.push_back(r.clause());
  return p;
}

/// A comma-separated atom sequence terminated by '.'; empty input is the
/// empty query.
inline Query parse_query(std::string_view text) {
  TermReader r(tokenize(text));
  if (r.at_end()) return {};
  Query q = r.body();
  if (!r.accept(Tok::Dot)) r.fail({"','", "'.'"});
  if (!r.at_end()) r.fail({"end of input"});
  return q;
}

inline Term parse_term(std::string_view text) {
  TermReader r(tokenize(text));
  Term t = r.term();
  if (!r.at_end()) r.fail({"end of input"});
  return t;
}

inline Atom parse_atom(std::string_view text) {
  TermReader r(tokenize(text));
  Atom a = r.body_atom();
  if (!r.at_end()) r.fail({"end of input"});
  return a;
}

}  // namespace cutcheck
