#include <gtest/gtest.h>

#include "cutcheck/cutcheck.hpp"

using namespace cutcheck;

namespace {

Term T(const char* s) { return parse_term(s); }
Atom A(const char* s) { return parse_atom(s); }

}  // namespace

TEST(Term, PrintsCanonicalSyntax) {
  EXPECT_EQ(to_string(T("[1,2|X]")), "[1,2|X]");
  EXPECT_EQ(to_string(T("'.'(a,[])")), "[a]");
  EXPECT_EQ(to_string(T("f(X,g(Y),[])")), "f(X,g(Y),[])");
  EXPECT_EQ(to_string(T("'hello world'")), "'hello world'");
  EXPECT_EQ(to_string(A("!")), "!");
}

TEST(Term, DepthAndSize) {
  EXPECT_EQ(T("a").depth(), 0u);
  EXPECT_EQ(T("f(a)").depth(), 1u);
  EXPECT_EQ(T("[1,2]").depth(), 2u);
  EXPECT_EQ(list_norm(T("[1,2|X]")), 2u);
  EXPECT_EQ(list_norm(T("f(a)")), 0u);
  EXPECT_EQ(term_size(T("f(a,g(b))")), 4u);
}

TEST(Term, ListHelpers) {
  EXPECT_TRUE(is_list(T("[a,b]")));
  EXPECT_FALSE(is_list(T("[a|X]")));
  EXPECT_EQ(list_length(T("[a,b,c]")), 3u);
  EXPECT_THROW(list_length(T("[a|X]")), NotAListError);
}

TEST(Unify, BasicAndOccursCheck) {
  auto s = unify(T("f(X,b)"), T("f(a,Y)"));
  ASSERT_TRUE(s);
  EXPECT_EQ(s->apply(T("f(X,Y)")), T("f(a,b)"));
  EXPECT_FALSE(unify(T("X"), T("f(X)")));
  EXPECT_FALSE(unify(T("f(a)"), T("f(b)")));
  EXPECT_FALSE(unify(T("f(a)"), T("g(a)")));
}

TEST(Unify, CutIsNotUnifiable) { EXPECT_THROW(unify(Atom::cut(), Atom::cut()), CutUnificationError); }

TEST(Unify, ChainsResolveToIdempotentResult) {
  auto s = unify(T("f(X,Y,Z)"), T("f(Y,Z,a)"));
  ASSERT_TRUE(s);
  EXPECT_TRUE(s->is_idempotent());
  EXPECT_EQ(s->apply(T("X")), T("a"));
}

TEST(Match, IsOneSided) {
  EXPECT_TRUE(match(T("f(X,X)"), T("f(a,a)")));
  EXPECT_FALSE(match(T("f(X,X)"), T("f(a,b)")));
  EXPECT_FALSE(match(T("f(a)"), T("f(X)")));
  // variables of the specific side are rigid
  EXPECT_FALSE(match(T("f(X,a)"), T("f(Y,Y)")));
  EXPECT_TRUE(is_variant(A("p(X,Y)"), A("p(U,V)")));
  EXPECT_FALSE(is_variant(A("p(X,X)"), A("p(U,V)")));
}

TEST(Substitution, ComposeMeansThisThenOther) {
  Substitution a{{"X", T("f(Y)")}};
  Substitution b{{"Y", T("c")}};
  EXPECT_EQ(a.compose(b).apply(T("g(X,Y)")), T("g(f(c),c)"));
  EXPECT_EQ(b.apply(a.apply(T("g(X,Y)"))), a.compose(b).apply(T("g(X,Y)")));
}

TEST(Renamer, FreshNamesAvoidReserved) {
  Renamer r({"X_1"});
  Clause c = parse_program("p(X) :- q(X, Y).").clauses.front();
  Clause d = r.rename_apart(c);
  auto vs = vars_of(d);
  for (const auto& v : vs) {
    EXPECT_NE(v, "X_1");
    EXPECT_NE(v, "X");
    EXPECT_NE(v, "Y");
  }
  EXPECT_TRUE(match(Query{c.head}, Query{d.head}));
}

TEST(Parser, ProgramsAndQueries) {
  Program p = parse_program("% comment\np(X) :- q(X), !, r.\nq(a).\n");
  ASSERT_EQ(p.clauses.size(), 2u);
  EXPECT_TRUE(p.clauses[0].has_cut());
  EXPECT_EQ(to_string(p.clauses[0]), "p(X) :- q(X), !, r.");
  Query q = parse_query("p(X), !, q(Y).");
  ASSERT_EQ(q.size(), 3u);
  EXPECT_TRUE(q[1].is_cut());
  EXPECT_TRUE(parse_query("").empty());
}

TEST(Parser, ErrorsCarryPosition) {
  try {
    parse_program("p(X :- q.");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.kind(), ParseErrorKind::Syntax);
  }
  EXPECT_THROW(parse_program("! :- p."), ParseError);
  EXPECT_THROW(parse_query("p(X)"), ParseError);
}

TEST(Enumerate, CountsGroundTermsByDepth) {
  Alphabet al;
  al.add_functor("a", 0);
  al.add_functor("b", 0);
  al.add_functor("f", 1);
  al.add_functor("g", 2);
  GroundUniverse u(al);
  EXPECT_EQ(u.exact(0).size(), 2u);
  // depth 1: f(t) for 2 constants, g(s,t) for 4 pairs
  EXPECT_EQ(u.exact(1).size(), 6u);
  // depth 2: f over depth-1 terms (6), g pairs with some depth-1 arg (8*8 - 2*2)
  EXPECT_EQ(u.exact(2).size(), 6u + 60u);
  EXPECT_EQ(enumerate_ground(al, 2).size(), 2u + 6u + 66u);
}

TEST(Enumerate, EmptyUniverseIsAnError) {
  Alphabet al;
  al.add_functor("f", 1);
  EXPECT_THROW(GroundUniverse{al}, EmptyUniverseError);
}
