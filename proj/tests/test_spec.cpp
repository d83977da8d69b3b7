#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "cutcheck/cutcheck.hpp"

using namespace cutcheck;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream f(std::string(CUTCHECK_FIXTURES) + "/" + name, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Atom A(const char* s) { return parse_atom(s); }

std::vector<std::string> strs(const std::vector<Atom>& xs) {
  std::vector<std::string> out;
  for (const auto& x : xs) out.push_back(to_string(x));
  return out;
}

Alphabet in_alphabet() {
  Alphabet al;
  al.add_functor("[]", 0);
  al.add_functor(".", 2);
  al.add_functor("1", 0);
  al.add_functor("2", 0);
  al.add_predicate("in", 2);
  al.add_predicate("m", 2);
  return al;
}

}  // namespace

TEST(SpecFile, ReadsInSpec) {
  SpecSuite s = parse_spec(slurp("in.spec"));
  EXPECT_TRUE(s.post.is_universal());
  EXPECT_FALSE(s.pre.is_universal());
  EXPECT_EQ(s.s.patterns().size(), 2u);
  EXPECT_EQ(s.level_maps.size(), 2u);
  ASSERT_TRUE(s.depth);
  EXPECT_EQ(*s.depth, 3u);
  EXPECT_TRUE(s.alphabet_declared);
  EXPECT_TRUE(s.s.contains(A("in([2],[1,2])")));
  EXPECT_FALSE(s.s.contains(A("in([2],[1])")));
  EXPECT_TRUE(s.pre.contains(A("m(X,[1,Y])")));
  EXPECT_FALSE(s.pre.contains(A("m(X,[1|Y])")));
  EXPECT_EQ(s.level_maps.at({"in", 2}).eval(A("in([2],[1,2])")), 3u);
}

TEST(SpecFile, ReadsExtensionalSetsAndNotIn) {
  SpecSuite s = parse_spec(slurp("notp.spec"));
  EXPECT_TRUE(s.s.contains(A("notp(b)")));
  EXPECT_FALSE(s.s.contains(A("notp(a)")));
  EXPECT_TRUE(s.s.contains(A("p(a)")));
  EXPECT_TRUE(s.pre.contains(A("fail")));
  EXPECT_FALSE(s.post.contains(A("fail")));
}

TEST(SpecFile, RejectsBadInput) {
  EXPECT_THROW(parse_spec("p(a).\n[S]\n"), ParseError);
  EXPECT_THROW(parse_spec("[S]\np(X).\n"), ParseError);
  EXPECT_THROW(parse_spec("[pre]\np(X) where frob(X).\n"), ParseError);
  EXPECT_THROW(parse_spec("[pre]\np(X) where ground(Y).\n"), ParseError);
  EXPECT_THROW(parse_spec("[pre]\np(X) where member(X).\n"), ParseError);
  EXPECT_THROW(parse_spec("[S]\np(a).\n[S]\np(b).\n"), ParseError);
}

TEST(SpecFile, EffectiveAlphabetUsesDeclaredFunctors) {
  Program p = parse_program(slurp("in.pl"));
  SpecSuite s = parse_spec(slurp("in.spec"));
  Alphabet al = effective_alphabet(p, {}, s);
  EXPECT_TRUE(al.has_functor("1", 0));
  EXPECT_TRUE(al.has_functor(".", 2));
  EXPECT_FALSE(al.has_functor("a", 0));
}

TEST(AtomSet, GuardsAreSyntactic) {
  SpecSuite s = parse_spec(
      "[S-patterns]\n"
      "c(K, L, M) where concat(K, L, M).\n"
      "e(X, Y) where eq(X, Y).\n"
      "l(X) where list(X).\n");
  EXPECT_TRUE(s.s.contains(A("c([1],[2],[1,2])")));
  EXPECT_TRUE(s.s.contains(A("c([X],[],[X])")));
  EXPECT_FALSE(s.s.contains(A("c([],1,1)")));
  EXPECT_TRUE(s.s.contains(A("e(f(Z),f(Z))")));
  EXPECT_FALSE(s.s.contains(A("e(Z,W)")));
  EXPECT_TRUE(s.s.contains(A("l([A,B])")));
  EXPECT_FALSE(s.s.contains(A("l([A|B])")));
}

TEST(AtomSet, EnumerateInSpecAtDepthTwo) {
  SpecSuite s = parse_spec(slurp("in.spec"));
  GroundUniverse u(in_alphabet());
  auto e = enumerate(s.s, u, 2);
  EXPECT_TRUE(e.complete);
  for (const auto& a : e.atoms) EXPECT_TRUE(s.s.contains(a)) << to_string(a);
  // every in(U,T) with U a sublist-of-members of T at depth <= 2 is listed
  GroundUniverse u2(in_alphabet());
  auto lists = u2.lists_up_to(2);
  std::size_t want = 0;
  for (const auto& x : lists)
    for (const auto& y : lists)
      if (s.s.contains(Atom::make("in", {x, y}))) ++want;
  std::size_t got = 0;
  for (const auto& a : e.atoms)
    if (a.predicate() == "in") ++got;
  EXPECT_EQ(got, want);
}

TEST(AtomSet, UniversalEnumeratesAllPredicates) {
  Alphabet al;
  al.add_functor("a", 0);
  al.add_predicate("p", 1);
  al.add_predicate("r", 0);
  GroundUniverse u(al);
  auto e = enumerate(AtomSet::universal(), u, 1);
  EXPECT_EQ(strs(e.atoms), (std::vector<std::string>{"p(a)", "r"}));
}

TEST(Generalizations, ArtificialPre) {
  SpecSuite s = parse_spec(slurp("artificial.spec"));
  auto g = max_generalizations(A("p(a,c)"), s.pre);
  EXPECT_TRUE(g.complete);
  ASSERT_EQ(g.atoms.size(), 1u);
  EXPECT_TRUE(is_variant(g.atoms[0], A("p(a,T)")));
}

TEST(Generalizations, GroundGuardKeepsArgument) {
  SpecSuite s = parse_spec(slurp("in.spec"));
  auto g = max_generalizations(A("in([1],[1,2])"), s.pre);
  ASSERT_EQ(g.atoms.size(), 1u);
  EXPECT_EQ(to_string(g.atoms[0]), "in([1],[1,2])");
  auto m = max_generalizations(A("m(1,[2,1])"), s.pre);
  ASSERT_EQ(m.atoms.size(), 1u);
  EXPECT_TRUE(is_variant(m.atoms[0], A("m(E,[X,Y])")));
}

TEST(Generalizations, WalkHandlesRelationalGuards) {
  SpecSuite s = parse_spec("[pre]\ne(X, Y) where eq(X, Y).\n");
  auto g = max_generalizations(A("e(f(a),f(a))"), s.pre);
  ASSERT_EQ(g.atoms.size(), 1u);
  EXPECT_TRUE(is_variant(g.atoms[0], A("e(Z,Z)")));
}

TEST(Closure, GuardsAreClosed) {
  SpecSuite s = parse_spec(slurp("in.spec"));
  GroundUniverse u(in_alphabet());
  EXPECT_TRUE(closure_check(s.pre, u).verified_p());
}
