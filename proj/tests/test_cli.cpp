#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace {

struct Run {
  int code;
  std::string out;
};

Run cli(const std::string& args, const std::string& env = "") {
  std::string cmd = "cd " CUTCHECK_FIXTURES " && " + env + " " CUTCHECK_CLI " " + args + " 2>&1";
  FILE* f = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
  int status = pclose(f);
  return {WEXITSTATUS(status), out};
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, RunPrintsAnswersInOrder) {
  auto r = cli("run pruning_tree.pl 'p.'");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "% 0 answers (exact)\n");
  r = cli("run in.pl 'in([X],[1,2]).'");
  EXPECT_EQ(r.out, "in([1],[1,2])\n% 1 answer (exact)\n");
  r = cli("run append.pl 'app(X,Y,[1]).'");
  EXPECT_EQ(r.out, "app([],[1],[1])\napp([1],[],[1])\n% 2 answers (exact)\n");
}

TEST(Cli, TruncatedRunExitsThree) {
  auto r = cli("run loop.pl 'p.' --steps 20");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("truncated"), std::string::npos);
  r = cli("run append.pl 'app(X,Y,[1,2,3]).'", "CUTCHECK_BUDGET_NODES=2");
  EXPECT_EQ(r.code, 3);
  r = cli("run append.pl 'app(X,Y,[1,2,3]).' --nodes 1000", "CUTCHECK_BUDGET_NODES=2");
  EXPECT_EQ(r.code, 0);
}

TEST(Cli, ParseErrorsExitTwo) {
  EXPECT_EQ(cli("run in.pl 'in([X],[1,2]'").code, 2);
  EXPECT_EQ(cli("run missing.pl 'p.'").code, 2);
  EXPECT_EQ(cli("check complete in.pl in.spec").code, 2);
  EXPECT_EQ(cli("check bogus in.pl in.spec").code, 2);
}

TEST(Cli, CheckExitCodes) {
  auto r = cli("check complete in.pl in.spec 'in([2],[1,2]).'");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("verdict: verified"), std::string::npos);
  r = cli("check complete artificial.pl artificial_postHB.spec 'p(a,Z).'");
  EXPECT_EQ(r.code, 1) << r.out;
  EXPECT_NE(r.out.find("p(a,c)"), std::string::npos);
  EXPECT_EQ(cli("check recurrent in.pl in.spec").code, 0);
  EXPECT_EQ(cli("check semicomplete append.pl append.spec").code, 0);
  EXPECT_EQ(cli("check cscorrect artificial.pl artificial.spec").code, 0);
  EXPECT_EQ(cli("oracle in.pl in.spec 'in([X],[1,2]).'").code, 1);
}

TEST(Cli, QueryWithCutIsTransformed) {
  auto r = cli("check complete in.pl in.spec 'm(X,[1,2]), !, in([X],[1,2]).'");
  EXPECT_NE(r.out.find("p0(X) :- m(X,[1,2]), !, in([X],[1,2])."), std::string::npos) << r.out;
  EXPECT_NE(r.code, 0);
}

TEST(Cli, JsonSchemaAndDeterminism) {
  auto a = cli("check complete artificial.pl artificial_postHB.spec 'p(a,Z).' --json");
  auto b = cli("check complete artificial.pl artificial_postHB.spec 'p(a,Z).' --json");
  EXPECT_EQ(a.out, b.out);
  auto j = nlohmann::ordered_json::parse(a.out);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"check", "verdict", "bounds", "witnesses", "per_atom", "timing_ms"}));
  EXPECT_TRUE(j["timing_ms"].is_null());
  EXPECT_EQ(j["verdict"], "refuted");
  EXPECT_EQ(j["witnesses"][0]["atom"], "p(a,c)");
  auto t = nlohmann::ordered_json::parse(cli("check recurrent in.pl in.spec --json --timing").out);
  EXPECT_TRUE(t["timing_ms"].is_number());
}

TEST(Cli, DotMatchesGolden) {
  auto r = cli("tree pruning_tree.pl 'p.' --prune");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, slurp(CUTCHECK_FIXTURES "/pruning_tree.dot"));
}
