#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "facet/cli.hpp"
#include "support.hpp"

namespace {

using namespace facet;
using facet::testing::data_path;
namespace fs = std::filesystem;

struct CliRun {
  int status = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "facet_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

CliRun facet_cli(const std::string& args) {
  const fs::path err = scratch("stderr.txt");
  const std::string cmd = std::string(FACET_CLI) + " " + args + " 2> '" + err.string() + "'";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.err = slurp(err);
  return r;
}

std::string problem(const std::string& name) { return "'" + data_path("problems/" + name) + "'"; }
std::string grammar(const std::string& name) { return "'" + data_path("grammars/" + name) + "'"; }

fs::path write_file(const std::string& name, const std::string& text) {
  fs::path p = scratch(name);
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

TEST(CliLearn, KripkeSeparator) {
  CliRun r = facet_cli("learn " + problem("kripke-separator.json"));
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out, "dia(dia(a))\nsize 3\n");
}

TEST(CliLearn, BisimilarIsUnrealizable) {
  CliRun r = facet_cli("learn " + problem("bisimilar.json"));
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(r.out, "unrealizable\n");
}

TEST(CliLearn, InputErrorsExitTwo) {
  auto missing = write_file("missing-grammar.json",
                            R"({"language":"regex","positives":[{"word":"a"}],"negatives":[{"word":"b"}]})");
  CliRun r = facet_cli("learn '" + missing.string() + "'");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("grammar"), std::string::npos) << r.err;

  auto broken = write_file("broken.json", "{\"language\": \"regex\",\n \"positives\": [");
  r = facet_cli("learn '" + broken.string() + "'");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;

  auto badlang = write_file("badlang.json", R"({"language":"sql","positives":[],"negatives":[],"grammar":"A -> a"})");
  EXPECT_EQ(facet_cli("learn '" + badlang.string() + "'").status, 2);

  auto badstruct = write_file("badstruct.json",
                              R"({"language":"modal","positives":[{"worlds":["s"],"start":"t"}],"grammar":"F -> a"})");
  r = facet_cli("learn '" + badstruct.string() + "'");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("positives[0]"), std::string::npos) << r.err;

  EXPECT_EQ(facet_cli("learn /nonexistent/problem.json").status, 2);
  EXPECT_EQ(facet_cli("frobnicate").status, 2);
}

TEST(CliLearn, ResourceLimitExitsThree) {
  CliRun r = facet_cli("learn --max-states 2 " + problem("kripke-separator.json"));
  EXPECT_EQ(r.status, 3);
  EXPECT_EQ(r.out, "resource-exhausted\n");
}

TEST(CliLearn, OutputIsByteDeterministic) {
  for (const char* name : {"kripke-separator.json", "cfg-anb.json", "fo-symmetric.json", "regex-overlap.json"}) {
    CliRun a = facet_cli("learn --stats " + problem(name));
    CliRun b = facet_cli("learn --stats " + problem(name));
    CliRun c = facet_cli("learn --stats " + problem(name));
    EXPECT_EQ(a.out, b.out) << name;
    EXPECT_EQ(a.out, c.out) << name;
    EXPECT_NE(a.out.find("product-states"), std::string::npos);
  }
}

TEST(CliLearn, OracleAgreesOnShippedProblems) {
  for (const auto& entry : fs::directory_iterator(data_path("problems"))) {
    CliRun r = facet_cli("learn --oracle '" + entry.path().string() + "'");
    EXPECT_TRUE(r.status == 0 || r.status == 1) << entry.path() << ": " << r.err;
    EXPECT_EQ(r.err.find("disagreement"), std::string::npos) << r.err;
  }
}

TEST(CliLearn, WitnessRoundTripsThroughTheParser) {
  CliRun r = facet_cli("learn " + problem("fo-symmetric.json"));
  ASSERT_EQ(r.status, 0);
  std::string line = r.out.substr(0, r.out.find('\n'));
  CliRun e = facet_cli("eval fo '" + write_file("sym.json", R"({"universe":["a","b"],"relations":{"E":[["a","b"],["b","a"]]}})")
                                      .string() +
                    "' '" + line + "' --oracle");
  EXPECT_EQ(e.status, 0) << e.err;
  EXPECT_EQ(e.out, "true\n");
}

TEST(CliLearn, EmitsDot) {
  fs::path dot = scratch("product.dot");
  fs::remove(dot);
  CliRun r = facet_cli("learn --emit-dot '" + dot.string() + "' " + problem("regex-even-a.json"));
  EXPECT_EQ(r.status, 0);
  std::string text = slurp(dot);
  EXPECT_EQ(text.rfind("digraph product {", 0), 0u);
  EXPECT_NE(text.find("doublecircle"), std::string::npos);
}

TEST(CliEval, DocumentedExamples) {
  auto left = write_file("kripke-left.json", R"({"worlds":["s","w1","w2","w3"],"start":"s",
    "edges":[["s","w1"],["w1","w2"],["w2","w3"],["w3","s"],["s","w2"],["w2","s"]],
    "labels":{"s":["a"],"w1":["c"],"w2":["v"],"w3":["c"]}})");
  CliRun r = facet_cli("eval modal '" + left.string() + "' 'box(dia(or(a,v)))' --oracle");
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out, "true\n");

  auto empty = write_file("empty-word.json", R"({"word":""})");
  r = facet_cli("eval regex '" + empty.string() + "' 'star(a)' --oracle");
  EXPECT_EQ(r.out, "true\n");

  auto tuple = write_file("tuple.json", R"({"values":["1/2","3","4/3"]})");
  r = facet_cli("eval ratfo '" + tuple.string() + "' 'exists_x(forall_y(lt_x_y))' --oracle");
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out, "false\n");

  auto word = write_file("aacbb.json", R"({"word":"aacbb"})");
  r = facet_cli("eval cfg '" + word.string() +
                "' 'top_S(cat(term_a,cat(rhs_S,term_b)),lhs_S(term_c,end))' --oracle");
  EXPECT_EQ(r.out, "true\n") << r.err;
  r = facet_cli("eval cfg '" + word.string() + "' 'top_S(rhs_S,end)'");
  EXPECT_EQ(r.status, 2);
}

TEST(CliEval, ParseErrorsExitTwo) {
  auto empty = write_file("empty-word.json", R"({"word":""})");
  CliRun r = facet_cli("eval regex '" + empty.string() + "' 'star(a'");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("byte"), std::string::npos) << r.err;
  EXPECT_EQ(facet_cli("eval regex '" + empty.string() + "' 'star(a,b)'").status, 2);
  EXPECT_EQ(facet_cli("eval regex '" + empty.string() + "' 'a' --params '{bad'").status, 2);
  EXPECT_EQ(facet_cli("eval regex /nonexistent.json 'a'").status, 2);
}

TEST(CliCheckGrammar, Verdicts) {
  CliRun r = facet_cli("check-grammar " + grammar("modal.grammar") + " modal");
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(facet_cli("check-grammar " + grammar("cfg-productive.grammar") + " cfg").status, 0);
  r = facet_cli("check-grammar " + grammar("cfg-any.grammar") + " cfg");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("non-productive encoding: top_S("), std::string::npos) << r.err;
  r = facet_cli("check-grammar " + grammar("bad-arity.grammar") + " modal");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("arity"), std::string::npos) << r.err;
}

TEST(CliCheckGrammar, CounterexampleAdmitsSelfConcatenation) {
  auto g = write_file("ss.grammar", "G -> top_S(R, P)\nP -> end | lhs_S(term_a, end)\nR -> cat(rhs_S, rhs_S)\n");
  CliRun r = facet_cli("check-grammar '" + g.string() + "' cfg");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("S -> S S"), std::string::npos) << r.err;
}

// The in-process entry points behave like the executable.
TEST(CliInProcess, MatchesExecutable) {
  std::ostringstream out, err;
  cli::LearnFlags flags;
  EXPECT_EQ(cli::cmd_learn(data_path("problems/kripke-separator.json"), flags, out, err), 0);
  EXPECT_EQ(out.str(), facet_cli("learn " + problem("kripke-separator.json")).out);
}

}  // namespace
