#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <random>
#include <string>
#include <vector>

#include "facet/cli.hpp"
#include "facet/languages.hpp"
#include "facet/learn.hpp"
#include "random_problems.hpp"
#include "support.hpp"

namespace {

using namespace facet;
using namespace facet::lang;
using facet::testing::data_path;

template <class E>
Problem<E> load(const std::string& name) {
  return cli::detail::typed_problem<E>(load_problem_file(data_path("problems/" + name)));
}

TEST(Learn, KripkeSeparatorIsMinimum) {
  auto p = load<ModalEvaluator>("kripke-separator.json");
  Solution sol = learn(p);
  ASSERT_EQ(sol.verdict, Verdict::Consistent);
  EXPECT_TRUE(verify(p, *sol.term));
  auto pool = facet::testing::brute_force_pool(p, 5);
  auto brute = facet::testing::brute_force_min(p, pool);
  ASSERT_TRUE(brute.has_value());
  EXPECT_EQ(sol.size(), brute->size());
  EXPECT_EQ(sol.size(), 3u);
  EXPECT_EQ(to_string(*sol.term), "dia(dia(a))");
}

TEST(Learn, VerifyOnKripkeSeparator) {
  auto p = load<ModalEvaluator>("kripke-separator.json");
  const auto& al = p.evaluator.alphabet();
  Term drawn = parse_term("box(dia(or(a,v)))", al);
  EXPECT_EQ(drawn.size(), 5u);
  EXPECT_TRUE(verify(p, drawn));
  EXPECT_FALSE(verify(p, parse_term("a", al)));
  // Consistent with every example but outside the grammar.
  EXPECT_FALSE(verify(p, parse_term("box(dia(not(not(or(a,v)))))", al)));
  EXPECT_TRUE(p.evaluator.reference(p.positives[0], parse_term("box(dia(not(not(or(a,v)))))", al)));
}

TEST(Learn, BisimilarStructuresAreUnrealizable) {
  auto p = load<ModalEvaluator>("bisimilar.json");
  auto t0 = std::chrono::steady_clock::now();
  Solution sol = learn(p);
  EXPECT_EQ(sol.verdict, Verdict::Unrealizable);
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 60.0);
  auto pool = facet::testing::brute_force_pool(p, 8);
  EXPECT_GT(pool.size(), 10000u);
  EXPECT_FALSE(facet::testing::brute_force_min(p, pool).has_value());
}

TEST(Learn, OverlappingExamplesAreUnrealizable) {
  auto p = load<RegexEvaluator>("regex-overlap.json");
  auto t0 = std::chrono::steady_clock::now();
  EXPECT_EQ(learn(p).verdict, Verdict::Unrealizable);
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 1.0);
}

TEST(Learn, CfgWitnessIsProductive) {
  auto p = load<CfgEvaluator>("cfg-anb.json");
  Solution sol = learn(p);
  ASSERT_EQ(sol.verdict, Verdict::Consistent);
  EXPECT_TRUE(CfgEvaluator::productive(p.evaluator.decode(*sol.term)));
  EXPECT_EQ(p.evaluator.grammar_string(p.evaluator.decode(*sol.term)), "S -> a S; S -> b");
  auto pool = facet::testing::brute_force_pool(p, sol.size());
  EXPECT_EQ(facet::testing::brute_force_min(p, pool)->size(), sol.size());
}

TEST(Learn, ShippedProblemsAgreeWithBruteForce) {
  for (const char* name : {"regex-even-a.json", "ltl-eventually-b.json", "ctl-eg.json", "ratfo-min.json",
                           "fo-symmetric.json"}) {
    ProblemFile pf = load_problem_file(data_path(std::string("problems/") + name));
    dispatch(pf.language, [&]<class E>(E*) {
      auto p = cli::detail::typed_problem<E>(pf);
      Solution sol = learn(p);
      EXPECT_EQ(sol.verdict, Verdict::Consistent) << name;
      if (!sol.term) return 0;
      auto pool = facet::testing::brute_force_pool(p, sol.size());
      auto brute = facet::testing::brute_force_min(p, pool);
      EXPECT_TRUE(brute.has_value()) << name;
      if (brute) {
        EXPECT_EQ(brute->size(), sol.size()) << name;
      }
      return 0;
    });
  }
}

TEST(Learn, ReorderingAndDuplicatesKeepVerdictAndSize) {
  std::mt19937 rng(7);
  for (const char* name : {"kripke-separator.json", "bisimilar.json", "regex-even-a.json", "regex-overlap.json",
                           "ltl-eventually-b.json", "fo-symmetric.json"}) {
    ProblemFile pf = load_problem_file(data_path(std::string("problems/") + name));
    dispatch(pf.language, [&]<class E>(E*) {
      Solution base = learn(cli::detail::typed_problem<E>(pf));
      for (int round = 0; round < 4; ++round) {
        ProblemFile q = pf;
        std::shuffle(q.positives.begin(), q.positives.end(), rng);
        std::shuffle(q.negatives.begin(), q.negatives.end(), rng);
        if (round % 2 == 1) {
          q.positives.push_back(q.positives.front());
          q.negatives.push_back(q.negatives.back());
        }
        Solution s = learn(cli::detail::typed_problem<E>(q));
        EXPECT_EQ(s.verdict, base.verdict) << name;
        EXPECT_EQ(s.size(), base.size()) << name;
        if (s.term && base.term) {
          EXPECT_EQ(*s.term, *base.term) << name;
        }
      }
      return 0;
    });
  }
}

TEST(Learn, ResourceLimitsAreReportedSeparately) {
  auto p = load<ModalEvaluator>("kripke-separator.json");
  LearnOptions tight;
  tight.max_states = 3;
  EXPECT_EQ(learn(p, tight).verdict, Verdict::ResourceExhausted);
  LearnOptions instant;
  instant.timeout = std::chrono::milliseconds(0);
  EXPECT_EQ(learn(p, instant).verdict, Verdict::ResourceExhausted);
}

TEST(Learn, RejectsMalformedProblems) {
  auto p = load<ModalEvaluator>("kripke-separator.json");
  Problem<ModalEvaluator> empty{p.evaluator, {}, {}, p.grammar, {}};
  EXPECT_THROW(learn(empty), Error);
  ModalEvaluator other({"a"});
  Problem<ModalEvaluator> mismatch{other, p.positives, p.negatives, p.grammar, {}};
  EXPECT_THROW(learn(mismatch), AlphabetMismatch);
  EXPECT_THROW(load_problem_file(data_path("grammars/modal.grammar")), StructureError);
}

TEST(Learn, StatsDescribeEveryExample) {
  auto p = load<ModalEvaluator>("kripke-separator.json");
  Solution sol = learn(p);
  ASSERT_EQ(sol.stats.examples.size(), 4u);
  for (std::size_t i = 1; i < sol.stats.examples.size(); ++i)
    EXPECT_LE(sol.stats.examples[i - 1].twata_states, sol.stats.examples[i].twata_states);
  EXPECT_GT(sol.stats.product_states, 0u);
  EXPECT_EQ(sol.stats.grammar_states, 1u);
}

class RandomMinimality : public ::testing::TestWithParam<std::string> {};

TEST_P(RandomMinimality, AgreesWithBruteForce) {
  auto rep = facet::testing::check_random_minimality(GetParam(), 12, 7, 1234);
  EXPECT_EQ(rep.problems, 12u);
  EXPECT_EQ(rep.failures, 0u) << rep.first_failure;
}

INSTANTIATE_TEST_SUITE_P(AllLanguages, RandomMinimality,
                         ::testing::Values("modal", "ctl", "regex", "ltl", "cfg", "ratfo", "fo"));

}  // namespace
