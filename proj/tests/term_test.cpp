#include <gtest/gtest.h>

#include <random>
#include <set>
#include <string>

#include "facet/grammar.hpp"
#include "facet/nfta.hpp"
#include "facet/term.hpp"

namespace {

using namespace facet;

RankedAlphabet modal_alphabet() {
  return RankedAlphabet({{"and", 2}, {"or", 2}, {"not", 1}, {"box", 1}, {"dia", 1}, {"a", 0}, {"c", 0}, {"v", 0}});
}

RankedAlphabet unary_alphabet() { return RankedAlphabet({{"f", 1}, {"a", 0}, {"b", 0}}); }

const char* kModalGrammar = "F -> box(F)\nF -> a\nF -> v\nF -> or(F,F)\nF -> dia(F)\n";

std::set<std::string> strings(const std::set<Term>& ts) {
  std::set<std::string> out;
  for (const auto& t : ts) out.insert(to_string(t));
  return out;
}

TEST(Alphabet, RejectsMissingLeafAndDuplicates) {
  EXPECT_THROW(RankedAlphabet({{"f", 1}}), Error);
  EXPECT_THROW(RankedAlphabet({{"a", 0}, {"a", 1}}), Error);
  EXPECT_THROW(RankedAlphabet({{"", 0}}), Error);
  EXPECT_NO_THROW(RankedAlphabet({{"a", 0}}));
}

TEST(Term, ParseSizeAndPrint) {
  auto al = modal_alphabet();
  Term t = parse_term("box(dia(or(a,v)))", al);
  EXPECT_EQ(t.size(), 5u);
  EXPECT_EQ(t.depth(), 4u);
  EXPECT_EQ(to_string(t), "box(dia(or(a,v)))");
  Term leaf = parse_term("a", al);
  EXPECT_EQ(leaf.size(), 1u);
  EXPECT_EQ(leaf.arity(), 0u);
  EXPECT_EQ(parse_term(" a ( ) ", al), leaf);
  EXPECT_EQ(parse_term(" or ( a , v ) ", al), parse_term("or(a,v)", al));
}

TEST(Term, ParseErrorsCarryOffsets) {
  auto al = modal_alphabet();
  try {
    parse_term("and(a)", al);
    FAIL() << "arity mismatch accepted";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 0u);
  }
  try {
    parse_term("or(a,zz)", al);
    FAIL() << "unknown symbol accepted";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 5u);
  }
  EXPECT_THROW(parse_term("or(a,v", al), ParseError);
  EXPECT_THROW(parse_term("or(a,v))", al), ParseError);
  EXPECT_THROW(parse_term("", al), ParseError);
  EXPECT_THROW(parse_term("box(a) v", al), ParseError);
}

TEST(Term, HashConsingSharesNodes) {
  auto al = modal_alphabet();
  Term x = parse_term("or(box(a),box(a))", al);
  EXPECT_EQ(x.child(0).id(), x.child(1).id());
  EXPECT_EQ(parse_term("box(a)", al), x.child(0));
  EXPECT_NE(parse_term("box(v)", al), x.child(0));
}

TEST(Term, MakeChecksArity) {
  auto al = modal_alphabet();
  EXPECT_THROW(Term::make(al, "box", {}), ArityError);
  EXPECT_THROW(Term::make(al, "nope", {}), UnknownSymbolError);
}

TEST(Term, OrderIsNameThenChildren) {
  auto al = modal_alphabet();
  auto p = [&](const char* s) { return parse_term(s, al); };
  EXPECT_LT(p("a"), p("v"));
  EXPECT_LT(p("box(v)"), p("dia(a)"));
  EXPECT_LT(p("or(a,v)"), p("or(v,a)"));
  EXPECT_LT(p("or(a,box(a))"), p("or(a,v)"));
  EXPECT_EQ(p("or(a,v)") <=> p("or(a,v)"), std::strong_ordering::equal);
}

TEST(Term, RoundTripOnEnumeratedTerms) {
  auto al = modal_alphabet();
  auto all = enumerate_terms(al, 5);
  EXPECT_GT(all.size(), 100u);
  for (const auto& t : all) ASSERT_EQ(parse_term(to_string(t), al), t);
}

TEST(Term, EnumerationCountsMatchCatalanLikeRecurrence) {
  // One binary symbol and one leaf: counts are Catalan numbers at odd sizes.
  RankedAlphabet al({{"f", 2}, {"x", 0}});
  auto all = enumerate_terms(al, 9);
  std::map<std::size_t, std::size_t> by_size;
  for (const auto& t : all) ++by_size[t.size()];
  EXPECT_EQ(by_size[1], 1u);
  EXPECT_EQ(by_size[3], 1u);
  EXPECT_EQ(by_size[5], 2u);
  EXPECT_EQ(by_size[7], 5u);
  EXPECT_EQ(by_size[9], 14u);
  EXPECT_EQ(by_size.count(2), 0u);
}

TEST(Grammar, ParsesStartAndNonterminals) {
  auto g = parse_grammar("F -> and(F,F)\nF -> a", modal_alphabet());
  ASSERT_EQ(g.nonterminals().size(), 1u);
  EXPECT_EQ(g.nonterminals()[0], "F");
  EXPECT_EQ(g.start(), 0u);
  EXPECT_EQ(g.productions().size(), 2u);
}

TEST(Grammar, CommentsSeparatorsAlternatives) {
  auto al = unary_alphabet();
  auto g = parse_grammar("# header\nS -> f(T) | a   # trailing\n\nT -> b; T -> f(S)\n", al);
  EXPECT_EQ(g.nonterminals(), (std::vector<std::string>{"S", "T"}));
  EXPECT_EQ(g.productions().size(), 4u);
  auto again = parse_grammar(g.to_string(), al);
  EXPECT_EQ(again.productions(), g.productions());
}

TEST(Grammar, Errors) {
  auto al = modal_alphabet();
  EXPECT_THROW(parse_grammar("F -> and(G,G)", al), GrammarError);
  EXPECT_THROW(parse_grammar("F -> and(F)", al), GrammarError);
  EXPECT_THROW(parse_grammar("# nothing\n\n", al), GrammarError);
  EXPECT_THROW(parse_grammar("F -> ", al), GrammarError);
  EXPECT_THROW(parse_grammar("F and(F,F)", al), GrammarError);
  EXPECT_THROW(parse_grammar("a -> box(a)", al), GrammarError);
  EXPECT_THROW(parse_grammar("F -> F(a)", al), GrammarError);
  try {
    parse_grammar("F -> a\nF -> box(a,a)\n", al);
    FAIL();
  } catch (const GrammarError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Grammar, GenerateUptoSmallCases) {
  auto al = unary_alphabet();
  EXPECT_EQ(strings(generate_upto(parse_grammar("F -> a", al), 3)), (std::set<std::string>{"a"}));
  EXPECT_EQ(strings(generate_upto(parse_grammar("F -> f(F); F -> a", al), 3)),
            (std::set<std::string>{"a", "f(a)", "f(f(a))"}));
  EXPECT_EQ(strings(generate_upto(parse_grammar(kModalGrammar, modal_alphabet()), 2)),
            (std::set<std::string>{"a", "v", "box(a)", "box(v)", "dia(a)", "dia(v)"}));
}

TEST(Grammar, ModalGrammarDerivesSeparator) {
  auto al = modal_alphabet();
  auto g = parse_grammar(kModalGrammar, al);
  auto terms = generate_upto(g, 5);
  EXPECT_TRUE(terms.count(parse_term("box(dia(or(a,v)))", al)));
  EXPECT_FALSE(terms.count(parse_term("box(dia(or(a,c)))", al)));
  EXPECT_FALSE(terms.count(parse_term("and(a,v)", al)));
}

TEST(Grammar, UnitProductionsAndNestedPatterns) {
  auto al = unary_alphabet();
  auto g = parse_grammar("S -> T\nT -> f(f(S))\nT -> a\nS -> b\n", al);
  EXPECT_EQ(strings(generate_upto(g, 5)), (std::set<std::string>{"a", "b", "f(f(a))", "f(f(b))", "f(f(f(f(a))))",
                                                                 "f(f(f(f(b))))"}));
}

// Grammars over a small alphabet, compared with the automaton and with a
// filter over all terms.
class GrammarAgreement : public ::testing::TestWithParam<const char*> {};

TEST_P(GrammarAgreement, GenerateMatchesAutomaton) {
  RankedAlphabet al({{"g", 2}, {"f", 1}, {"a", 0}, {"b", 0}});
  auto g = parse_grammar(GetParam(), al);
  Nfta n = grammar_to_nfta(g);
  auto generated = generate_upto(g, 6);
  for (const auto& t : enumerate_terms(al, 6)) ASSERT_EQ(generated.count(t) == 1, n.accepts(t)) << to_string(t);
}

INSTANTIATE_TEST_SUITE_P(Fixtures, GrammarAgreement,
                         ::testing::Values("S -> a", "S -> f(S) | a", "S -> g(S,T)\nS -> a\nT -> f(T) | b",
                                           "S -> g(f(S),S) | T\nT -> b | f(a)", "S -> T\nT -> S\nT -> g(a,S) | b",
                                           "S -> g(S,S) | f(U) | a\nU -> U"));

}  // namespace
