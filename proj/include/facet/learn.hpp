#pragma once

// Learning by intersection: the grammar automaton drives a product search in
// which every labeled example contributes a deterministic automaton derived
// from its evaluator 2ATA. The first final product state popped yields a
// smallest consistent term.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "facet/evaluator.hpp"
#include "facet/grammar.hpp"
#include "facet/nfta.hpp"
#include "facet/search.hpp"
#include "facet/summary.hpp"
#include "facet/twata.hpp"

namespace facet {

template <Evaluator E>
struct Problem {
  E evaluator;
  std::vector<typename E::Structure> positives;
  std::vector<typename E::Structure> negatives;
  RegularTreeGrammar grammar;
  /// Extra deterministic automata every answer must satisfy.
  std::vector<Nfta> filters;
};

struct LearnOptions {
  std::size_t max_states = 2000000;
  std::optional<std::chrono::milliseconds> timeout;
  SearchTrace* trace = nullptr;
};

enum class Verdict { Consistent, Unrealizable, ResourceExhausted };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Consistent: return "consistent";
    case Verdict::Unrealizable: return "unrealizable";
    case Verdict::ResourceExhausted: return "resource-exhausted";
  }
  return "";
}

struct ExampleStats {
  bool positive = true;
  std::size_t input_index = 0;
  std::size_t twata_states = 0;
  std::size_t summaries = 0;
  bool merged = false;  // same automaton as an earlier example
};

struct LearnStats {
  std::size_t grammar_states = 0;
  std::vector<ExampleStats> examples;  // in product order
  std::size_t product_states = 0;
  std::size_t hyperedges = 0;
  std::size_t pops = 0;
  double seconds = 0;
};

struct Solution {
  Verdict verdict = Verdict::Unrealizable;
  std::optional<Term> term;
  LearnStats stats;

  std::size_t size() const { return term ? term->size() : 0; }
};

/// Checks a term against the grammar and every example with the reference
/// semantics.
template <Evaluator E>
bool verify(const Problem<E>& p, const Term& t) {
  if (!grammar_to_nfta(p.grammar).accepts(t)) return false;
  for (const auto& f : p.filters)
    if (!f.accepts(t)) return false;
  for (const auto& m : p.positives)
    if (!p.evaluator.reference(m, t)) return false;
  for (const auto& m : p.negatives)
    if (p.evaluator.reference(m, t)) return false;
  return true;
}

template <Evaluator E>
Solution learn(const Problem<E>& p, const LearnOptions& opts = {}) {
  const auto start = std::chrono::steady_clock::now();
  const auto& alphabet = p.evaluator.alphabet();
  if (!(p.grammar.alphabet() == alphabet)) throw AlphabetMismatch("grammar alphabet differs from the evaluator alphabet");
  for (const auto& f : p.filters)
    if (!(f.alphabet() == alphabet)) throw AlphabetMismatch("filter alphabet differs from the evaluator alphabet");
  if (p.positives.empty() && p.negatives.empty()) throw Error("a learning problem needs at least one example");

  auto check = [&](const typename E::Structure& m) {
    auto vs = check_well_formed(p.evaluator, m);
    if (!vs.empty()) throw IllFormedEvaluator(vs.front().to_string());
  };

  struct Item {
    ExampleStats stats;
    std::size_t aspects;
    const typename E::Structure* structure;
  };
  std::vector<Item> items;
  for (std::size_t i = 0; i < p.positives.size(); ++i) {
    check(p.positives[i]);
    items.push_back({{true, i, 0, 0}, p.evaluator.aspects(p.positives[i]).size(), &p.positives[i]});
  }
  for (std::size_t i = 0; i < p.negatives.size(); ++i) {
    check(p.negatives[i]);
    items.push_back({{false, i, 0, 0}, p.evaluator.aspects(p.negatives[i]).size(), &p.negatives[i]});
  }
  std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.aspects < b.aspects; });

  // Examples compiled to the same automaton are merged. A positive and a
  // negative example with the same automaton, started in dual initial states,
  // accept complementary sets, so no term is consistent with both.
  std::vector<Twata> compiled;
  for (const auto& it : items)
    compiled.push_back(build_twata(p.evaluator, *it.structure, it.stats.positive ? Label::Positive : Label::Negative));
  bool contradiction = false;
  std::vector<bool> keep(items.size(), true);
  for (std::size_t i = 0; i < items.size(); ++i)
    for (std::size_t j = 0; j < i && keep[i]; ++j) {
      if (!keep[j] || !compiled[i].same_transitions(compiled[j])) continue;
      if (compiled[i].initial() == compiled[j].initial()) keep[i] = false;
      else if ((compiled[i].initial() ^ 1u) == compiled[j].initial() && items[i].stats.positive != items[j].stats.positive)
        contradiction = true;
    }

  Nfta driver = grammar_to_nfta(p.grammar);
  std::vector<std::unique_ptr<TwataNfta>> automata(items.size());
  std::vector<std::unique_ptr<Follower>> owned;
  for (const auto& f : p.filters) owned.push_back(std::make_unique<DeterministicFollower>(f));
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!keep[i]) continue;
    automata[i] = std::make_unique<TwataNfta>(std::move(compiled[i]));
    owned.push_back(std::make_unique<TwataFollower>(*automata[i]));
  }
  std::vector<Follower*> followers;
  for (auto& f : owned) followers.push_back(f.get());

  SearchLimits limits;
  limits.max_states = opts.max_states;
  if (opts.timeout) limits.deadline = start + *opts.timeout;
  SearchResult r;
  if (!contradiction) r = search_min_witness(driver, followers, limits, opts.trace);

  Solution sol;
  sol.stats.grammar_states = driver.num_states();
  for (std::size_t i = 0; i < items.size(); ++i) {
    ExampleStats es = items[i].stats;
    es.merged = !keep[i];
    if (automata[i]) {
      es.twata_states = automata[i]->twata().num_states();
      es.summaries = automata[i]->num_states();
    } else {
      es.twata_states = compiled[i].num_states();
    }
    sol.stats.examples.push_back(es);
  }
  sol.stats.product_states = r.product_states;
  sol.stats.hyperedges = r.hyperedges;
  sol.stats.pops = r.pops;
  switch (r.status) {
    case SearchStatus::Found:
      sol.verdict = Verdict::Consistent;
      sol.term = r.witness;
      if (!verify(p, *sol.term))
        throw Error("internal error: learned term " + to_string(*sol.term) + " fails verification");
      break;
    case SearchStatus::Empty: sol.verdict = Verdict::Unrealizable; break;
    case SearchStatus::Exhausted: sol.verdict = Verdict::ResourceExhausted; break;
  }
  sol.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sol;
}

}  // namespace facet
