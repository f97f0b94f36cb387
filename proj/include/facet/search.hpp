#pragma once

// Smallest-term search over the product of a nondeterministic driver
// automaton and deterministic followers that are stepped on demand.
//
// Generalized Dijkstra over hyperedges: a product state is finalized the
// first time it is popped, with priority (size, term). Since followers are
// deterministic, the best term of a state is built from the best terms of
// its children, so the first final state popped carries the minimum-size,
// then lexicographically least, witness.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "facet/nfta.hpp"
#include "facet/summary.hpp"

namespace facet {

/// Deterministic bottom-up automaton stepped on demand.
class Follower {
 public:
  virtual ~Follower() = default;
  virtual StateId step(SymbolId s, std::span<const StateId> children) = 0;
  virtual bool is_final(StateId q) const = 0;
  virtual std::size_t num_states() const = 0;
};

class TwataFollower final : public Follower {
 public:
  explicit TwataFollower(TwataNfta& n) : n_(n) {}
  StateId step(SymbolId s, std::span<const StateId> c) override { return n_.step(s, c); }
  bool is_final(StateId q) const override { return n_.is_final(q); }
  std::size_t num_states() const override { return n_.num_states(); }

 private:
  TwataNfta& n_;
};

/// Wraps an explicit automaton that has at most one rule per (symbol,
/// children). Missing rules go to an extra non-final sink state.
class DeterministicFollower final : public Follower {
 public:
  explicit DeterministicFollower(const Nfta& a) : a_(a), sink_(static_cast<StateId>(a.num_states())) {
    for (const auto& r : a.rules()) {
      std::vector<StateId> key{r.symbol};
      key.insert(key.end(), r.children.begin(), r.children.end());
      if (!table_.emplace(std::move(key), r.result).second)
        throw Error("automaton is not deterministic");
    }
  }
  StateId step(SymbolId s, std::span<const StateId> c) override {
    std::vector<StateId> key{s};
    key.insert(key.end(), c.begin(), c.end());
    auto it = table_.find(key);
    return it == table_.end() ? sink_ : it->second;
  }
  bool is_final(StateId q) const override { return q != sink_ && a_.is_final(q); }
  std::size_t num_states() const override { return a_.num_states() + 1; }

 private:
  const Nfta& a_;
  StateId sink_;
  std::unordered_map<std::vector<StateId>, StateId, StepKeyHash> table_;
};

inline constexpr std::size_t kInfiniteCost = std::numeric_limits<std::size_t>::max();

inline std::size_t saturating_add(std::size_t a, std::size_t b) {
  return a > kInfiniteCost - b ? kInfiniteCost : a + b;
}

struct SearchLimits {
  std::size_t max_states = std::numeric_limits<std::size_t>::max();
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

enum class SearchStatus { Found, Empty, Exhausted };

/// Explored product hypergraph, for visualization.
struct SearchTrace {
  struct Edge {
    SymbolId symbol;
    std::vector<std::size_t> children;
    std::size_t result;
  };
  std::vector<std::string> state_labels;
  std::vector<bool> final;
  std::vector<Edge> edges;
};

struct SearchResult {
  SearchStatus status = SearchStatus::Empty;
  std::optional<Term> witness;
  std::size_t product_states = 0;
  std::size_t hyperedges = 0;
  std::size_t pops = 0;
};

namespace detail {

struct Candidate {
  std::size_t cost;
  Term term;
  std::size_t state;
};

struct CandidateAfter {
  bool operator()(const Candidate& a, const Candidate& b) const {
    if (a.cost != b.cost) return a.cost > b.cost;
    if (a.term != b.term) return a.term > b.term;
    return a.state > b.state;
  }
};

}  // namespace detail

inline SearchResult search_min_witness(const Nfta& driver, std::span<Follower* const> followers,
                                       const SearchLimits& limits = {}, SearchTrace* trace = nullptr) {
  const auto& alphabet = driver.alphabet();
  const std::size_t width = 1 + followers.size();
  SearchResult res;

  // Driver rules where a given driver state occurs as a child, with the position.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> uses(driver.num_states());
  for (std::size_t ri = 0; ri < driver.rules().size(); ++ri) {
    const auto& r = driver.rules()[ri];
    for (std::size_t j = 0; j < r.children.size(); ++j) uses[r.children[j]].emplace_back(ri, j);
  }

  std::vector<StateId> states;  // flattened tuples, `width` per product state
  std::unordered_map<std::vector<StateId>, std::size_t, StepKeyHash> index;
  std::vector<std::optional<std::pair<std::size_t, Term>>> best;
  std::vector<char> done;
  std::vector<std::vector<std::size_t>> finalized_by_driver(driver.num_states());
  std::priority_queue<detail::Candidate, std::vector<detail::Candidate>, detail::CandidateAfter> queue;
  bool exhausted = false;
  std::size_t ticks = 0;

  auto over_budget = [&] {
    if (states.size() / width > limits.max_states) return true;
    for (auto* f : followers)
      if (f->num_states() > limits.max_states) return true;
    if (limits.deadline && (ticks++ & 63) == 0 && std::chrono::steady_clock::now() > *limits.deadline) return true;
    return false;
  };

  auto is_final = [&](std::size_t p) {
    if (!driver.is_final(states[p * width])) return false;
    for (std::size_t m = 0; m < followers.size(); ++m)
      if (!followers[m]->is_final(states[p * width + 1 + m])) return false;
    return true;
  };

  std::vector<StateId> tuple(width);
  std::vector<StateId> kid_states;
  auto offer = [&](const NftaRule& rule, std::span<const std::size_t> kids) {
    ++res.hyperedges;
    tuple[0] = rule.result;
    for (std::size_t m = 0; m < followers.size(); ++m) {
      kid_states.clear();
      for (std::size_t c : kids) kid_states.push_back(states[c * width + 1 + m]);
      tuple[1 + m] = followers[m]->step(rule.symbol, kid_states);
    }
    auto it = index.find(tuple);
    const bool fresh = it == index.end();
    if (fresh) it = index.emplace(tuple, best.size()).first;
    std::size_t p = it->second;
    if (fresh) {
      states.insert(states.end(), tuple.begin(), tuple.end());
      best.emplace_back();
      done.push_back(0);
      if (trace) {
        std::string label = driver.state_name(tuple[0]);
        for (std::size_t m = 1; m < width; ++m) label += "," + std::to_string(tuple[m]);
        trace->state_labels.push_back(label);
        trace->final.push_back(is_final(p));
      }
    }
    if (trace) trace->edges.push_back({rule.symbol, std::vector<std::size_t>(kids.begin(), kids.end()), p});
    if (done[p]) return;
    std::size_t cost = 1;
    for (std::size_t c : kids) cost = saturating_add(cost, best[c]->first);
    if (best[p] && best[p]->first < cost) return;
    std::vector<Term> sub;
    sub.reserve(kids.size());
    for (std::size_t c : kids) sub.push_back(best[c]->second);
    Term t = Term::make(alphabet[rule.symbol], std::move(sub));
    if (best[p] && (best[p]->first < cost || (best[p]->first == cost && !(t < best[p]->second)))) return;
    best[p] = std::make_pair(cost, t);
    queue.push({cost, std::move(t), p});
  };

  for (const auto& r : driver.rules())
    if (r.children.empty()) offer(r, {});

  std::vector<std::size_t> kids;
  while (!queue.empty()) {
    if (over_budget()) {
      exhausted = true;
      break;
    }
    detail::Candidate top = queue.top();
    queue.pop();
    if (done[top.state]) continue;
    done[top.state] = 1;
    ++res.pops;
    if (is_final(top.state)) {
      res.status = SearchStatus::Found;
      res.witness = top.term;
      res.product_states = best.size();
      return res;
    }
    const std::size_t p = top.state;
    const StateId g = states[p * width];
    finalized_by_driver[g].push_back(p);

    // Hyperedges whose last-finalized child is p, enumerated once each:
    // p sits at its first occurrence j, earlier positions hold other states.
    for (auto [ri, j] : uses[g]) {
      const NftaRule rule = driver.rules()[ri];
      const std::size_t k = rule.children.size();
      kids.assign(k, 0);
      kids[j] = p;
      auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == k) {
          offer(rule, kids);
          return;
        }
        if (i == j) {
          self(self, i + 1);
          return;
        }
        const auto& pool = finalized_by_driver[rule.children[i]];
        const std::size_t n = pool.size();
        for (std::size_t x = 0; x < n; ++x) {
          std::size_t c = pool[x];
          if (i < j && c == p) continue;
          kids[i] = c;
          self(self, i + 1);
        }
      };
      rec(rec, 0);
    }
  }
  res.product_states = best.size();
  res.status = exhausted ? SearchStatus::Exhausted : SearchStatus::Empty;
  return res;
}

/// Minimum-size term accepted by a, ties broken by the term order.
inline std::optional<std::pair<Term, std::size_t>> min_witness(const Nfta& a) {
  auto r = search_min_witness(a, {});
  if (!r.witness) return std::nullopt;
  return std::make_pair(*r.witness, r.witness->size());
}

inline std::string trace_to_dot(const SearchTrace& t, const RankedAlphabet& alphabet) {
  std::string out = "digraph product {\n  rankdir=BT;\n";
  for (std::size_t i = 0; i < t.state_labels.size(); ++i) {
    out += "  s" + std::to_string(i) + " [label=\"" + t.state_labels[i] + "\"";
    if (t.final[i]) out += ", shape=doublecircle";
    out += "];\n";
  }
  for (std::size_t e = 0; e < t.edges.size(); ++e) {
    const auto& edge = t.edges[e];
    std::string hub = "e" + std::to_string(e);
    out += "  " + hub + " [shape=box, label=\"" + alphabet[edge.symbol].name + "\"];\n";
    for (std::size_t c : edge.children) out += "  s" + std::to_string(c) + " -> " + hub + ";\n";
    out += "  " + hub + " -> s" + std::to_string(edge.result) + ";\n";
  }
  return out + "}\n";
}

}  // namespace facet
