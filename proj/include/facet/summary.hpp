#pragma once

// Conversion of a two-way alternating automaton into a deterministic
// bottom-up automaton whose states are exit-set summaries.
//
// A summary assigns each 2ATA state q an antichain of minimal exit sets
// E subset of Q_up: from (v, q) the existential player can force every play to
// hit a final state inside the subtree at v, or to leave v upward in a state
// of E. Without Up atoms every exit set is empty and this is a subset
// construction.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "facet/nfta.hpp"
#include "facet/twata.hpp"

namespace facet {

using ExitSet = std::vector<StateId>;     // sorted
using Antichain = std::vector<ExitSet>;   // subset-minimal, sorted
using Summary = std::vector<Antichain>;   // indexed by 2ATA state

namespace antichain {

inline bool subset(const ExitSet& a, const ExitSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

/// Removes duplicates and non-minimal sets; sorts.
inline Antichain minimize(Antichain sets) {
  std::sort(sets.begin(), sets.end(), [](const ExitSet& a, const ExitSet& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  Antichain out;
  for (auto& s : sets)
    if (std::none_of(out.begin(), out.end(), [&](const ExitSet& o) { return subset(o, s); }))
      out.push_back(std::move(s));
  std::sort(out.begin(), out.end());
  return out;
}

inline Antichain unit() { return {ExitSet{}}; }

inline Antichain join(const Antichain& a, const Antichain& b) {
  Antichain all = a;
  all.insert(all.end(), b.begin(), b.end());
  return minimize(std::move(all));
}

/// Pairwise unions: the antichain of the conjunction.
inline Antichain meet(const Antichain& a, const Antichain& b) {
  if (a.empty() || b.empty()) return {};
  if (a.size() == 1 && a[0].empty()) return b;
  if (b.size() == 1 && b[0].empty()) return a;
  Antichain out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) {
      ExitSet u;
      std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(u));
      out.push_back(std::move(u));
    }
  return minimize(std::move(out));
}

/// Adds e if no member is a subset of it. Returns whether the antichain changed.
inline bool insert(Antichain& a, const ExitSet& e) {
  if (std::any_of(a.begin(), a.end(), [&](const ExitSet& o) { return subset(o, e); })) return false;
  std::erase_if(a, [&](const ExitSet& o) { return subset(e, o); });
  a.insert(std::lower_bound(a.begin(), a.end(), e), e);
  return true;
}

}  // namespace antichain

struct SummaryHash {
  std::size_t operator()(const Summary& s) const noexcept {
    std::size_t h = s.size();
    for (const auto& chain : s) {
      h = h * 1000003u ^ chain.size();
      for (const auto& e : chain)
        for (StateId q : e) h = (h ^ q) * 0x100000001b3ULL;
    }
    return h;
  }
};

struct StepKeyHash {
  std::size_t operator()(const std::vector<StateId>& k) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (StateId x : k) h = (h ^ x) * 0x100000001b3ULL;
    return h;
  }
};

/// Deterministic bottom-up automaton equivalent to a Twata, materialized on
/// demand. Not thread-safe: memo tables are per instance.
class TwataNfta {
 public:
  explicit TwataNfta(Twata automaton) : a_(std::move(automaton)) {}

  const Twata& twata() const { return a_; }
  const RankedAlphabet& alphabet() const { return a_.alphabet(); }

  /// Summary id of a node with the given symbol and child summaries.
  StateId step(SymbolId s, std::span<const StateId> children) {
    key_.assign(1, s);
    key_.insert(key_.end(), children.begin(), children.end());
    if (auto it = steps_.find(key_); it != steps_.end()) return it->second;
    Summary sum = compute(s, children);
    StateId id = intern(std::move(sum));
    key_.assign(1, s);
    key_.insert(key_.end(), children.begin(), children.end());
    steps_.emplace(key_, id);
    return id;
  }

  bool is_final(StateId id) const { return final_[id]; }
  const Summary& summary(StateId id) const { return summaries_[id]; }
  std::size_t num_states() const { return summaries_.size(); }
  std::size_t transitions() const { return steps_.size(); }

  StateId run(const Term& t) {
    auto id = a_.alphabet().find(t.name());
    if (!id || a_.alphabet()[*id].arity != t.arity())
      throw UnknownSymbolError("symbol '" + t.name() + "' is not in the automaton alphabet");
    std::vector<StateId> kids;
    kids.reserve(t.arity());
    for (std::size_t i = 0; i < t.arity(); ++i) kids.push_back(run(t.child(i)));
    return step(*id, kids);
  }

  bool accepts(const Term& t) { return is_final(run(t)); }

  /// The transitions materialized so far as an explicit automaton.
  Nfta to_explicit() const {
    std::vector<NftaRule> rules;
    rules.reserve(steps_.size());
    for (const auto& [k, id] : steps_)
      rules.push_back({static_cast<SymbolId>(k[0]), std::vector<StateId>(k.begin() + 1, k.end()), id});
    return Nfta(a_.alphabet(), summaries_.size(), std::move(rules), final_);
  }

 private:
  StateId intern(Summary sum) {
    auto [it, fresh] = index_.emplace(sum, static_cast<StateId>(summaries_.size()));
    if (fresh) {
      const auto& chain = sum[a_.initial()];
      final_.push_back(!chain.empty() && chain.front().empty());
      summaries_.push_back(std::move(sum));
    }
    return it->second;
  }

  // Antichain denoted by a formula at the current node, given the partial
  // summary `cur` of this node. Records the states of `cur` that were read.
  Antichain eval(const PosBool& f, std::span<const StateId> children, const Summary& cur,
                 std::vector<StateId>& read) const {
    using K = PosBool::Kind;
    switch (f.kind()) {
      case K::True: return antichain::unit();
      case K::False: return {};
      case K::Atom: {
        const StateAtom& at = f.atom_value();
        if (at.move.is_up()) return {ExitSet{at.state}};
        if (at.move.is_stay()) {
          read.push_back(at.state);
          return cur[at.state];
        }
        const Summary& below = summaries_[children[static_cast<std::size_t>(at.move.child_index()) - 1]];
        Antichain out;
        for (const auto& exits : below[at.state]) {
          Antichain acc = antichain::unit();
          for (StateId p : exits) {
            read.push_back(p);
            acc = antichain::meet(acc, cur[p]);
            if (acc.empty()) break;
          }
          out.insert(out.end(), acc.begin(), acc.end());
        }
        return antichain::minimize(std::move(out));
      }
      case K::And: {
        Antichain acc = antichain::unit();
        for (const auto& o : f.operands()) {
          Antichain x = eval(o, children, cur, read);
          acc = antichain::meet(acc, x);
          if (acc.empty()) break;
        }
        return acc;
      }
      case K::Or: {
        Antichain acc;
        for (const auto& o : f.operands()) {
          Antichain x = eval(o, children, cur, read);
          acc.insert(acc.end(), x.begin(), x.end());
        }
        return antichain::minimize(std::move(acc));
      }
    }
    return {};
  }

  Summary compute(SymbolId s, std::span<const StateId> children) const {
    const std::size_t n = a_.num_states();
    Summary cur(n);
    std::vector<std::vector<StateId>> readers(n);
    std::vector<char> queued(n, 1);
    std::vector<StateId> work;
    work.reserve(n);
    for (StateId q = static_cast<StateId>(n); q-- > 0;) {
      if (a_.is_final(q))
        cur[q] = antichain::unit();  // winning outright; never re-evaluated
      else
        work.push_back(q);
    }
    std::vector<StateId> read;
    while (!work.empty()) {
      StateId q = work.back();
      work.pop_back();
      queued[q] = 0;
      read.clear();
      Antichain next = eval(a_.delta(q, s), children, cur, read);
      for (StateId p : read) {
        auto& r = readers[p];
        if (std::find(r.begin(), r.end(), q) == r.end()) r.push_back(q);
      }
      // cur only grows: merge rather than replace.
      bool changed = false;
      for (const auto& e : next) changed |= antichain::insert(cur[q], e);
      if (!changed) continue;
      for (StateId d : readers[q])
        if (!queued[d]) {
          queued[d] = 1;
          work.push_back(d);
        }
    }
    return cur;
  }

  Twata a_;
  std::vector<Summary> summaries_;
  std::vector<bool> final_;
  std::unordered_map<Summary, StateId, SummaryHash> index_;
  std::unordered_map<std::vector<StateId>, StateId, StepKeyHash> steps_;
  std::vector<StateId> key_;
};

inline TwataNfta to_nfta(Twata a) { return TwataNfta(std::move(a)); }

struct ConversionStats {
  std::size_t twata_states = 0;
  std::size_t summaries = 0;
  std::size_t transitions = 0;
  bool complete = true;  // false if the cap stopped the exploration
};

/// Applies every symbol to every tuple of known summaries until no new
/// summary appears. Returns false if more than `cap` summaries were reached.
inline bool saturate(TwataNfta& n, std::size_t cap) {
  const auto& alphabet = n.alphabet();
  std::size_t done = 0;  // summaries [0, done) have been combined with each other
  bool first = true;
  while (first || done < n.num_states()) {
    first = false;
    std::size_t known = n.num_states();
    for (SymbolId s = 0; s < alphabet.size(); ++s) {
      unsigned k = alphabet[s].arity;
      std::vector<StateId> tuple(k, 0);
      // Tuples over [0, known) that use at least one summary >= done.
      std::function<void(unsigned, bool)> rec = [&](unsigned i, bool fresh) {
        if (n.num_states() > cap) return;
        if (i == k) {
          if (fresh || (k == 0 && done == 0)) n.step(s, tuple);
          return;
        }
        for (StateId c = 0; c < known; ++c) {
          tuple[i] = c;
          rec(i + 1, fresh || c >= done);
        }
      };
      rec(0, false);
    }
    done = known;
    if (n.num_states() > cap) return false;
  }
  return true;
}

/// Counts the reachable summary space, stopping after `cap` summaries.
inline ConversionStats count_reachable(const Twata& a, std::size_t cap = 100000) {
  TwataNfta n(a);
  ConversionStats st;
  st.twata_states = a.num_states();
  st.complete = saturate(n, cap);
  st.summaries = n.num_states();
  st.transitions = n.transitions();
  return st;
}

/// The full reachable summary automaton as an explicit Nfta, or nothing if
/// it exceeds `cap` summaries.
inline std::optional<Nfta> materialize(const Twata& a, std::size_t cap) {
  TwataNfta n(a);
  if (!saturate(n, cap)) return std::nullopt;
  return n.to_explicit();
}

}  // namespace facet
