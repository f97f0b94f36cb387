#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "facet/errors.hpp"
#include "facet/posbool.hpp"
#include "facet/term.hpp"

namespace facet {

using StateId = std::uint32_t;

struct StateAtom {
  StateId state = 0;
  Move move;

  friend bool operator==(const StateAtom&, const StateAtom&) = default;
  friend auto operator<=>(const StateAtom&, const StateAtom&) = default;
};

using PosBool = BoolFormula<StateAtom>;

inline PosBool dualize_pbf(const PosBool& f, const std::function<StateId(StateId)>& flip) {
  return f.dualize([&](const StateAtom& a) { return StateAtom{flip(a.state), a.move}; });
}

/// Two-way alternating tree automaton with reachability acceptance.
class Twata {
 public:
  Twata(RankedAlphabet alphabet, std::size_t num_states, StateId initial, std::vector<PosBool> transitions,
        std::vector<bool> final, std::vector<std::string> state_names = {})
      : alphabet_(std::move(alphabet)),
        num_states_(num_states),
        initial_(initial),
        delta_(std::move(transitions)),
        final_(std::move(final)),
        names_(std::move(state_names)) {
    if (initial_ >= num_states_) throw Error("initial state out of range");
    if (delta_.size() != num_states_ * alphabet_.size()) throw Error("transition table is not total");
    if (final_.size() != num_states_) throw Error("final-state vector has wrong length");
    if (!names_.empty() && names_.size() != num_states_) throw Error("state-name vector has wrong length");
    for (StateId q = 0; q < num_states_; ++q)
      for (SymbolId s = 0; s < alphabet_.size(); ++s)
        delta(q, s).for_each_atom([&](const StateAtom& a) {
          if (a.state >= num_states_) throw Error("atom references undeclared state");
          if (a.move.is_child() && static_cast<unsigned>(a.move.child_index()) > alphabet_[s].arity)
            throw ArityError("child index beyond arity of '" + alphabet_[s].name + "'");
        });
  }

  const RankedAlphabet& alphabet() const { return alphabet_; }
  std::size_t num_states() const { return num_states_; }
  StateId initial() const { return initial_; }
  bool is_final(StateId q) const { return final_[q]; }
  const std::vector<bool>& final_states() const { return final_; }
  const PosBool& delta(StateId q, SymbolId s) const { return delta_[q * alphabet_.size() + s]; }

  std::string state_name(StateId q) const { return names_.empty() ? "q" + std::to_string(q) : names_[q]; }

  /// Same alphabet, states, transitions and final states; names and the
  /// initial state are ignored.
  bool same_transitions(const Twata& o) const {
    return alphabet_ == o.alphabet_ && num_states_ == o.num_states_ && final_ == o.final_ && delta_ == o.delta_;
  }

  Twata with_initial(StateId q) const {
    Twata copy = *this;
    if (q >= num_states_) throw Error("initial state out of range");
    copy.initial_ = q;
    return copy;
  }

  /// States occurring in some Up atom.
  std::vector<bool> up_states() const {
    std::vector<bool> up(num_states_, false);
    for (const auto& f : delta_)
      f.for_each_atom([&](const StateAtom& a) {
        if (a.move.is_up()) up[a.state] = true;
      });
    return up;
  }

  std::string atom_string(const StateAtom& a) const { return "(" + state_name(a.state) + "," + a.move.to_string() + ")"; }

  /// One line per (state, symbol): `state symbol := formula`.
  std::string dump() const {
    std::string out;
    for (StateId q = 0; q < num_states_; ++q)
      for (SymbolId s = 0; s < alphabet_.size(); ++s) {
        out += state_name(q) + " " + alphabet_[s].name + " := ";
        out += delta(q, s).to_string([&](const StateAtom& a) { return atom_string(a); });
        out += '\n';
      }
    return out;
  }

 private:
  RankedAlphabet alphabet_;
  std::size_t num_states_;
  StateId initial_;
  std::vector<PosBool> delta_;
  std::vector<bool> final_;
  std::vector<std::string> names_;
};

namespace detail {

struct TreeIndex {
  std::vector<SymbolId> symbol;
  std::vector<std::int64_t> parent;          // -1 at the root
  std::vector<std::vector<std::size_t>> kids;

  TreeIndex(const Term& t, const RankedAlphabet& alphabet) { add(t, -1, alphabet); }

  std::size_t add(const Term& t, std::int64_t par, const RankedAlphabet& alphabet) {
    auto id = alphabet.find(t.name());
    if (!id || alphabet[*id].arity != t.arity())
      throw UnknownSymbolError("symbol '" + t.name() + "' is not in the automaton alphabet");
    std::size_t v = symbol.size();
    symbol.push_back(*id);
    parent.push_back(par);
    kids.emplace_back();
    for (std::size_t i = 0; i < t.arity(); ++i) {
      std::size_t c = add(t.child(i), static_cast<std::int64_t>(v), alphabet);
      kids[v].push_back(c);
    }
    return v;
  }

  // Target node of a move, or -1 if it does not exist.
  std::int64_t target(std::size_t v, Move m) const {
    if (m.is_stay()) return static_cast<std::int64_t>(v);
    if (m.is_up()) return parent[v];
    auto i = static_cast<std::size_t>(m.child_index());
    return i <= kids[v].size() ? static_cast<std::int64_t>(kids[v][i - 1]) : -1;
  }
};

}  // namespace detail

/// Acceptance game on a fixed term: the least set of winning (node, state)
/// positions, computed by a worklist over reverse dependencies.
inline bool accepts(const Twata& a, const Term& t) {
  detail::TreeIndex tree(t, a.alphabet());
  const std::size_t nq = a.num_states();
  auto key = [nq](std::size_t v, StateId q) { return v * nq + q; };

  // Positions reachable from (root, initial) through any atom.
  std::unordered_map<std::size_t, std::size_t> slot;  // position key -> dense index
  std::vector<std::pair<std::size_t, StateId>> pos;
  auto visit = [&](std::size_t v, StateId q) {
    auto [it, fresh] = slot.emplace(key(v, q), pos.size());
    if (fresh) pos.emplace_back(v, q);
    return it->second;
  };
  visit(0, a.initial());
  std::vector<std::vector<std::size_t>> dependents;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    auto [v, q] = pos[i];
    if (a.is_final(q)) continue;
    a.delta(q, tree.symbol[v]).for_each_atom([&](const StateAtom& at) {
      auto w = tree.target(v, at.move);
      if (w < 0) return;
      std::size_t j = visit(static_cast<std::size_t>(w), at.state);
      if (dependents.size() <= j) dependents.resize(j + 1);
      dependents[j].push_back(i);
    });
  }
  dependents.resize(pos.size());

  std::vector<char> win(pos.size(), 0);
  auto holds = [&](std::size_t v, const StateAtom& at) {
    auto w = tree.target(v, at.move);
    if (w < 0) return false;
    auto it = slot.find(key(static_cast<std::size_t>(w), at.state));
    return it != slot.end() && win[it->second];
  };
  std::vector<std::size_t> work;
  for (std::size_t i = 0; i < pos.size(); ++i) work.push_back(i);
  while (!work.empty()) {
    std::size_t i = work.back();
    work.pop_back();
    if (win[i]) continue;
    auto [v, q] = pos[i];
    bool w = a.is_final(q) || a.delta(q, tree.symbol[v]).evaluate([&](const StateAtom& at) { return holds(v, at); });
    if (!w) continue;
    win[i] = 1;
    for (std::size_t d : dependents[i])
      if (!win[d]) work.push_back(d);
  }
  return win[slot.at(key(0, a.initial()))] != 0;
}

}  // namespace facet
