#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "facet/errors.hpp"
#include "facet/grammar.hpp"
#include "facet/term.hpp"
#include "facet/twata.hpp"

namespace facet {

struct NftaRule {
  SymbolId symbol = 0;
  std::vector<StateId> children;
  StateId result = 0;

  friend bool operator==(const NftaRule&, const NftaRule&) = default;
  friend auto operator<=>(const NftaRule&, const NftaRule&) = default;
};

/// Bottom-up nondeterministic finite tree automaton.
class Nfta {
 public:
  Nfta(RankedAlphabet alphabet, std::size_t num_states, std::vector<NftaRule> rules, std::vector<bool> final,
       std::vector<std::string> names = {})
      : alphabet_(std::move(alphabet)),
        num_states_(num_states),
        rules_(std::move(rules)),
        final_(std::move(final)),
        names_(std::move(names)) {
    if (final_.size() != num_states_) throw Error("final-state vector has wrong length");
    if (!names_.empty() && names_.size() != num_states_) throw Error("state-name vector has wrong length");
    std::sort(rules_.begin(), rules_.end());
    rules_.erase(std::unique(rules_.begin(), rules_.end()), rules_.end());
    by_symbol_.assign(alphabet_.size(), {});
    for (std::size_t i = 0; i < rules_.size(); ++i) {
      const auto& r = rules_[i];
      if (r.symbol >= alphabet_.size()) throw Error("rule symbol out of range");
      if (r.children.size() != alphabet_[r.symbol].arity) throw ArityError("rule arity mismatch");
      if (r.result >= num_states_) throw Error("rule result out of range");
      for (StateId c : r.children)
        if (c >= num_states_) throw Error("rule child out of range");
      by_symbol_[r.symbol].push_back(i);
    }
  }

  /// One state accepting every term.
  static Nfta universal(const RankedAlphabet& alphabet) {
    std::vector<NftaRule> rules;
    for (SymbolId s = 0; s < alphabet.size(); ++s)
      rules.push_back({s, std::vector<StateId>(alphabet[s].arity, 0), 0});
    return Nfta(alphabet, 1, std::move(rules), {true}, {"any"});
  }

  const RankedAlphabet& alphabet() const { return alphabet_; }
  std::size_t num_states() const { return num_states_; }
  const std::vector<NftaRule>& rules() const { return rules_; }
  const std::vector<std::size_t>& rules_for(SymbolId s) const { return by_symbol_[s]; }
  bool is_final(StateId q) const { return final_[q]; }
  std::string state_name(StateId q) const { return names_.empty() ? "q" + std::to_string(q) : names_[q]; }

  /// States reachable at the root of t (sorted).
  std::vector<StateId> run(const Term& t) const {
    auto id = alphabet_.find(t.name());
    if (!id || alphabet_[*id].arity != t.arity())
      throw UnknownSymbolError("symbol '" + t.name() + "' is not in the automaton alphabet");
    std::vector<std::vector<StateId>> kids;
    for (std::size_t i = 0; i < t.arity(); ++i) kids.push_back(run(t.child(i)));
    std::vector<StateId> out;
    for (std::size_t ri : by_symbol_[*id]) {
      const auto& r = rules_[ri];
      bool ok = true;
      for (std::size_t i = 0; i < r.children.size() && ok; ++i)
        ok = std::binary_search(kids[i].begin(), kids[i].end(), r.children[i]);
      if (ok) out.push_back(r.result);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  bool accepts(const Term& t) const {
    auto states = run(t);
    return std::any_of(states.begin(), states.end(), [&](StateId q) { return final_[q]; });
  }

  /// One line per rule: `symbol(children) -> state`, then the final states.
  std::string dump() const {
    std::string out;
    for (const auto& r : rules_) {
      out += alphabet_[r.symbol].name;
      if (!r.children.empty()) {
        out += '(';
        for (std::size_t i = 0; i < r.children.size(); ++i) {
          if (i) out += ',';
          out += state_name(r.children[i]);
        }
        out += ')';
      }
      out += " -> " + state_name(r.result) + "\n";
    }
    out += "final:";
    for (StateId q = 0; q < num_states_; ++q)
      if (final_[q]) out += " " + state_name(q);
    return out + "\n";
  }

 private:
  RankedAlphabet alphabet_;
  std::size_t num_states_;
  std::vector<NftaRule> rules_;
  std::vector<bool> final_;
  std::vector<std::string> names_;
  std::vector<std::vector<std::size_t>> by_symbol_;
};

/// States: the nonterminals, then one fresh state per internal position of a
/// right-hand side. Unit productions are folded in by closure.
inline Nfta grammar_to_nfta(const RegularTreeGrammar& g) {
  const std::size_t nts = g.nonterminals().size();
  std::vector<std::string> names = g.nonterminals();
  std::vector<NftaRule> rules;
  std::vector<std::pair<std::size_t, std::size_t>> units;  // (A, B) for A -> B

  auto state_of = [&](auto&& self, const Pattern& p) -> StateId {
    if (p.is_hole()) return static_cast<StateId>(*p.nonterminal);
    StateId fresh = static_cast<StateId>(names.size());
    names.push_back("_" + std::to_string(fresh));
    NftaRule r{p.symbol, {}, fresh};
    for (const auto& c : p.children) r.children.push_back(self(self, c));
    rules.push_back(std::move(r));
    return fresh;
  };

  for (const auto& prod : g.productions()) {
    if (prod.rhs.is_hole()) {
      units.emplace_back(prod.lhs, *prod.rhs.nonterminal);
      continue;
    }
    NftaRule r{prod.rhs.symbol, {}, static_cast<StateId>(prod.lhs)};
    for (const auto& c : prod.rhs.children) r.children.push_back(state_of(state_of, c));
    rules.push_back(std::move(r));
  }

  // derives[b] = nonterminals A with A ->* B through unit productions.
  std::vector<std::set<std::size_t>> derives(nts);
  for (std::size_t b = 0; b < nts; ++b) derives[b].insert(b);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t b = 0; b < nts; ++b)
      for (auto [a, bb] : units)
        if (derives[b].count(bb) && derives[b].insert(a).second) changed = true;
  }
  std::vector<NftaRule> closed;
  for (const auto& r : rules) {
    closed.push_back(r);
    if (r.result < nts)
      for (std::size_t a : derives[r.result])
        if (a != r.result) closed.push_back({r.symbol, r.children, static_cast<StateId>(a)});
  }
  const std::size_t n = names.size();
  std::vector<bool> final(n, false);
  final[g.start()] = true;
  return Nfta(g.alphabet(), n, std::move(closed), std::move(final), std::move(names));
}

/// Intersection over reachable state pairs.
inline Nfta product(const Nfta& a, const Nfta& b) {
  if (!(a.alphabet() == b.alphabet())) throw AlphabetMismatch("product of automata over different alphabets");
  std::map<std::pair<StateId, StateId>, StateId> index;
  std::vector<std::pair<StateId, StateId>> pairs;
  std::set<NftaRule> rules;
  bool changed = true;
  while (changed) {
    changed = false;
    for (SymbolId s = 0; s < a.alphabet().size(); ++s)
      for (std::size_t ra : a.rules_for(s))
        for (std::size_t rb : b.rules_for(s)) {
          const auto& x = a.rules()[ra];
          const auto& y = b.rules()[rb];
          NftaRule r{s, {}, 0};
          bool ok = true;
          for (std::size_t i = 0; i < x.children.size() && ok; ++i) {
            auto it = index.find({x.children[i], y.children[i]});
            if (it == index.end())
              ok = false;
            else
              r.children.push_back(it->second);
          }
          if (!ok) continue;
          auto key = std::make_pair(x.result, y.result);
          auto [it, fresh] = index.emplace(key, static_cast<StateId>(pairs.size()));
          if (fresh) {
            pairs.push_back(key);
            changed = true;
          }
          r.result = it->second;
          if (rules.insert(r).second) changed = true;
        }
  }
  std::vector<bool> final;
  std::vector<std::string> names;
  for (auto [p, q] : pairs) {
    final.push_back(a.is_final(p) && b.is_final(q));
    names.push_back("(" + a.state_name(p) + "," + b.state_name(q) + ")");
  }
  const std::size_t n = pairs.size();
  return Nfta(a.alphabet(), n, std::vector<NftaRule>(rules.begin(), rules.end()), std::move(final), std::move(names));
}

}  // namespace facet
