#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "facet/evaluator.hpp"
#include "facet/lang/common.hpp"

namespace facet::lang {

/// Pointed Kripke structure.
struct Kripke {
  std::vector<std::string> worlds;
  std::size_t start = 0;
  std::vector<std::vector<std::size_t>> successors;  // sorted
  std::vector<std::set<std::string>> labels;

  std::size_t size() const { return worlds.size(); }
  bool holds(std::size_t w, const std::string& prop) const { return labels[w].count(prop) > 0; }
};

/// `{"worlds":[...],"start":w,"edges":[[w,w'],...],"labels":{w:[props]}}`
inline Kripke parse_kripke(const json& j) {
  Kripke k;
  k.worlds = string_list(require(j, "worlds"), "worlds");
  if (k.worlds.empty()) throw StructureError("a Kripke structure needs at least one world");
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < k.worlds.size(); ++i)
    if (!index.emplace(k.worlds[i], i).second) throw StructureError("duplicate world '" + k.worlds[i] + "'");
  auto world = [&](const json& x) {
    auto it = index.find(json_name(x));
    if (it == index.end()) throw StructureError("unknown world " + x.dump());
    return it->second;
  };
  k.start = world(require(j, "start"));
  k.successors.assign(k.worlds.size(), {});
  k.labels.assign(k.worlds.size(), {});
  if (j.contains("edges")) {
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw StructureError("edge must be a pair, got " + e.dump());
      k.successors[world(e[0])].push_back(world(e[1]));
    }
  }
  for (auto& s : k.successors) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
  if (j.contains("labels")) {
    const json& labels = j.at("labels");
    if (!labels.is_object()) throw StructureError("labels must be an object");
    for (auto it = labels.begin(); it != labels.end(); ++it) {
      auto w = index.find(it.key());
      if (w == index.end()) throw StructureError("labels for unknown world '" + it.key() + "'");
      for (const auto& p : string_list(it.value(), "label list")) k.labels[w->second].insert(p);
    }
  }
  return k;
}

inline json kripke_to_json(const Kripke& k) {
  json j;
  j["worlds"] = k.worlds;
  j["start"] = k.worlds[k.start];
  j["edges"] = json::array();
  for (std::size_t w = 0; w < k.size(); ++w)
    for (auto z : k.successors[w]) j["edges"].push_back({k.worlds[w], k.worlds[z]});
  j["labels"] = json::object();
  for (std::size_t w = 0; w < k.size(); ++w)
    j["labels"][k.worlds[w]] = std::vector<std::string>(k.labels[w].begin(), k.labels[w].end());
  return j;
}

/// Propositions mentioned in the labels, sorted.
inline std::vector<std::string> kripke_propositions(const Kripke& k) {
  std::set<std::string> props;
  for (const auto& l : k.labels) props.insert(l.begin(), l.end());
  return {props.begin(), props.end()};
}

/// Modal logic: and, or, not, box, dia and one leaf per proposition.
/// Aspects are worlds.
class ModalEvaluator {
 public:
  using Structure = Kripke;
  using Payload = std::size_t;

  explicit ModalEvaluator(std::vector<std::string> propositions) : props_(std::move(propositions)) {
    std::vector<Symbol> syms{{"and", 2}, {"or", 2}, {"not", 1}, {"box", 1}, {"dia", 1}};
    for (const auto& p : props_) syms.push_back({p, 0});
    alphabet_ = RankedAlphabet(std::move(syms));
  }

  const RankedAlphabet& alphabet() const { return alphabet_; }
  const std::vector<std::string>& propositions() const { return props_; }

  std::vector<Payload> aspects(const Structure& m) const {
    std::vector<Payload> out;
    for (std::size_t w = 0; w < m.size(); ++w) out.push_back(w);
    return out;
  }

  Aspect<Payload> initial(const Structure& m, Label label) const {
    return label == Label::Positive ? plain(m.start) : dual(m.start);
  }

  Transition<Payload> transition(const Structure& m, const Payload& w, SymbolId s) const {
    using B = Builder<Payload>;
    switch (s) {
      case 0: return B::child(w, 1) && B::child(w, 2);
      case 1: return B::child(w, 1) || B::child(w, 2);
      case 2: return B::call(dual(w), Move::child(1));
      case 3: return B::all(m.successors[w], [](std::size_t z) { return B::child(z, 1); });
      case 4: return B::any(m.successors[w], [](std::size_t z) { return B::child(z, 1); });
      default: return B::constant(m.holds(w, props_[s - 5]));
    }
  }

  std::string describe(const Structure& m, const Payload& w) const { return m.worlds[w]; }

  /// Direct recursive semantics, memoized per (subterm, world).
  bool reference(const Structure& m, const Term& t) const {
    Memo memo;
    return holds(m, t, m.start, memo);
  }

 private:
  struct KeyHash {
    std::size_t operator()(const std::pair<const void*, std::size_t>& k) const noexcept {
      return std::hash<const void*>{}(k.first) * 31 + k.second;
    }
  };
  using Memo = std::unordered_map<std::pair<const void*, std::size_t>, bool, KeyHash>;

  bool holds(const Structure& m, const Term& t, std::size_t w, Memo& memo) const {
    auto key = std::make_pair(t.id(), w);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const std::string& op = t.name();
    bool r;
    if (op == "and") r = holds(m, t.child(0), w, memo) && holds(m, t.child(1), w, memo);
    else if (op == "or") r = holds(m, t.child(0), w, memo) || holds(m, t.child(1), w, memo);
    else if (op == "not") r = !holds(m, t.child(0), w, memo);
    else if (op == "box") r = std::all_of(m.successors[w].begin(), m.successors[w].end(), [&](std::size_t z) { return holds(m, t.child(0), z, memo); });
    else if (op == "dia") r = std::any_of(m.successors[w].begin(), m.successors[w].end(), [&](std::size_t z) { return holds(m, t.child(0), z, memo); });
    else if (t.arity() == 0 && alphabet_.find(op)) r = m.holds(w, op);
    else throw UnknownSymbolError("not a modal formula symbol: '" + op + "'");
    memo[key] = r;
    return r;
  }

  std::vector<std::string> props_;
  RankedAlphabet alphabet_;
};

}  // namespace facet::lang
