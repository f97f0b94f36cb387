#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "facet/evaluator.hpp"
#include "facet/lang/common.hpp"

namespace facet::lang {

/// Relation name to arity.
using Signature = std::map<std::string, std::size_t>;

/// Finite relational structure.
struct RelStructure {
  std::vector<std::string> universe;
  std::map<std::string, std::set<std::vector<std::size_t>>> relations;

  std::size_t size() const { return universe.size(); }
};

/// `{"universe":[...],"relations":{"E":[[a,b],...]}}`
inline RelStructure parse_rel_structure(const json& j) {
  RelStructure m;
  m.universe = string_list(require(j, "universe"), "universe");
  if (m.universe.empty()) throw StructureError("universe must be nonempty");
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < m.universe.size(); ++i)
    if (!index.emplace(m.universe[i], i).second) throw StructureError("duplicate element '" + m.universe[i] + "'");
  if (j.contains("relations")) {
    const json& rels = j.at("relations");
    if (!rels.is_object()) throw StructureError("relations must be an object");
    for (auto it = rels.begin(); it != rels.end(); ++it) {
      if (!is_valid_name(it.key())) throw StructureError("bad relation name '" + it.key() + "'");
      auto& tuples = m.relations[it.key()];
      if (!it.value().is_array()) throw StructureError("relation '" + it.key() + "' must be an array of tuples");
      std::optional<std::size_t> arity;
      for (const auto& tup : it.value()) {
        if (!tup.is_array()) throw StructureError("relation tuple must be an array, got " + tup.dump());
        if (arity && *arity != tup.size()) throw StructureError("relation '" + it.key() + "' has tuples of mixed arity");
        arity = tup.size();
        std::vector<std::size_t> row;
        for (const auto& e : tup) {
          auto f = index.find(json_name(e));
          if (f == index.end()) throw StructureError("unknown element " + e.dump());
          row.push_back(f->second);
        }
        tuples.insert(std::move(row));
      }
    }
  }
  return m;
}

/// Arities of the relations that have at least one tuple.
inline Signature signature_of(const RelStructure& m) {
  Signature sig;
  for (const auto& [name, tuples] : m.relations)
    if (!tuples.empty()) sig[name] = tuples.begin()->size();
  return sig;
}

/// Variable assignment; -1 marks an unassigned variable.
using Assignment = std::vector<int>;

/// First-order logic with k variables over finite structures: forall_v,
/// exists_v, and, or, not, and an atom R_v1_..._vr per relation and variable
/// tuple (just R for nullary relations). An atom reading an unassigned
/// variable is false. Aspects are partial assignments.
class FoEvaluator {
 public:
  using Structure = RelStructure;
  using Payload = Assignment;

  FoEvaluator(Signature signature, std::size_t k) : sig_(std::move(signature)), k_(k), vars_(variable_names(k)) {
    if (k == 0) throw Error("need at least one variable");
    std::vector<Symbol> syms;
    for (const auto& v : vars_) syms.push_back({"forall_" + v, 1});
    for (const auto& v : vars_) syms.push_back({"exists_" + v, 1});
    syms.push_back({"and", 2});
    syms.push_back({"or", 2});
    syms.push_back({"not", 1});
    for (const auto& [rel, arity] : sig_) {
      std::vector<std::size_t> tuple(arity, 0);
      for (;;) {
        std::string name = rel;
        for (auto v : tuple) name += "_" + vars_[v];
        syms.push_back({name, 0});
        atoms_.push_back({rel, tuple});
        std::size_t i = arity;
        while (i > 0 && tuple[i - 1] == k - 1) tuple[--i] = 0;
        if (i == 0) break;
        ++tuple[i - 1];
      }
    }
    alphabet_ = RankedAlphabet(std::move(syms));
  }

  const RankedAlphabet& alphabet() const { return alphabet_; }
  const Signature& signature() const { return sig_; }
  std::size_t k() const { return k_; }

  std::vector<Payload> aspects(const Structure& m) const {
    check(m);
    std::vector<Payload> out;
    Assignment g(k_, -1);
    const int top = static_cast<int>(m.size()) - 1;
    for (;;) {
      out.push_back(g);
      std::size_t i = k_;
      while (i > 0 && g[i - 1] == top) g[--i] = -1;
      if (i == 0) break;
      ++g[i - 1];
    }
    return out;
  }

  Aspect<Payload> initial(const Structure&, Label label) const {
    Assignment g(k_, -1);
    return label == Label::Positive ? plain(g) : dual(g);
  }

  Transition<Payload> transition(const Structure& m, const Payload& g, SymbolId s) const {
    using B = Builder<Payload>;
    auto updates = [&](std::size_t x) {
      std::vector<Assignment> out;
      for (int a = 0; a < static_cast<int>(m.size()); ++a) {
        Assignment h = g;
        h[x] = a;
        out.push_back(std::move(h));
      }
      return out;
    };
    auto below = [](const Assignment& h) { return B::child(h, 1); };
    if (s < k_) return B::all(updates(s), below);
    if (s < 2 * k_) return B::any(updates(s - k_), below);
    switch (s - 2 * k_) {
      case 0: return B::child(g, 1) && B::child(g, 2);
      case 1: return B::child(g, 1) || B::child(g, 2);
      case 2: return B::call(dual(g), Move::child(1));
      default: return B::constant(holds(m, atoms_[s - 2 * k_ - 3], g));
    }
  }

  std::string describe(const Structure& m, const Payload& g) const {
    std::string out = "{";
    bool first = true;
    for (std::size_t v = 0; v < k_; ++v)
      if (g[v] >= 0) {
        if (!first) out += ",";
        out += vars_[v] + "->" + m.universe[g[v]];
        first = false;
      }
    return out + "}";
  }

  /// Tarskian semantics by recursion over the formula with an explicit
  /// environment of element names.
  bool reference(const Structure& m, const Term& f) const {
    check(m);
    std::map<std::string, std::string> env;
    return eval(m, f, env);
  }

 private:
  struct AtomSym {
    std::string relation;
    std::vector<std::size_t> vars;
  };

  void check(const Structure& m) const {
    for (const auto& [name, tuples] : m.relations) {
      auto it = sig_.find(name);
      if (it == sig_.end()) {
        if (!tuples.empty()) throw StructureError("relation '" + name + "' is not in the signature");
        continue;
      }
      for (const auto& t : tuples)
        if (t.size() != it->second) throw StructureError("relation '" + name + "' has a tuple of the wrong arity");
    }
  }

  bool holds(const Structure& m, const AtomSym& at, const Assignment& g) const {
    std::vector<std::size_t> row;
    for (auto v : at.vars) {
      if (g[v] < 0) return false;
      row.push_back(static_cast<std::size_t>(g[v]));
    }
    auto it = m.relations.find(at.relation);
    return it != m.relations.end() && it->second.count(row) > 0;
  }

  bool eval(const Structure& m, const Term& f, std::map<std::string, std::string>& env) const {
    const std::string& op = f.name();
    auto quant = [&](const std::string& v, bool universal) {
      auto saved = env.find(v) == env.end() ? std::optional<std::string>() : std::optional<std::string>(env[v]);
      bool res = universal;
      for (const auto& e : m.universe) {
        env[v] = e;
        if (eval(m, f.child(0), env) != universal) {
          res = !universal;
          break;
        }
      }
      if (saved) env[v] = *saved;
      else env.erase(v);
      return res;
    };
    for (const auto& v : vars_) {
      if (op == "forall_" + v && f.arity() == 1) return quant(v, true);
      if (op == "exists_" + v && f.arity() == 1) return quant(v, false);
    }
    if (op == "and") return eval(m, f.child(0), env) && eval(m, f.child(1), env);
    if (op == "or") return eval(m, f.child(0), env) || eval(m, f.child(1), env);
    if (op == "not") return !eval(m, f.child(0), env);
    for (const auto& at : atoms_) {
      std::string name = at.relation;
      for (auto v : at.vars) name += "_" + vars_[v];
      if (name != op || f.arity() != 0) continue;
      std::vector<std::size_t> row;
      for (auto v : at.vars) {
        auto e = env.find(vars_[v]);
        if (e == env.end()) return false;
        row.push_back(static_cast<std::size_t>(std::find(m.universe.begin(), m.universe.end(), e->second) - m.universe.begin()));
      }
      auto it = m.relations.find(at.relation);
      return it != m.relations.end() && it->second.count(row) > 0;
    }
    throw UnknownSymbolError("not a first-order formula symbol: '" + op + "'");
  }

  Signature sig_;
  std::size_t k_;
  std::vector<std::string> vars_;
  std::vector<AtomSym> atoms_;
  RankedAlphabet alphabet_;
};

}  // namespace facet::lang
