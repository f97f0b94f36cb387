#pragma once

// Runtime selection of a built-in language: parameter inference, structure
// parsing and problem-file loading.

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "facet/grammar.hpp"
#include "facet/learn.hpp"
#include "facet/lang/cfg.hpp"
#include "facet/lang/common.hpp"
#include "facet/lang/ctl.hpp"
#include "facet/lang/fo.hpp"
#include "facet/lang/ltl.hpp"
#include "facet/lang/modal.hpp"
#include "facet/lang/ratfo.hpp"
#include "facet/lang/regex.hpp"

namespace facet::lang {

/// Per-language glue. `make` builds the evaluator from `params`, filling in
/// what is absent from the given structures.
template <class E>
struct Traits;

namespace detail {

inline std::vector<std::string> optional_list(const json& params, const char* key, std::vector<std::string> fallback) {
  if (params.is_object() && params.contains(key)) return string_list(params.at(key), key);
  return fallback;
}

inline std::vector<std::string> sorted_letters(const std::set<char>& cs) {
  std::vector<std::string> out;
  for (char c : cs) out.emplace_back(1, c);
  return out;
}

inline std::size_t require_k(const json& params, std::size_t fallback) {
  if (params.is_object() && params.contains("k")) {
    const json& k = params.at("k");
    if (!k.is_number_integer() || k.get<long long>() < 1) throw StructureError("params.k must be a positive integer");
    return static_cast<std::size_t>(k.get<long long>());
  }
  if (fallback == 0) throw StructureError("missing field 'params.k'");
  return fallback;
}

}  // namespace detail

template <>
struct Traits<ModalEvaluator> {
  static constexpr const char* name = "modal";
  static Kripke parse(const json& j) { return parse_kripke(j); }
  static ModalEvaluator make(const json& params, const std::vector<Kripke>& ms) {
    std::set<std::string> props;
    for (const auto& m : ms)
      for (const auto& p : kripke_propositions(m)) props.insert(p);
    return ModalEvaluator(detail::optional_list(params, "propositions", {props.begin(), props.end()}));
  }
  static json params(const ModalEvaluator& ev) { return {{"propositions", ev.propositions()}}; }
  static std::vector<Nfta> filters(const ModalEvaluator&) { return {}; }
};

template <>
struct Traits<CtlEvaluator> {
  static constexpr const char* name = "ctl";
  static Kripke parse(const json& j) { return parse_kripke(j); }
  static CtlEvaluator make(const json& params, const std::vector<Kripke>& ms) {
    std::set<std::string> props;
    for (const auto& m : ms)
      for (const auto& p : kripke_propositions(m)) props.insert(p);
    return CtlEvaluator(detail::optional_list(params, "propositions", {props.begin(), props.end()}));
  }
  static json params(const CtlEvaluator& ev) { return {{"propositions", ev.propositions()}}; }
  static std::vector<Nfta> filters(const CtlEvaluator&) { return {}; }
};

template <>
struct Traits<RegexEvaluator> {
  static constexpr const char* name = "regex";
  static Word parse(const json& j) { return parse_word(j); }
  static RegexEvaluator make(const json& params, const std::vector<Word>& ws) {
    std::set<char> cs;
    for (const auto& w : ws) cs.insert(w.letters.begin(), w.letters.end());
    return RegexEvaluator(detail::optional_list(params, "letters", detail::sorted_letters(cs)));
  }
  static json params(const RegexEvaluator& ev) { return {{"letters", ev.letters()}}; }
  static std::vector<Nfta> filters(const RegexEvaluator&) { return {}; }
};

template <>
struct Traits<LtlEvaluator> {
  static constexpr const char* name = "ltl";
  static Lasso parse(const json& j) { return parse_lasso(j); }
  static LtlEvaluator make(const json& params, const std::vector<Lasso>& ls) {
    std::set<char> cs;
    for (const auto& l : ls) {
      cs.insert(l.u.begin(), l.u.end());
      cs.insert(l.v.begin(), l.v.end());
    }
    return LtlEvaluator(detail::optional_list(params, "letters", detail::sorted_letters(cs)));
  }
  static json params(const LtlEvaluator& ev) { return {{"letters", ev.letters()}}; }
  static std::vector<Nfta> filters(const LtlEvaluator&) { return {}; }
};

template <>
struct Traits<CfgEvaluator> {
  static constexpr const char* name = "cfg";
  static Word parse(const json& j) { return parse_word(j); }
  static CfgEvaluator make(const json& params, const std::vector<Word>& ws) {
    std::set<char> cs;
    for (const auto& w : ws) cs.insert(w.letters.begin(), w.letters.end());
    return CfgEvaluator(detail::optional_list(params, "nonterminals", {"S"}),
                        detail::optional_list(params, "terminals", detail::sorted_letters(cs)));
  }
  static json params(const CfgEvaluator& ev) {
    return {{"nonterminals", ev.nonterminals()}, {"terminals", ev.terminals()}};
  }
  static std::vector<Nfta> filters(const CfgEvaluator& ev) { return {productive_checker(ev)}; }
};

template <>
struct Traits<RatfoEvaluator> {
  static constexpr const char* name = "ratfo";
  static RatTuple parse(const json& j) { return parse_rat_tuple(j); }
  static RatfoEvaluator make(const json& params, const std::vector<RatTuple>& ts) {
    return RatfoEvaluator(detail::require_k(params, ts.empty() ? 0 : ts.front().values.size()));
  }
  static json params(const RatfoEvaluator& ev) { return {{"k", ev.k()}}; }
  static std::vector<Nfta> filters(const RatfoEvaluator&) { return {}; }
};

template <>
struct Traits<FoEvaluator> {
  static constexpr const char* name = "fo";
  static RelStructure parse(const json& j) { return parse_rel_structure(j); }
  static FoEvaluator make(const json& params, const std::vector<RelStructure>& ms) {
    Signature sig;
    if (params.is_object() && params.contains("signature")) {
      const json& s = params.at("signature");
      if (!s.is_object()) throw StructureError("params.signature must map relation names to arities");
      for (auto it = s.begin(); it != s.end(); ++it) {
        if (!it.value().is_number_integer() || it.value().get<long long>() < 0)
          throw StructureError("arity of '" + it.key() + "' must be a non-negative integer");
        sig[it.key()] = static_cast<std::size_t>(it.value().get<long long>());
      }
    } else {
      for (const auto& m : ms)
        for (const auto& [name, arity] : signature_of(m)) {
          auto [it, fresh] = sig.emplace(name, arity);
          if (!fresh && it->second != arity) throw StructureError("relation '" + name + "' used with two arities");
        }
    }
    return FoEvaluator(std::move(sig), detail::require_k(params, 2));
  }
  static json params(const FoEvaluator& ev) { return {{"k", ev.k()}, {"signature", ev.signature()}}; }
  static std::vector<Nfta> filters(const FoEvaluator&) { return {}; }
};

inline const std::vector<std::string>& language_names() {
  static const std::vector<std::string> names{"modal", "ctl", "regex", "ltl", "cfg", "ratfo", "fo"};
  return names;
}

/// Calls f with a value-initialized tag `E*` for the named language.
template <class F>
decltype(auto) dispatch(const std::string& language, F&& f) {
  if (language == "modal") return f(static_cast<ModalEvaluator*>(nullptr));
  if (language == "ctl") return f(static_cast<CtlEvaluator*>(nullptr));
  if (language == "regex") return f(static_cast<RegexEvaluator*>(nullptr));
  if (language == "ltl") return f(static_cast<LtlEvaluator*>(nullptr));
  if (language == "cfg") return f(static_cast<CfgEvaluator*>(nullptr));
  if (language == "ratfo") return f(static_cast<RatfoEvaluator*>(nullptr));
  if (language == "fo") return f(static_cast<FoEvaluator*>(nullptr));
  throw StructureError("unknown language '" + language + "' (expected modal, ctl, regex, ltl, cfg, ratfo or fo)");
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_json_text(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw StructureError(where + ": " + e.what());
  }
}

/// Raw problem file: structures stay JSON until the language is known.
struct ProblemFile {
  std::string language;
  json params;
  std::vector<json> positives;
  std::vector<json> negatives;
  std::string grammar_text;
};

/// Reads `{"language","params","positives","negatives","grammar"}`. The
/// grammar is inline text if it contains "->", else a path relative to the
/// problem file.
inline ProblemFile load_problem_file(const std::filesystem::path& path) {
  json j = parse_json_text(read_file(path), path.string());
  if (!j.is_object()) throw StructureError(path.string() + ": problem must be a JSON object");
  ProblemFile pf;
  pf.language = require_string(j, "language");
  pf.params = j.contains("params") ? j.at("params") : json::object();
  for (const char* key : {"positives", "negatives"}) {
    if (!j.contains(key)) continue;
    const json& xs = j.at(key);
    if (!xs.is_array()) throw StructureError(std::string(key) + " must be an array");
    for (const auto& x : xs) (std::string(key) == "positives" ? pf.positives : pf.negatives).push_back(x);
  }
  std::string g = require_string(j, "grammar");
  if (g.find("->") != std::string::npos)
    pf.grammar_text = g;
  else
    pf.grammar_text = read_file(path.parent_path() / g);
  return pf;
}

/// Typed problem for language E.
template <class E>
Problem<E> build_problem(const ProblemFile& pf) {
  using T = Traits<E>;
  std::vector<typename E::Structure> pos, neg, all;
  for (std::size_t i = 0; i < pf.positives.size(); ++i) {
    try {
      pos.push_back(T::parse(pf.positives[i]));
    } catch (const StructureError& e) {
      throw StructureError("positives[" + std::to_string(i) + "]: " + e.what());
    }
  }
  for (std::size_t i = 0; i < pf.negatives.size(); ++i) {
    try {
      neg.push_back(T::parse(pf.negatives[i]));
    } catch (const StructureError& e) {
      throw StructureError("negatives[" + std::to_string(i) + "]: " + e.what());
    }
  }
  all = pos;
  all.insert(all.end(), neg.begin(), neg.end());
  E ev = T::make(pf.params, all);
  RegularTreeGrammar g = parse_grammar(pf.grammar_text, ev.alphabet());
  std::vector<Nfta> filters = T::filters(ev);
  return Problem<E>{std::move(ev), std::move(pos), std::move(neg), std::move(g), std::move(filters)};
}

}  // namespace facet::lang
