#pragma once

#include <string>
#include <vector>

#include "facet/evaluator.hpp"
#include "facet/grammar.hpp"
#include "facet/languages.hpp"
#include "facet/summary.hpp"
#include "facet/twata.hpp"

namespace facet::testing {

inline std::string data_path(const std::string& rel) { return std::string(FACET_DATA_DIR) + "/" + rel; }

inline lang::json load_json(const std::string& rel) {
  return lang::parse_json_text(lang::read_file(data_path(rel)), rel);
}

template <class E>
std::vector<typename E::Structure> load_structures(const std::string& rel) {
  std::vector<typename E::Structure> out;
  const lang::json doc = load_json(rel);
  for (const auto& s : doc.at("structures")) out.push_back(lang::Traits<E>::parse(s));
  return out;
}

struct OracleReport {
  std::size_t structures = 0;
  std::size_t terms = 0;
  std::size_t checks = 0;
  std::size_t game_vs_reference = 0;  // disagreements
  std::size_t nfta_vs_game = 0;
  std::size_t dual_failures = 0;      // positive and negative automata agree
  std::string first_failure;

  bool ok() const { return game_vs_reference == 0 && nfta_vs_game == 0 && dual_failures == 0; }
};

/// Compares, per structure and term: the reference semantics, the game on
/// both polarity automata, and the converted bottom-up automata.
template <Evaluator E>
OracleReport check_oracle(const E& ev, const std::vector<typename E::Structure>& ms, const std::vector<Term>& terms) {
  OracleReport rep;
  rep.structures = ms.size();
  rep.terms = terms.size();
  for (std::size_t i = 0; i < ms.size(); ++i) {
    Twata pos = build_twata(ev, ms[i], Label::Positive);
    Twata neg = build_twata(ev, ms[i], Label::Negative);
    TwataNfta npos(pos), nneg(neg);
    for (const auto& t : terms) {
      ++rep.checks;
      const bool ref = ev.reference(ms[i], t);
      const bool gp = accepts(pos, t), gn = accepts(neg, t);
      const bool np = npos.accepts(t), nn = nneg.accepts(t);
      auto note = [&](const char* what) {
        if (rep.first_failure.empty())
          rep.first_failure = std::string(what) + " on structure #" + std::to_string(i) + ", term " + to_string(t) +
                              " (reference " + (ref ? "true" : "false") + ")";
      };
      if (gp != ref || gn != !ref) {
        ++rep.game_vs_reference;
        note("game/reference");
      }
      if (np != gp || nn != gn) {
        ++rep.nfta_vs_game;
        note("nfta/game");
      }
      if (gp == gn) {
        ++rep.dual_failures;
        note("dual");
      }
    }
  }
  return rep;
}

template <class Set>
std::vector<Term> as_vector(const Set& s) {
  return std::vector<Term>(s.begin(), s.end());
}

/// Encodings of grammars over the given nonterminals and terminals; the
/// start production is for the first nonterminal.
inline std::string cfg_encoding_grammar(const lang::CfgEvaluator& ev) {
  std::string g;
  for (const auto& a : ev.nonterminals()) g += "G -> top_" + a + "(R, P)\n";
  g += "P -> end\n";
  for (const auto& a : ev.nonterminals()) g += "P -> lhs_" + a + "(R, P)\n";
  g += "R -> cat(R, R)\n";
  for (const auto& a : ev.nonterminals()) g += "R -> rhs_" + a + "\n";
  for (const auto& a : ev.terminals()) g += "R -> term_" + a + "\n";
  return g;
}

}  // namespace facet::testing
