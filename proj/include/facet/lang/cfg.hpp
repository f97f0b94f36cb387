#pragma once

// Context-free grammars as syntax trees. A grammar is a right spine
//   top_A(rhs, lhs_B(rhs, ... lhs_C(rhs, end)))
// with one production per spine node. A right-hand side is a tree of binary
// `cat` nodes over leaves rhs_A (nonterminal occurrence) and term_a
// (terminal). The start nonterminal is the first declared one.

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "facet/evaluator.hpp"
#include "facet/lang/common.hpp"
#include "facet/lang/regex.hpp"
#include "facet/nfta.hpp"

namespace facet::lang {

enum class CfgMode : std::uint8_t { Span, Find, Reset };

struct CfgPayload {
  Span span;
  CfgMode mode = CfgMode::Span;
  int nonterminal = 0;  // meaningful for Find and Reset

  friend bool operator==(const CfgPayload&, const CfgPayload&) = default;
  friend auto operator<=>(const CfgPayload&, const CfgPayload&) = default;
};

/// Decoded grammar: productions in spine order. Items index the declared
/// nonterminals or terminals.
struct CfgGrammar {
  struct Item {
    bool terminal = false;
    int index = 0;
    friend bool operator==(const Item&, const Item&) = default;
  };
  struct Production {
    int lhs = 0;
    std::vector<Item> rhs;
    friend bool operator==(const Production&, const Production&) = default;
  };
  std::vector<Production> productions;

  friend bool operator==(const CfgGrammar&, const CfgGrammar&) = default;
};

class CfgEvaluator {
 public:
  using Structure = Word;
  using Payload = CfgPayload;

  // Symbol layout: cat, end, then per nonterminal top/lhs/rhs, then per terminal term.
  CfgEvaluator(std::vector<std::string> nonterminals, std::vector<std::string> terminals)
      : nts_(std::move(nonterminals)), terms_(std::move(terminals)) {
    if (nts_.empty()) throw Error("a context-free grammar needs at least one nonterminal");
    check_letters(terms_);
    std::vector<Symbol> syms{{"cat", 2}, {"end", 0}};
    for (const auto& a : nts_) syms.push_back({"top_" + a, 2});
    for (const auto& a : nts_) syms.push_back({"lhs_" + a, 2});
    for (const auto& a : nts_) syms.push_back({"rhs_" + a, 0});
    for (const auto& a : terms_) syms.push_back({"term_" + a, 0});
    alphabet_ = RankedAlphabet(std::move(syms));
  }

  const RankedAlphabet& alphabet() const { return alphabet_; }
  const std::vector<std::string>& nonterminals() const { return nts_; }
  const std::vector<std::string>& terminals() const { return terms_; }

  SymbolId cat() const { return 0; }
  SymbolId end() const { return 1; }
  SymbolId top(int a) const { return static_cast<SymbolId>(2 + a); }
  SymbolId lhs(int a) const { return static_cast<SymbolId>(2 + nts_.size() + a); }
  SymbolId rhs(int a) const { return static_cast<SymbolId>(2 + 2 * nts_.size() + a); }
  SymbolId term(int a) const { return static_cast<SymbolId>(2 + 3 * nts_.size() + a); }

  std::vector<Payload> aspects(const Structure& w) const {
    std::vector<Payload> out;
    for (const auto& s : all_spans(w.size())) {
      out.push_back({s, CfgMode::Span, 0});
      for (int a = 0; a < static_cast<int>(nts_.size()); ++a) {
        out.push_back({s, CfgMode::Find, a});
        out.push_back({s, CfgMode::Reset, a});
      }
    }
    return out;
  }

  Aspect<Payload> initial(const Structure& w, Label label) const {
    Payload p{{1, static_cast<int>(w.size()) + 1}, CfgMode::Reset, 0};
    return label == Label::Positive ? plain(p) : dual(p);
  }

  Transition<Payload> transition(const Structure& w, const Payload& p, SymbolId s) const {
    using B = Builder<Payload>;
    const int l = p.span.l, r = p.span.r;
    auto span = [](Span x) { return Payload{x, CfgMode::Span, 0}; };
    auto find = [&](int a) { return Payload{p.span, CfgMode::Find, a}; };
    auto reset = [&](int a) { return Payload{p.span, CfgMode::Reset, a}; };
    const bool is_top = s >= top(0) && s < lhs(0);
    const bool is_lhs = s >= lhs(0) && s < rhs(0);
    switch (p.mode) {
      case CfgMode::Span:
        if (s == cat())
          return B::any(closed_range(l, r), [&](int x) { return B::child(span({l, x}), 1) && B::child(span({x, r}), 2); });
        if (s >= rhs(0) && s < term(0)) return B::up(reset(static_cast<int>(s - rhs(0))));
        if (s >= term(0)) return B::constant(r == l + 1 && std::string(1, w.at(l)) == terms_[s - term(0)]);
        return B::constant(false);
      case CfgMode::Reset:
        if (is_top) {
          auto rest = B::child(find(p.nonterminal), 2);
          if (static_cast<int>(s - top(0)) == p.nonterminal) return B::child(span(p.span), 1) || rest;
          return rest;
        }
        return B::up(p);
      case CfgMode::Find:
        if (is_lhs) {
          auto rest = B::child(p, 2);
          if (static_cast<int>(s - lhs(0)) == p.nonterminal) return B::child(span(p.span), 1) || rest;
          return rest;
        }
        return B::constant(false);
    }
    return B::constant(false);
  }

  std::string describe(const Structure&, const Payload& p) const {
    switch (p.mode) {
      case CfgMode::Span: return span_string(p.span);
      case CfgMode::Find: return "(" + span_string(p.span) + ",find(" + nts_[p.nonterminal] + "))";
      case CfgMode::Reset: return "(" + span_string(p.span) + ",reset(" + nts_[p.nonterminal] + "))";
    }
    return {};
  }

  /// Decodes a syntax tree. Throws StructureError if t is not an encoding.
  CfgGrammar decode(const Term& t) const {
    CfgGrammar g;
    auto nt_of = [&](const std::string& name, const std::string& prefix) -> int {
      if (name.rfind(prefix, 0) != 0) return -1;
      for (int a = 0; a < static_cast<int>(nts_.size()); ++a)
        if (name.size() == prefix.size() + nts_[a].size() && name.compare(prefix.size(), std::string::npos, nts_[a]) == 0)
          return a;
      return -1;
    };
    auto flatten = [&](auto&& self, const Term& x, std::vector<CfgGrammar::Item>& out) -> void {
      if (x.name() == "cat" && x.arity() == 2) {
        self(self, x.child(0), out);
        self(self, x.child(1), out);
        return;
      }
      if (x.arity() == 0) {
        if (int a = nt_of(x.name(), "rhs_"); a >= 0) {
          out.push_back({false, a});
          return;
        }
        for (int b = 0; b < static_cast<int>(terms_.size()); ++b)
          if (x.name() == "term_" + terms_[b]) {
            out.push_back({true, b});
            return;
          }
      }
      throw StructureError("not a right-hand side: " + to_string(x));
    };
    int a = nt_of(t.name(), "top_");
    if (a < 0 || t.arity() != 2) throw StructureError("grammar encoding must start with top_A");
    Term node = t;
    for (;;) {
      CfgGrammar::Production prod{a, {}};
      flatten(flatten, node.child(0), prod.rhs);
      g.productions.push_back(std::move(prod));
      node = node.child(1);
      if (node.name() == "end" && node.arity() == 0) break;
      a = nt_of(node.name(), "lhs_");
      if (a < 0 || node.arity() != 2) throw StructureError("malformed production spine at " + to_string(node));
    }
    return g;
  }

  /// Encodes productions along the spine; right-hand sides right-nested.
  Term encode(const CfgGrammar& g) const {
    if (g.productions.empty()) throw Error("cannot encode a grammar without productions");
    auto item = [&](const CfgGrammar::Item& it) {
      return Term::leaf(alphabet_[it.terminal ? term(it.index) : rhs(it.index)]);
    };
    auto body = [&](const std::vector<CfgGrammar::Item>& items) {
      if (items.empty()) throw Error("cannot encode an empty right-hand side");
      Term acc = item(items.back());
      for (std::size_t i = items.size() - 1; i-- > 0;) acc = Term::make(alphabet_[cat()], {item(items[i]), acc});
      return acc;
    };
    Term spine = Term::leaf(alphabet_[end()]);
    for (std::size_t i = g.productions.size(); i-- > 1;)
      spine = Term::make(alphabet_[lhs(g.productions[i].lhs)], {body(g.productions[i].rhs), spine});
    return Term::make(alphabet_[top(g.productions[0].lhs)], {body(g.productions[0].rhs), spine});
  }

  static bool productive(const CfgGrammar& g) {
    for (const auto& p : g.productions) {
      bool has_terminal = false;
      for (const auto& it : p.rhs) has_terminal = has_terminal || it.terminal;
      if (!has_terminal) return false;
    }
    return true;
  }

  /// `S -> a S b; S -> c`, productions in spine order.
  std::string grammar_string(const CfgGrammar& g) const {
    std::string out;
    for (const auto& p : g.productions) {
      if (!out.empty()) out += "; ";
      out += nts_[p.lhs] + " ->";
      for (const auto& it : p.rhs) out += " " + (it.terminal ? terms_[it.index] : nts_[it.index]);
    }
    return out;
  }

  /// Membership by memoized derivation over spans. Refuses non-encodings and
  /// non-productive grammars.
  bool reference(const Structure& w, const Term& t) const {
    CfgGrammar g = decode(t);
    if (!productive(g)) throw StructureError("grammar is not productive: every right-hand side needs a terminal");
    return derives(g, w, 0);
  }

  /// Membership of w in L(start) for a decoded productive grammar.
  bool derives(const CfgGrammar& g, const Word& w, int start) const {
    const int n = static_cast<int>(w.size());
    std::map<std::tuple<int, int, int>, bool> memo;
    // nt(a, l, r): A derives w[l, r); every derivation is nonempty.
    std::function<bool(int, int, int)> nt;
    std::function<bool(const std::vector<CfgGrammar::Item>&, std::size_t, int, int)> seq;
    nt = [&](int a, int l, int r) -> bool {
      if (r <= l) return false;
      auto key = std::make_tuple(a, l, r);
      if (auto it = memo.find(key); it != memo.end()) return it->second;
      bool res = false;
      for (const auto& p : g.productions)
        if (p.lhs == a && !res) res = seq(p.rhs, 0, l, r);
      memo[key] = res;
      return res;
    };
    seq = [&](const std::vector<CfgGrammar::Item>& items, std::size_t i, int l, int r) -> bool {
      const int rest = static_cast<int>(items.size() - i);
      if (rest == 0) return l == r;
      if (r - l < rest) return false;
      const auto& it = items[i];
      if (it.terminal) return w.at(l + 1) == terms_[it.index][0] && seq(items, i + 1, l + 1, r);
      // The remaining items take at least one letter each.
      for (int x = l + 1; x <= r - (rest - 1); ++x)
        if (nt(it.index, l, x) && seq(items, i + 1, x, r)) return true;
      return false;
    };
    return nt(start, 0, n);
  }

  /// Deterministic classifier of trees. Productive encodings end in ROOTok,
  /// non-productive encodings in ROOTbad, everything else elsewhere.
  Nfta classifier(bool accept_productive) const {
    enum : StateId { R0, R1, SPok, SPbad, ROOTok, ROOTbad, JUNK, N };
    const std::vector<std::string> names{"R0", "R1", "SPok", "SPbad", "ROOTok", "ROOTbad", "JUNK"};
    auto is_rhs = [](StateId q) { return q == R0 || q == R1; };
    auto is_spine = [](StateId q) { return q == SPok || q == SPbad; };
    std::vector<NftaRule> rules;
    const int k = static_cast<int>(nts_.size());
    for (int a = 0; a < k; ++a) rules.push_back({rhs(a), {}, R0});
    for (int b = 0; b < static_cast<int>(terms_.size()); ++b) rules.push_back({term(b), {}, R1});
    rules.push_back({end(), {}, SPok});
    for (StateId x = 0; x < N; ++x)
      for (StateId y = 0; y < N; ++y) {
        StateId c = JUNK;
        if (is_rhs(x) && is_rhs(y)) c = (x == R1 || y == R1) ? R1 : R0;
        rules.push_back({cat(), {x, y}, c});
        StateId spine = JUNK, root = JUNK;
        if (is_rhs(x) && is_spine(y)) {
          bool ok = x == R1 && y == SPok;
          spine = ok ? SPok : SPbad;
          root = ok ? ROOTok : ROOTbad;
        }
        for (int a = 0; a < k; ++a) {
          rules.push_back({lhs(a), {x, y}, spine});
          rules.push_back({top(a), {x, y}, root});
        }
      }
    std::vector<bool> final(N, false);
    final[accept_productive ? ROOTok : ROOTbad] = true;
    return Nfta(alphabet_, N, std::move(rules), std::move(final), names);
  }

 private:
  std::vector<std::string> nts_;
  std::vector<std::string> terms_;
  RankedAlphabet alphabet_;
};

/// Accepts exactly the encodings of productive grammars.
inline Nfta productive_checker(const CfgEvaluator& ev) { return ev.classifier(true); }

/// Accepts exactly the encodings of non-productive grammars.
inline Nfta nonproductive_checker(const CfgEvaluator& ev) { return ev.classifier(false); }

}  // namespace facet::lang
