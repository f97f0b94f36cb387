#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "facet/errors.hpp"
#include "facet/term.hpp"

namespace facet {

/// Right-hand side of a production: a term whose leaves may be nonterminals.
struct Pattern {
  std::optional<std::size_t> nonterminal;  // set for a nonterminal leaf
  SymbolId symbol = 0;                     // otherwise
  std::vector<Pattern> children;

  static Pattern hole(std::size_t nt) { return Pattern{nt, 0, {}}; }
  static Pattern node(SymbolId s, std::vector<Pattern> children) {
    return Pattern{std::nullopt, s, std::move(children)};
  }
  bool is_hole() const { return nonterminal.has_value(); }

  friend bool operator==(const Pattern&, const Pattern&) = default;
};

struct Production {
  std::size_t lhs;
  Pattern rhs;

  friend bool operator==(const Production&, const Production&) = default;
};

class RegularTreeGrammar {
 public:
  RegularTreeGrammar(RankedAlphabet alphabet, std::vector<std::string> nonterminals, std::size_t start,
                     std::vector<Production> productions)
      : alphabet_(std::move(alphabet)),
        nonterminals_(std::move(nonterminals)),
        start_(start),
        productions_(std::move(productions)) {
    if (productions_.empty()) throw GrammarError("empty production set", 0);
    if (start_ >= nonterminals_.size()) throw Error("start nonterminal out of range");
    for (const auto& nt : nonterminals_) {
      if (!is_valid_name(nt)) throw Error("invalid nonterminal name '" + nt + "'");
      if (alphabet_.find(nt)) throw Error("nonterminal '" + nt + "' clashes with a symbol");
    }
    for (const auto& p : productions_) {
      if (p.lhs >= nonterminals_.size()) throw Error("production for undeclared nonterminal");
      check(p.rhs);
    }
  }

  const RankedAlphabet& alphabet() const { return alphabet_; }
  const std::vector<std::string>& nonterminals() const { return nonterminals_; }
  std::size_t start() const { return start_; }
  const std::vector<Production>& productions() const { return productions_; }

  std::string pattern_string(const Pattern& p) const {
    if (p.is_hole()) return nonterminals_[*p.nonterminal];
    std::string out = alphabet_[p.symbol].name;
    if (p.children.empty()) return out;
    out += '(';
    for (std::size_t i = 0; i < p.children.size(); ++i) {
      if (i) out += ',';
      out += pattern_string(p.children[i]);
    }
    return out + ')';
  }

  /// Serializes in the text format accepted by parse_grammar. Productions of
  /// the start nonterminal come first so the start symbol is preserved.
  std::string to_string() const {
    std::string out;
    auto emit = [&](const Production& p) {
      out += nonterminals_[p.lhs] + " -> " + pattern_string(p.rhs) + "\n";
    };
    for (const auto& p : productions_)
      if (p.lhs == start_) emit(p);
    for (const auto& p : productions_)
      if (p.lhs != start_) emit(p);
    return out;
  }

 private:
  void check(const Pattern& p) const {
    if (p.is_hole()) {
      if (*p.nonterminal >= nonterminals_.size()) throw Error("undeclared nonterminal in pattern");
      return;
    }
    if (p.symbol >= alphabet_.size()) throw Error("pattern symbol out of range");
    if (p.children.size() != alphabet_[p.symbol].arity)
      throw ArityError("arity violation for '" + alphabet_[p.symbol].name + "'");
    for (const auto& c : p.children) check(c);
  }

  RankedAlphabet alphabet_;
  std::vector<std::string> nonterminals_;
  std::size_t start_;
  std::vector<Production> productions_;
};

namespace detail {

struct GrammarLine {
  std::size_t line;
  std::size_t offset;  // byte offset of the right-hand side
  std::string lhs;
  std::string_view rhs;
};

inline Pattern parse_pattern(TextCursor& in, const RankedAlphabet& alphabet,
                             const std::unordered_map<std::string, std::size_t>& nts, std::size_t line) {
  in.skip_space();
  std::size_t start = in.offset();
  std::string name(in.name());
  bool has_args = in.peek('(');
  if (auto nt = nts.find(name); nt != nts.end()) {
    if (has_args) throw GrammarError("nonterminal '" + name + "' applied to arguments", line);
    return Pattern::hole(nt->second);
  }
  auto id = alphabet.find(name);
  if (!id) {
    if (has_args) throw GrammarError("unknown symbol '" + name + "'", line);
    throw GrammarError("undeclared nonterminal '" + name + "' (and not a symbol)", line);
  }
  std::vector<Pattern> children;
  if (in.accept('(')) {
    if (!in.peek(')')) {
      do children.push_back(parse_pattern(in, alphabet, nts, line));
      while (in.accept(','));
    }
    in.expect(')');
  }
  if (children.size() != alphabet[*id].arity)
    throw GrammarError("arity violation: '" + name + "' expects " + std::to_string(alphabet[*id].arity) +
                           " arguments, got " + std::to_string(children.size()) + " (byte " + std::to_string(start) + ")",
                       line);
  return Pattern::node(*id, std::move(children));
}

}  // namespace detail

/// Parses `A -> rhs` productions, one per line (`;` also separates, `|`
/// separates alternatives). `#` starts a comment. The first left-hand side is
/// the start nonterminal.
inline RegularTreeGrammar parse_grammar(std::string_view text, const RankedAlphabet& alphabet) {
  std::vector<detail::GrammarLine> lines;
  std::vector<std::string> nonterminals;
  std::unordered_map<std::string, std::size_t> nt_index;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = text.substr(pos, end - pos);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::size_t seg_start = 0;
    while (seg_start <= line.size()) {
      std::size_t seg_end = line.find(';', seg_start);
      if (seg_end == std::string_view::npos) seg_end = line.size();
      std::string_view seg = line.substr(seg_start, seg_end - seg_start);
      std::size_t seg_offset = pos + seg_start;
      detail::TextCursor probe(seg, seg_offset);
      if (!probe.at_end()) {
        auto arrow = seg.find("->");
        if (arrow == std::string_view::npos) throw GrammarError("expected 'A -> rhs'", line_no);
        detail::TextCursor lhs_in(seg.substr(0, arrow), seg_offset);
        std::string lhs(lhs_in.name());
        if (!lhs_in.at_end()) throw GrammarError("unexpected text before '->'", line_no);
        if (alphabet.find(lhs)) throw GrammarError("nonterminal '" + lhs + "' clashes with a symbol", line_no);
        if (nt_index.emplace(lhs, nonterminals.size()).second) nonterminals.push_back(lhs);
        std::string_view rhs = seg.substr(arrow + 2);
        std::size_t rhs_offset = seg_offset + arrow + 2;
        std::size_t alt = 0;
        while (alt <= rhs.size()) {
          std::size_t bar = rhs.find('|', alt);
          if (bar == std::string_view::npos) bar = rhs.size();
          lines.push_back({line_no, rhs_offset + alt, lhs, rhs.substr(alt, bar - alt)});
          alt = bar + 1;
        }
      }
      seg_start = seg_end + 1;
    }
    pos = end + 1;
  }
  if (lines.empty()) throw GrammarError("empty production set", line_no);

  std::vector<Production> productions;
  for (const auto& l : lines) {
    detail::TextCursor in(l.rhs, l.offset);
    if (in.at_end()) throw GrammarError("empty right-hand side", l.line);
    Pattern p = detail::parse_pattern(in, alphabet, nt_index, l.line);
    if (!in.at_end()) throw GrammarError("trailing input after right-hand side", l.line);
    productions.push_back({nt_index.at(l.lhs), std::move(p)});
  }
  return RegularTreeGrammar(alphabet, std::move(nonterminals), 0, std::move(productions));
}

namespace detail {

// All terms of exactly `size` nodes matching pattern p, with nonterminal
// holes drawn from table[nt][size].
inline void expand_pattern(const RegularTreeGrammar& g, const Pattern& p, std::size_t size,
                           const std::vector<std::vector<std::set<Term>>>& table, std::vector<Term>& out);

inline void expand_children(const RegularTreeGrammar& g, const Pattern& p, std::size_t i, std::size_t budget,
                            const std::vector<std::vector<std::set<Term>>>& table, std::vector<Term>& acc,
                            std::vector<Term>& out) {
  const std::size_t k = p.children.size();
  if (i == k) {
    if (budget == 0) out.push_back(Term::make(g.alphabet()[p.symbol], acc));
    return;
  }
  std::size_t rest = k - i - 1;  // each later child needs at least one node
  for (std::size_t s = 1; s + rest <= budget; ++s) {
    std::vector<Term> options;
    expand_pattern(g, p.children[i], s, table, options);
    for (const auto& t : options) {
      acc.push_back(t);
      expand_children(g, p, i + 1, budget - s, table, acc, out);
      acc.pop_back();
    }
  }
}

inline void expand_pattern(const RegularTreeGrammar& g, const Pattern& p, std::size_t size,
                           const std::vector<std::vector<std::set<Term>>>& table, std::vector<Term>& out) {
  if (p.is_hole()) {
    const auto& cell = table[*p.nonterminal][size];
    out.insert(out.end(), cell.begin(), cell.end());
    return;
  }
  if (p.children.empty()) {
    if (size == 1) out.push_back(Term::leaf(g.alphabet()[p.symbol]));
    return;
  }
  if (size < 1 + p.children.size()) return;
  std::vector<Term> acc;
  expand_children(g, p, 0, size - 1, table, acc, out);
}

}  // namespace detail

/// All terms of L(g) with at most max_size nodes, by dynamic programming over
/// (nonterminal, size).
inline std::set<Term> generate_upto(const RegularTreeGrammar& g, std::size_t max_size) {
  const std::size_t n = g.nonterminals().size();
  std::vector<std::vector<std::set<Term>>> table(n, std::vector<std::set<Term>>(max_size + 1));
  for (std::size_t s = 1; s <= max_size; ++s) {
    // Unit productions A -> B feed the same size, so iterate to a fixpoint.
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& p : g.productions()) {
        std::vector<Term> found;
        detail::expand_pattern(g, p.rhs, s, table, found);
        for (auto& t : found) changed |= table[p.lhs][s].insert(std::move(t)).second;
      }
    }
  }
  std::set<Term> out;
  for (std::size_t s = 1; s <= max_size; ++s) out.insert(table[g.start()][s].begin(), table[g.start()][s].end());
  return out;
}

/// All terms over the alphabet with at most max_size nodes.
inline std::set<Term> enumerate_terms(const RankedAlphabet& alphabet, std::size_t max_size) {
  std::vector<std::vector<Term>> by_size(max_size + 1);
  for (std::size_t s = 1; s <= max_size; ++s) {
    for (const auto& sym : alphabet.symbols()) {
      if (sym.arity == 0) {
        if (s == 1) by_size[1].push_back(Term::leaf(sym));
        continue;
      }
      if (s < 1 + sym.arity) continue;
      std::vector<Term> acc;
      auto rec = [&](auto&& self, std::size_t i, std::size_t budget) -> void {
        if (i == sym.arity) {
          if (budget == 0) by_size[s].push_back(Term::make(sym, acc));
          return;
        }
        std::size_t rest = sym.arity - i - 1;
        for (std::size_t c = 1; c + rest <= budget; ++c)
          for (const auto& t : by_size[c]) {
            acc.push_back(t);
            self(self, i + 1, budget - c);
            acc.pop_back();
          }
      };
      rec(rec, 0, s - 1);
    }
  }
  std::set<Term> out;
  for (auto& v : by_size) out.insert(v.begin(), v.end());
  return out;
}

}  // namespace facet
