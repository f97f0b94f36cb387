#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "facet/evaluator.hpp"
#include "facet/lang/common.hpp"

namespace facet::lang {

/// Finite word; each character is one letter.
struct Word {
  std::string letters;

  std::size_t size() const { return letters.size(); }
  /// 1-based letter access.
  char at(std::size_t i) const { return letters[i - 1]; }
};

/// `{"word":"abb"}`
inline Word parse_word(const json& j) { return Word{require_string(j, "word")}; }

/// Subword w(l, r) = positions l..r-1; 1 <= l <= r <= |w|+1.
struct Span {
  int l = 1;
  int r = 1;

  friend bool operator==(const Span&, const Span&) = default;
  friend auto operator<=>(const Span&, const Span&) = default;
};

inline std::vector<Span> all_spans(std::size_t n) {
  std::vector<Span> out;
  for (int l = 1; l <= static_cast<int>(n) + 1; ++l)
    for (int r = l; r <= static_cast<int>(n) + 1; ++r) out.push_back({l, r});
  return out;
}

inline std::string span_string(const Span& s) {
  return "(" + std::to_string(s.l) + "," + std::to_string(s.r) + ")";
}

/// Extended regular expressions: concat, union, inter, star, not and one
/// leaf per letter. Aspects are spans.
class RegexEvaluator {
 public:
  using Structure = Word;
  using Payload = Span;

  explicit RegexEvaluator(std::vector<std::string> letters) : letters_(std::move(letters)) {
    check_letters(letters_);
    std::vector<Symbol> syms{{"concat", 2}, {"union", 2}, {"inter", 2}, {"star", 1}, {"not", 1}};
    for (const auto& a : letters_) syms.push_back({a, 0});
    alphabet_ = RankedAlphabet(std::move(syms));
  }

  const RankedAlphabet& alphabet() const { return alphabet_; }
  const std::vector<std::string>& letters() const { return letters_; }

  std::vector<Payload> aspects(const Structure& w) const { return all_spans(w.size()); }

  Aspect<Payload> initial(const Structure& w, Label label) const {
    Span s{1, static_cast<int>(w.size()) + 1};
    return label == Label::Positive ? plain(s) : dual(s);
  }

  Transition<Payload> transition(const Structure& w, const Payload& p, SymbolId s) const {
    using B = Builder<Payload>;
    const int l = p.l, r = p.r;
    switch (s) {
      case 0:
        return B::any(closed_range(l, r), [&](int x) { return B::child({l, x}, 1) && B::child({x, r}, 2); });
      case 1: return B::child(p, 1) || B::child(p, 2);
      case 2: return B::child(p, 1) && B::child(p, 2);
      case 3:
        if (l == r) return B::constant(true);
        return B::any(closed_range(l + 1, r), [&](int x) { return B::child({l, x}, 1) && B::stay({x, r}); });
      case 4: return B::call(dual(p), Move::child(1));
      default: return B::constant(r == l + 1 && std::string(1, w.at(l)) == letters_[s - 5]);
    }
  }

  std::string describe(const Structure&, const Payload& p) const { return span_string(p); }

  /// Recursive subword semantics, memoized per (subterm, span).
  bool reference(const Structure& w, const Term& t) const {
    std::map<std::tuple<const void*, int, int>, bool> memo;
    return matches(w, t, 1, static_cast<int>(w.size()) + 1, memo);
  }

 private:
  bool matches(const Word& w, const Term& t, int l, int r, std::map<std::tuple<const void*, int, int>, bool>& memo) const {
    auto key = std::make_tuple(t.id(), l, r);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const std::string& op = t.name();
    bool res = false;
    if (op == "concat") {
      for (int k = l; k <= r && !res; ++k) res = matches(w, t.child(0), l, k, memo) && matches(w, t.child(1), k, r, memo);
    } else if (op == "union") {
      res = matches(w, t.child(0), l, r, memo) || matches(w, t.child(1), l, r, memo);
    } else if (op == "inter") {
      res = matches(w, t.child(0), l, r, memo) && matches(w, t.child(1), l, r, memo);
    } else if (op == "star") {
      res = l == r;
      for (int k = l + 1; k <= r && !res; ++k) res = matches(w, t.child(0), l, k, memo) && matches(w, t, k, r, memo);
    } else if (op == "not") {
      res = !matches(w, t.child(0), l, r, memo);
    } else if (t.arity() == 0 && alphabet_.find(op)) {
      res = r == l + 1 && std::string(1, w.at(l)) == op;
    } else {
      throw UnknownSymbolError("not a regular expression symbol: '" + op + "'");
    }
    memo[key] = res;
    return res;
  }

  std::vector<std::string> letters_;
  RankedAlphabet alphabet_;
};

}  // namespace facet::lang
