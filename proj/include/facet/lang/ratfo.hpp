#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "facet/evaluator.hpp"
#include "facet/lang/common.hpp"

namespace facet::lang {

using Rational = boost::rational<long long>;

/// Parses "p/q", "p" or an integer JSON value.
inline Rational parse_rational(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (!j.is_string()) throw StructureError("expected a rational like \"1/2\", got " + j.dump());
  const std::string s = j.get<std::string>();
  try {
    std::size_t used = 0;
    long long num = std::stoll(s, &used);
    if (used == s.size()) return Rational(num);
    if (s[used] != '/') throw StructureError("bad rational '" + s + "'");
    std::size_t used2 = 0;
    const std::string rest = s.substr(used + 1);
    long long den = std::stoll(rest, &used2);
    if (used2 != rest.size() || den == 0 || rest[0] == '-' || rest[0] == '+')
      throw StructureError("bad rational '" + s + "'");
    return Rational(num, den);
  } catch (const std::logic_error&) {
    throw StructureError("bad rational '" + s + "'");
  }
}

/// A k-tuple of rationals: `{"values":["1/2","3","4/3"]}`
struct RatTuple {
  std::vector<Rational> values;
};

inline RatTuple parse_rat_tuple(const json& j) {
  const json& vs = require(j, "values");
  if (!vs.is_array() || vs.empty()) throw StructureError("values must be a nonempty array");
  RatTuple t;
  for (const auto& v : vs) t.values.push_back(parse_rational(v));
  return t;
}

/// Total preorder on variables 0..k-1 as dense block ranks: variable v sits
/// in block rank[v], blocks 0..m-1 ordered by <.
struct TotalPreorder {
  std::vector<int> rank;

  std::size_t blocks() const { return rank.empty() ? 0 : *std::max_element(rank.begin(), rank.end()) + 1; }
  bool lt(std::size_t a, std::size_t b) const { return rank[a] < rank[b]; }
  bool eq(std::size_t a, std::size_t b) const { return rank[a] == rank[b]; }

  friend bool operator==(const TotalPreorder&, const TotalPreorder&) = default;
  friend auto operator<=>(const TotalPreorder&, const TotalPreorder&) = default;
};

/// Preorder induced by values.
template <class T>
TotalPreorder induced_preorder(const std::vector<T>& values) {
  std::vector<T> distinct(values.begin(), values.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  TotalPreorder p;
  for (const auto& v : values)
    p.rank.push_back(static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), v) - distinct.begin()));
  return p;
}

/// All total preorders on k variables, sorted.
inline std::vector<TotalPreorder> all_preorders(std::size_t k) {
  std::vector<TotalPreorder> out;
  std::vector<int> r(k, 0);
  for (;;) {
    std::vector<bool> used(k, false);
    for (int x : r) used[x] = true;
    std::size_t m = 0;
    while (m < k && used[m]) ++m;
    if (std::all_of(used.begin() + m, used.end(), [](bool b) { return !b; })) out.push_back({r});
    std::size_t i = k;
    while (i > 0 && r[i - 1] == static_cast<int>(k) - 1) r[--i] = 0;
    if (i == 0) break;
    ++r[i - 1];
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Preorders agreeing with p off x, listed as: x below block 0, x joining
/// block 0, x between blocks 0 and 1, and so on up to x above the last block.
inline std::vector<TotalPreorder> place(std::size_t x, const TotalPreorder& p) {
  std::vector<int> others;
  for (std::size_t v = 0; v < p.rank.size(); ++v)
    if (v != x) others.push_back(p.rank[v]);
  std::sort(others.begin(), others.end());
  others.erase(std::unique(others.begin(), others.end()), others.end());
  auto compact = [&](int r) { return static_cast<int>(std::lower_bound(others.begin(), others.end(), r) - others.begin()); };
  const int m = static_cast<int>(others.size());
  std::vector<TotalPreorder> out;
  for (int g = 0; g <= m; ++g) {
    TotalPreorder gap{p.rank};
    for (std::size_t v = 0; v < p.rank.size(); ++v) {
      if (v == x) continue;
      int c = compact(p.rank[v]);
      gap.rank[v] = c < g ? c : c + 1;
    }
    gap.rank[x] = g;
    out.push_back(gap);
    if (g == m) break;
    TotalPreorder join{p.rank};
    for (std::size_t v = 0; v < p.rank.size(); ++v)
      if (v != x) join.rank[v] = compact(p.rank[v]);
    join.rank[x] = g;
    out.push_back(join);
  }
  return out;
}

/// `x<z<y`, `x=z<y`: blocks in order joined by `<`, members by `=`.
inline std::string preorder_string(const TotalPreorder& p, const std::vector<std::string>& names) {
  std::string out;
  for (int b = 0; b < static_cast<int>(p.blocks()); ++b) {
    if (b) out += "<";
    bool first = true;
    for (std::size_t v = 0; v < p.rank.size(); ++v)
      if (p.rank[v] == b) {
        if (!first) out += "=";
        out += names[v];
        first = false;
      }
  }
  return out;
}

/// First-order logic with k variables over (Q, <): forall_v, exists_v, and,
/// or, not, lt_v_w for every ordered pair and eq_v_w for v before or equal w.
/// Aspects are total preorders on the variables.
class RatfoEvaluator {
 public:
  using Structure = RatTuple;
  using Payload = TotalPreorder;

  explicit RatfoEvaluator(std::size_t k) : k_(k), vars_(variable_names(k)) {
    if (k == 0) throw Error("need at least one variable");
    std::vector<Symbol> syms;
    for (const auto& v : vars_) syms.push_back({"forall_" + v, 1});
    for (const auto& v : vars_) syms.push_back({"exists_" + v, 1});
    syms.push_back({"and", 2});
    syms.push_back({"or", 2});
    syms.push_back({"not", 1});
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) {
        syms.push_back({"lt_" + vars_[a] + "_" + vars_[b], 0});
        atoms_.push_back({true, a, b});
      }
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = a; b < k; ++b) {
        syms.push_back({"eq_" + vars_[a] + "_" + vars_[b], 0});
        atoms_.push_back({false, a, b});
      }
    alphabet_ = RankedAlphabet(std::move(syms));
  }

  const RankedAlphabet& alphabet() const { return alphabet_; }
  std::size_t k() const { return k_; }
  const std::vector<std::string>& variables() const { return vars_; }

  std::vector<Payload> aspects(const Structure&) const { return all_preorders(k_); }

  Aspect<Payload> initial(const Structure& t, Label label) const {
    check(t);
    TotalPreorder p = induced_preorder(t.values);
    return label == Label::Positive ? plain(p) : dual(p);
  }

  Transition<Payload> transition(const Structure&, const Payload& p, SymbolId s) const {
    using B = Builder<Payload>;
    if (s < k_) return B::all(place(s, p), [](const TotalPreorder& q) { return B::child(q, 1); });
    if (s < 2 * k_) return B::any(place(s - k_, p), [](const TotalPreorder& q) { return B::child(q, 1); });
    switch (s - 2 * k_) {
      case 0: return B::child(p, 1) && B::child(p, 2);
      case 1: return B::child(p, 1) || B::child(p, 2);
      case 2: return B::call(dual(p), Move::child(1));
      default: {
        const auto& at = atoms_[s - 2 * k_ - 3];
        return B::constant(at.less ? p.lt(at.a, at.b) : p.eq(at.a, at.b));
      }
    }
  }

  std::string describe(const Structure&, const Payload& p) const { return preorder_string(p, vars_); }

  /// Evaluation over exact rationals. A quantifier tries the other
  /// variables' values, midpoints between them, and points beyond both ends;
  /// these represent every order type x can take.
  bool reference(const Structure& t, const Term& f) const {
    check(t);
    std::vector<Rational> env = t.values;
    return eval(f, env);
  }

 private:
  struct AtomSym {
    bool less;
    std::size_t a, b;
  };

  void check(const Structure& t) const {
    if (t.values.size() != k_)
      throw StructureError("tuple has " + std::to_string(t.values.size()) + " values, expected " + std::to_string(k_));
  }

  std::vector<Rational> candidates(const std::vector<Rational>& env, std::size_t x) const {
    std::vector<Rational> vals;
    for (std::size_t v = 0; v < k_; ++v)
      if (v != x) vals.push_back(env[v]);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    if (vals.empty()) return {Rational(0)};
    std::vector<Rational> out{vals.front() - 1};
    for (std::size_t i = 0; i < vals.size(); ++i) {
      out.push_back(vals[i]);
      if (i + 1 < vals.size()) out.push_back((vals[i] + vals[i + 1]) / 2);
    }
    out.push_back(vals.back() + 1);
    return out;
  }

  bool eval(const Term& f, std::vector<Rational>& env) const {
    auto id = alphabet_.find(f.name());
    if (!id || alphabet_[*id].arity != f.arity()) throw UnknownSymbolError("not a formula symbol: '" + f.name() + "'");
    const SymbolId s = *id;
    if (s < 2 * k_) {
      const std::size_t x = s % k_;
      const bool universal = s < k_;
      const Rational saved = env[x];
      bool res = universal;
      for (const auto& c : candidates(env, x)) {
        env[x] = c;
        bool r = eval(f.child(0), env);
        if (r != universal) {
          res = r;
          break;
        }
      }
      env[x] = saved;
      return res;
    }
    switch (s - 2 * k_) {
      case 0: return eval(f.child(0), env) && eval(f.child(1), env);
      case 1: return eval(f.child(0), env) || eval(f.child(1), env);
      case 2: return !eval(f.child(0), env);
      default: {
        const auto& at = atoms_[s - 2 * k_ - 3];
        return at.less ? env[at.a] < env[at.b] : env[at.a] == env[at.b];
      }
    }
  }

  std::size_t k_;
  std::vector<std::string> vars_;
  std::vector<AtomSym> atoms_;
  RankedAlphabet alphabet_;
};

}  // namespace facet::lang
