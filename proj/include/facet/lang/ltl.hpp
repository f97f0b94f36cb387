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

/// Infinite word u v^omega with u and v nonempty.
struct Lasso {
  std::string u;
  std::string v;
};

/// `{"u":"bab","v":"aabb"}`
inline Lasso parse_lasso(const json& j) {
  Lasso l{require_string(j, "u"), require_string(j, "v")};
  if (l.u.empty() || l.v.empty()) throw StructureError("lasso needs nonempty u and v");
  return l;
}

/// Position (i,_) in the prefix or (_,j) in the period; 1-based.
struct LassoPos {
  bool loop = false;
  int index = 1;

  friend bool operator==(const LassoPos&, const LassoPos&) = default;
  friend auto operator<=>(const LassoPos&, const LassoPos&) = default;
};

/// LTL over lassos: and, or, not, X, U and one leaf per letter.
class LtlEvaluator {
 public:
  using Structure = Lasso;
  using Payload = LassoPos;

  explicit LtlEvaluator(std::vector<std::string> letters) : letters_(std::move(letters)) {
    check_letters(letters_);
    std::vector<Symbol> syms{{"and", 2}, {"or", 2}, {"not", 1}, {"X", 1}, {"U", 2}};
    for (const auto& a : letters_) syms.push_back({a, 0});
    alphabet_ = RankedAlphabet(std::move(syms));
  }

  const RankedAlphabet& alphabet() const { return alphabet_; }
  const std::vector<std::string>& letters() const { return letters_; }

  std::vector<Payload> aspects(const Structure& m) const {
    std::vector<Payload> out;
    for (int i = 1; i <= static_cast<int>(m.u.size()); ++i) out.push_back({false, i});
    for (int j = 1; j <= static_cast<int>(m.v.size()); ++j) out.push_back({true, j});
    return out;
  }

  Aspect<Payload> initial(const Structure&, Label label) const {
    Payload p{false, 1};
    return label == Label::Positive ? plain(p) : dual(p);
  }

  Transition<Payload> transition(const Structure& m, const Payload& p, SymbolId s) const {
    using B = Builder<Payload>;
    const int nu = static_cast<int>(m.u.size()), nv = static_cast<int>(m.v.size());
    auto pre = [](int i) { return Payload{false, i}; };
    auto per = [](int j) { return Payload{true, j}; };
    switch (s) {
      case 0: return B::child(p, 1) && B::child(p, 2);
      case 1: return B::child(p, 1) || B::child(p, 2);
      case 2: return B::call(dual(p), Move::child(1));
      case 3:
        if (p.loop) return B::child(per(p.index + 1 > nv ? 1 : p.index + 1), 1);
        return B::child(p.index < nu ? pre(p.index + 1) : per(1), 1);
      case 4: {
        auto lhs = [](Payload q) { return B::child(q, 1); };
        auto rhs = [](Payload q) { return B::child(q, 2); };
        if (p.loop) {
          const int j = p.index;
          return B::any(closed_range(1, nv), [&](int jp) {
            return rhs(per(jp)) && B::all(cyclic_interval(j, jp, nv), [&](int jpp) { return lhs(per(jpp)); });
          });
        }
        const int i = p.index;
        auto in_prefix = B::any(closed_range(i, nu), [&](int ip) {
          return rhs(pre(ip)) && B::all(closed_range(i, ip - 1), [&](int ipp) { return lhs(pre(ipp)); });
        });
        auto into_period = B::all(closed_range(i, nu), [&](int ip) { return lhs(pre(ip)); }) &&
                           B::any(closed_range(1, nv), [&](int j) {
                             return B::all(closed_range(1, j - 1), [&](int jp) { return lhs(per(jp)); }) &&
                                    rhs(per(j));
                           });
        return in_prefix || into_period;
      }
      default: {
        const char c = p.loop ? m.v[p.index - 1] : m.u[p.index - 1];
        return B::constant(std::string(1, c) == letters_[s - 5]);
      }
    }
  }

  std::string describe(const Structure&, const Payload& p) const {
    return p.loop ? "(_," + std::to_string(p.index) + ")" : "(" + std::to_string(p.index) + ",_)";
  }

  /// Model checking on the lasso graph: positions 0..|uv|-1, the last one
  /// looping back to |u|; U is a least fixpoint over that graph.
  bool reference(const Structure& m, const Term& t) const { return sat_graph(m, t)[0]; }

  /// Direct recursion over the position table with prefix and period cases.
  bool table_eval(const Structure& m, const Term& t) const {
    std::map<std::tuple<const void*, bool, int>, bool> memo;
    return table(m, t, {false, 1}, memo);
  }

  /// [j, j') in the period, wrapping past |v| when j' < j.
  static std::vector<int> cyclic_interval(int j, int jp, int nv) {
    std::vector<int> out;
    if (jp >= j) {
      for (int x = j; x < jp; ++x) out.push_back(x);
    } else {
      for (int x = j; x <= nv; ++x) out.push_back(x);
      for (int x = 1; x < jp; ++x) out.push_back(x);
    }
    return out;
  }

 private:
  std::vector<bool> sat_graph(const Lasso& m, const Term& t) const {
    const std::size_t nu = m.u.size(), n = nu + m.v.size();
    auto succ = [&](std::size_t p) { return p + 1 < n ? p + 1 : nu; };
    auto letter = [&](std::size_t p) { return p < nu ? m.u[p] : m.v[p - nu]; };
    const std::string& op = t.name();
    std::vector<bool> out(n, false);
    if (op == "and" || op == "or") {
      auto a = sat_graph(m, t.child(0)), b = sat_graph(m, t.child(1));
      for (std::size_t p = 0; p < n; ++p) out[p] = op == "and" ? a[p] && b[p] : a[p] || b[p];
    } else if (op == "not") {
      auto a = sat_graph(m, t.child(0));
      for (std::size_t p = 0; p < n; ++p) out[p] = !a[p];
    } else if (op == "X") {
      auto a = sat_graph(m, t.child(0));
      for (std::size_t p = 0; p < n; ++p) out[p] = a[succ(p)];
    } else if (op == "U") {
      auto a = sat_graph(m, t.child(0)), b = sat_graph(m, t.child(1));
      bool changed = true;
      while (changed) {
        changed = false;
        for (std::size_t p = 0; p < n; ++p)
          if (!out[p] && (b[p] || (a[p] && out[succ(p)]))) out[p] = changed = true;
      }
    } else if (t.arity() == 0 && alphabet_.find(op)) {
      for (std::size_t p = 0; p < n; ++p) out[p] = std::string(1, letter(p)) == op;
    } else {
      throw UnknownSymbolError("not an LTL formula symbol: '" + op + "'");
    }
    return out;
  }

  bool table(const Lasso& m, const Term& t, LassoPos p, std::map<std::tuple<const void*, bool, int>, bool>& memo) const {
    auto key = std::make_tuple(t.id(), p.loop, p.index);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const int nu = static_cast<int>(m.u.size()), nv = static_cast<int>(m.v.size());
    auto at = [&](const Term& s, LassoPos q) { return table(m, s, q, memo); };
    const std::string& op = t.name();
    bool res = false;
    if (op == "and") {
      res = at(t.child(0), p) && at(t.child(1), p);
    } else if (op == "or") {
      res = at(t.child(0), p) || at(t.child(1), p);
    } else if (op == "not") {
      res = !at(t.child(0), p);
    } else if (op == "X") {
      if (p.loop) res = at(t.child(0), {true, p.index % nv + 1});
      else res = at(t.child(0), p.index < nu ? LassoPos{false, p.index + 1} : LassoPos{true, 1});
    } else if (op == "U") {
      const Term& f = t.child(0);
      const Term& g = t.child(1);
      if (p.loop) {
        for (int jp = 1; jp <= nv && !res; ++jp) {
          bool ok = at(g, {true, jp});
          for (int x : cyclic_interval(p.index, jp, nv)) ok = ok && at(f, {true, x});
          res = ok;
        }
      } else {
        for (int ip = p.index; ip <= nu && !res; ++ip) {
          bool ok = at(g, {false, ip});
          for (int x = p.index; x < ip && ok; ++x) ok = at(f, {false, x});
          res = ok;
        }
        bool all_prefix = true;
        for (int x = p.index; x <= nu && all_prefix; ++x) all_prefix = at(f, {false, x});
        for (int j = 1; j <= nv && !res && all_prefix; ++j) {
          bool ok = at(g, {true, j});
          for (int x = 1; x < j && ok; ++x) ok = at(f, {true, x});
          res = ok;
        }
      }
    } else if (t.arity() == 0 && alphabet_.find(op)) {
      const char c = p.loop ? m.v[p.index - 1] : m.u[p.index - 1];
      res = std::string(1, c) == op;
    } else {
      throw UnknownSymbolError("not an LTL formula symbol: '" + op + "'");
    }
    memo[key] = res;
    return res;
  }

  std::vector<std::string> letters_;
  RankedAlphabet alphabet_;
};

}  // namespace facet::lang
