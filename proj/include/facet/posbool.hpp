#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace facet {

/// Direction of a transition atom: up to the parent, stay, or into child i >= 1.
class Move {
 public:
  constexpr Move() = default;
  static constexpr Move up() { return Move(-1); }
  static constexpr Move stay() { return Move(0); }
  static constexpr Move child(int i) { return Move(i); }

  constexpr bool is_up() const { return value_ < 0; }
  constexpr bool is_stay() const { return value_ == 0; }
  constexpr bool is_child() const { return value_ > 0; }
  constexpr int child_index() const { return value_; }  // 1-based
  constexpr int value() const { return value_; }

  friend constexpr auto operator<=>(Move, Move) = default;

  std::string to_string() const {
    if (is_up()) return "-1";
    return std::to_string(value_);
  }

 private:
  constexpr explicit Move(int v) : value_(v) {}
  int value_ = 0;
};

/// Positive Boolean formula over atoms of type A. Immutable and cheap to copy.
/// The combinators fold constants, so True/False only appear at the top.
template <class A>
class BoolFormula {
 public:
  enum class Kind : std::uint8_t { True, False, Atom, And, Or };

  BoolFormula() : BoolFormula(constant(false)) {}

  static BoolFormula constant(bool b) {
    static const BoolFormula t(std::make_shared<const Node>(Node{Kind::True, {}, {}}));
    static const BoolFormula f(std::make_shared<const Node>(Node{Kind::False, {}, {}}));
    return b ? t : f;
  }
  static BoolFormula top() { return constant(true); }
  static BoolFormula bottom() { return constant(false); }
  static BoolFormula atom(A a) { return BoolFormula(std::make_shared<const Node>(Node{Kind::Atom, std::move(a), {}})); }

  static BoolFormula conj(BoolFormula a, BoolFormula b) { return junction(Kind::And, std::move(a), std::move(b)); }
  static BoolFormula disj(BoolFormula a, BoolFormula b) { return junction(Kind::Or, std::move(a), std::move(b)); }

  /// n-ary forms; empty conjunction is True, empty disjunction is False.
  static BoolFormula conj(std::vector<BoolFormula> fs) { return fold(Kind::And, std::move(fs)); }
  static BoolFormula disj(std::vector<BoolFormula> fs) { return fold(Kind::Or, std::move(fs)); }

  friend BoolFormula operator&&(BoolFormula a, BoolFormula b) { return conj(std::move(a), std::move(b)); }
  friend BoolFormula operator||(BoolFormula a, BoolFormula b) { return disj(std::move(a), std::move(b)); }

  Kind kind() const { return node_->kind; }
  bool is_true() const { return kind() == Kind::True; }
  bool is_false() const { return kind() == Kind::False; }
  bool is_atom() const { return kind() == Kind::Atom; }
  bool is_constant() const { return is_true() || is_false(); }
  const A& atom_value() const { return node_->atom; }
  const std::vector<BoolFormula>& operands() const { return node_->operands; }

  /// Evaluates with `holds(atom)` deciding each atom.
  template <class Pred>
  bool evaluate(Pred&& holds) const {
    switch (kind()) {
      case Kind::True: return true;
      case Kind::False: return false;
      case Kind::Atom: return holds(atom_value());
      case Kind::And:
        for (const auto& o : operands())
          if (!o.evaluate(holds)) return false;
        return true;
      case Kind::Or:
        for (const auto& o : operands())
          if (o.evaluate(holds)) return true;
        return false;
    }
    return false;
  }

  template <class F>
  auto map_atoms(F&& f) const -> BoolFormula<std::invoke_result_t<F&, const A&>> {
    using B = std::invoke_result_t<F&, const A&>;
    switch (kind()) {
      case Kind::True: return BoolFormula<B>::top();
      case Kind::False: return BoolFormula<B>::bottom();
      case Kind::Atom: return BoolFormula<B>::atom(f(atom_value()));
      case Kind::And:
      case Kind::Or: {
        std::vector<BoolFormula<B>> ops;
        ops.reserve(operands().size());
        for (const auto& o : operands()) ops.push_back(o.map_atoms(f));
        return kind() == Kind::And ? BoolFormula<B>::conj(std::move(ops)) : BoolFormula<B>::disj(std::move(ops));
      }
    }
    return BoolFormula<B>::bottom();
  }

  /// Swaps True/False and And/Or and rewrites every atom with `flip`.
  template <class F>
  BoolFormula dualize(F&& flip) const {
    switch (kind()) {
      case Kind::True: return bottom();
      case Kind::False: return top();
      case Kind::Atom: return atom(flip(atom_value()));
      case Kind::And:
      case Kind::Or: {
        std::vector<BoolFormula> ops;
        ops.reserve(operands().size());
        for (const auto& o : operands()) ops.push_back(o.dualize(flip));
        return kind() == Kind::And ? disj(std::move(ops)) : conj(std::move(ops));
      }
    }
    return bottom();
  }

  template <class F>
  void for_each_atom(F&& f) const {
    if (is_atom()) {
      f(atom_value());
      return;
    }
    for (const auto& o : operands()) o.for_each_atom(f);
  }

  std::set<A> atoms() const {
    std::set<A> out;
    for_each_atom([&](const A& a) { out.insert(a); });
    return out;
  }

  /// Flattens nested And/Or of the same kind. Operand order is kept.
  BoolFormula normalized() const {
    if (kind() != Kind::And && kind() != Kind::Or) return *this;
    std::vector<BoolFormula> flat;
    for (const auto& o : operands()) {
      BoolFormula n = o.normalized();
      if (n.kind() == kind())
        flat.insert(flat.end(), n.operands().begin(), n.operands().end());
      else
        flat.push_back(std::move(n));
    }
    return BoolFormula(std::make_shared<const Node>(Node{kind(), A{}, std::move(flat)}));
  }

  /// Minimal satisfying atom sets (prime implicants), each sorted, the list
  /// sorted. True gives {{}}, False gives {}.
  std::vector<std::vector<A>> minimal_models() const {
    using Model = std::vector<A>;
    switch (kind()) {
      case Kind::True: return {Model{}};
      case Kind::False: return {};
      case Kind::Atom: return {Model{atom_value()}};
      case Kind::Or: {
        std::vector<Model> all;
        for (const auto& o : operands()) {
          auto m = o.minimal_models();
          all.insert(all.end(), m.begin(), m.end());
        }
        return minimize(std::move(all));
      }
      case Kind::And: {
        std::vector<Model> acc{Model{}};
        for (const auto& o : operands()) {
          auto m = o.minimal_models();
          std::vector<Model> next;
          for (const auto& a : acc)
            for (const auto& b : m) {
              Model u;
              std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
              next.push_back(std::move(u));
            }
          acc = minimize(std::move(next));
          if (acc.empty()) break;
        }
        return acc;
      }
    }
    return {};
  }

  /// Prefix notation: `true`, `false`, atoms via `show`, `and(..)`, `or(..)`.
  template <class Show>
  std::string to_string(Show&& show) const {
    switch (kind()) {
      case Kind::True: return "true";
      case Kind::False: return "false";
      case Kind::Atom: return show(atom_value());
      case Kind::And:
      case Kind::Or: {
        std::string out = kind() == Kind::And ? "and(" : "or(";
        for (std::size_t i = 0; i < operands().size(); ++i) {
          if (i) out += ',';
          out += operands()[i].to_string(show);
        }
        return out + ')';
      }
    }
    return {};
  }

  friend bool operator==(const BoolFormula& a, const BoolFormula& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    if (a.kind() == Kind::Atom) return a.atom_value() == b.atom_value();
    return a.operands() == b.operands();
  }

 private:
  struct Node {
    Kind kind;
    A atom;
    std::vector<BoolFormula> operands;
  };

  explicit BoolFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static BoolFormula junction(Kind k, BoolFormula a, BoolFormula b) {
    const bool is_and = k == Kind::And;
    if (a.is_constant()) return a.is_true() == is_and ? b : a;
    if (b.is_constant()) return b.is_true() == is_and ? a : b;
    return BoolFormula(std::make_shared<const Node>(Node{k, A{}, {std::move(a), std::move(b)}}));
  }

  static BoolFormula fold(Kind k, std::vector<BoolFormula> fs) {
    const bool is_and = k == Kind::And;
    std::vector<BoolFormula> kept;
    for (auto& f : fs) {
      if (f.is_constant()) {
        if (f.is_true() == is_and) continue;  // neutral element
        return f;                             // absorbing element
      }
      kept.push_back(std::move(f));
    }
    if (kept.empty()) return constant(is_and);
    if (kept.size() == 1) return kept.front();
    return BoolFormula(std::make_shared<const Node>(Node{k, A{}, std::move(kept)}));
  }

  template <class Model>
  static std::vector<Model> minimize(std::vector<Model> ms) {
    std::sort(ms.begin(), ms.end(), [](const Model& a, const Model& b) {
      return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
    std::vector<Model> out;
    for (auto& m : ms) {
      bool dominated = std::any_of(out.begin(), out.end(), [&](const Model& o) {
        return std::includes(m.begin(), m.end(), o.begin(), o.end());
      });
      if (!dominated) out.push_back(std::move(m));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::shared_ptr<const Node> node_;
};

}  // namespace facet
