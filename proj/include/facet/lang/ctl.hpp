#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "facet/evaluator.hpp"
#include "facet/lang/modal.hpp"

namespace facet::lang {

/// World with an optional fixpoint stage; stage -1 means counter-free.
struct CtlPayload {
  std::size_t world = 0;
  int stage = -1;

  friend bool operator==(const CtlPayload&, const CtlPayload&) = default;
  friend auto operator<=>(const CtlPayload&, const CtlPayload&) = default;
};

/// CTL: EG, EU, EX, or, not and one leaf per proposition.
/// Counter aspects (w, i) with 0 <= i <= |W| unfold EG as a greatest and EU
/// as a least fixpoint, so both polarities have finite proofs.
class CtlEvaluator {
 public:
  using Structure = Kripke;
  using Payload = CtlPayload;

  explicit CtlEvaluator(std::vector<std::string> propositions) : props_(std::move(propositions)) {
    std::vector<Symbol> syms{{"EG", 1}, {"EU", 2}, {"EX", 1}, {"or", 2}, {"not", 1}};
    for (const auto& p : props_) syms.push_back({p, 0});
    alphabet_ = RankedAlphabet(std::move(syms));
  }

  const RankedAlphabet& alphabet() const { return alphabet_; }
  const std::vector<std::string>& propositions() const { return props_; }

  std::vector<Payload> aspects(const Structure& m) const {
    std::vector<Payload> out;
    for (std::size_t w = 0; w < m.size(); ++w) {
      out.push_back({w, -1});
      for (int i = 0; i <= static_cast<int>(m.size()); ++i) out.push_back({w, i});
    }
    return out;
  }

  Aspect<Payload> initial(const Structure& m, Label label) const {
    Payload p{m.start, -1};
    return label == Label::Positive ? plain(p) : dual(p);
  }

  Transition<Payload> transition(const Structure& m, const Payload& p, SymbolId s) const {
    using B = Builder<Payload>;
    const std::size_t w = p.world;
    const Payload here{w, -1};
    const auto& succ = m.successors[w];
    if (p.stage >= 0) {
      const bool exhausted = p.stage == static_cast<int>(m.size());
      auto next = [&](std::size_t z) { return B::stay(Payload{z, p.stage + 1}); };
      switch (s) {
        case 0:  // w in EG^(|W|-i)(W)
          if (exhausted) return B::constant(true);
          return B::child(here, 1) && B::any(succ, next);
        case 1:  // w in EU^(|W|-i)(empty)
          if (exhausted) return B::constant(false);
          return B::child(here, 2) || (B::child(here, 1) && B::any(succ, next));
        default: return B::constant(false);
      }
    }
    switch (s) {
      case 0:
      case 1: return B::stay(Payload{w, 0});
      case 2: return B::any(succ, [](std::size_t z) { return B::child(Payload{z, -1}, 1); });
      case 3: return B::child(here, 1) || B::child(here, 2);
      case 4: return B::call(dual(here), Move::child(1));
      default: return B::constant(m.holds(w, props_[s - 5]));
    }
  }

  std::string describe(const Structure& m, const Payload& p) const {
    if (p.stage < 0) return m.worlds[p.world];
    return "(" + m.worlds[p.world] + "," + std::to_string(p.stage) + ")";
  }

  /// Set semantics with EG as a greatest and EU as a least fixpoint, by
  /// Kleene iteration.
  bool reference(const Structure& m, const Term& t) const { return sat(m, t)[m.start]; }

 private:
  std::vector<bool> sat(const Structure& m, const Term& t) const {
    const std::string& op = t.name();
    const std::size_t n = m.size();
    auto ex = [&](const std::vector<bool>& x) {
      std::vector<bool> out(n, false);
      for (std::size_t w = 0; w < n; ++w)
        for (auto z : m.successors[w]) out[w] = out[w] || x[z];
      return out;
    };
    std::vector<bool> out(n, false);
    if (op == "EX") return ex(sat(m, t.child(0)));
    if (op == "or") {
      auto a = sat(m, t.child(0)), b = sat(m, t.child(1));
      for (std::size_t w = 0; w < n; ++w) out[w] = a[w] || b[w];
      return out;
    }
    if (op == "not") {
      auto a = sat(m, t.child(0));
      for (std::size_t w = 0; w < n; ++w) out[w] = !a[w];
      return out;
    }
    if (op == "EG") {
      auto phi = sat(m, t.child(0));
      std::vector<bool> x(n, true);
      for (;;) {
        auto pre = ex(x);
        std::vector<bool> next(n);
        for (std::size_t w = 0; w < n; ++w) next[w] = phi[w] && pre[w];
        if (next == x) return x;
        x = std::move(next);
      }
    }
    if (op == "EU") {
      auto phi = sat(m, t.child(0)), psi = sat(m, t.child(1));
      std::vector<bool> x(n, false);
      for (;;) {
        auto pre = ex(x);
        std::vector<bool> next(n);
        for (std::size_t w = 0; w < n; ++w) next[w] = psi[w] || (phi[w] && pre[w]);
        if (next == x) return x;
        x = std::move(next);
      }
    }
    if (t.arity() == 0 && alphabet_.find(op)) {
      for (std::size_t w = 0; w < n; ++w) out[w] = m.holds(w, op);
      return out;
    }
    throw UnknownSymbolError("not a CTL formula symbol: '" + op + "'");
  }

  std::vector<std::string> props_;
  RankedAlphabet alphabet_;
};

}  // namespace facet::lang
