#pragma once

// Semantic evaluators as transition builders over aspects.
//
// An evaluator fixes a ranked alphabet and, for each structure M, a finite
// set of plain aspect payloads. transition(M, p, s) describes how to check
// "the subterm here, read under aspect p, holds" as a positive formula over
// (aspect, move) atoms. Dual aspects are never written by hand: the dual
// transition is the De Morgan dual of the plain one with every aspect
// flipped.

#include <algorithm>
#include <compare>
#include <concepts>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "facet/errors.hpp"
#include "facet/posbool.hpp"
#include "facet/term.hpp"
#include "facet/twata.hpp"

namespace facet {

enum class Polarity : std::uint8_t { Plain, Dual };

enum class Label : std::uint8_t { Positive, Negative };

template <class P>
struct Aspect {
  Polarity polarity = Polarity::Plain;
  P payload{};

  friend bool operator==(const Aspect&, const Aspect&) = default;
  friend auto operator<=>(const Aspect&, const Aspect&) = default;
};

template <class P>
Aspect<P> plain(P p) {
  return {Polarity::Plain, std::move(p)};
}

template <class P>
Aspect<P> dual(P p) {
  return {Polarity::Dual, std::move(p)};
}

template <class P>
Aspect<P> flip(Aspect<P> a) {
  a.polarity = a.polarity == Polarity::Plain ? Polarity::Dual : Polarity::Plain;
  return a;
}

template <class P>
struct AspectAtom {
  Aspect<P> aspect;
  Move move;

  friend bool operator==(const AspectAtom&, const AspectAtom&) = default;
  friend auto operator<=>(const AspectAtom&, const AspectAtom&) = default;
};

template <class P>
using Transition = BoolFormula<AspectAtom<P>>;

/// Combinators used by transition builders.
template <class P>
struct Builder {
  using F = Transition<P>;

  static F constant(bool b) { return F::constant(b); }
  static F call(const Aspect<P>& a, Move m) { return F::atom({a, m}); }
  static F call(const P& p, Move m) { return F::atom({plain(p), m}); }
  static F child(const P& p, int i) { return call(p, Move::child(i)); }
  static F stay(const P& p) { return call(p, Move::stay()); }
  static F up(const P& p) { return call(p, Move::up()); }

  /// Conjunction over a finite list; True when empty.
  template <class Range, class Fn>
  static F all(const Range& r, Fn&& fn) {
    std::vector<F> parts;
    for (const auto& x : r) {
      F f = fn(x);
      if (f.is_false()) return f;
      parts.push_back(std::move(f));
    }
    return F::conj(std::move(parts));
  }

  /// Disjunction over a finite list; False when empty.
  template <class Range, class Fn>
  static F any(const Range& r, Fn&& fn) {
    std::vector<F> parts;
    for (const auto& x : r) {
      F f = fn(x);
      if (f.is_true()) return f;
      parts.push_back(std::move(f));
    }
    return F::disj(std::move(parts));
  }
};

/// Integers in [lo, hi].
inline std::vector<int> closed_range(int lo, int hi) {
  std::vector<int> out;
  for (int i = lo; i <= hi; ++i) out.push_back(i);
  return out;
}

template <class E>
concept Evaluator = requires(const E& ev, const typename E::Structure& m, const typename E::Payload& p,
                             SymbolId s, Label label, const Term& t) {
  { ev.alphabet() } -> std::same_as<const RankedAlphabet&>;
  { ev.aspects(m) } -> std::same_as<std::vector<typename E::Payload>>;
  { ev.initial(m, label) } -> std::same_as<Aspect<typename E::Payload>>;
  { ev.transition(m, p, s) } -> std::same_as<Transition<typename E::Payload>>;
  { ev.describe(m, p) } -> std::convertible_to<std::string>;
  { ev.reference(m, t) } -> std::same_as<bool>;
};

/// An evaluator over a subset of another evaluator's symbols.
template <Evaluator E>
class Restricted {
 public:
  using Structure = typename E::Structure;
  using Payload = typename E::Payload;

  Restricted(const E& inner, const std::vector<std::string>& names) : inner_(&inner) {
    std::vector<Symbol> syms;
    for (const auto& n : names) {
      SymbolId s = inner.alphabet().id(n);
      syms.push_back(inner.alphabet()[s]);
      map_.push_back(s);
    }
    alphabet_ = RankedAlphabet(std::move(syms));
  }

  const RankedAlphabet& alphabet() const { return alphabet_; }
  const E& inner() const { return *inner_; }
  std::vector<Payload> aspects(const Structure& m) const { return inner_->aspects(m); }
  Aspect<Payload> initial(const Structure& m, Label label) const { return inner_->initial(m, label); }
  Transition<Payload> transition(const Structure& m, const Payload& p, SymbolId s) const {
    return inner_->transition(m, p, map_[s]);
  }
  std::string describe(const Structure& m, const Payload& p) const { return inner_->describe(m, p); }
  bool reference(const Structure& m, const Term& t) const { return inner_->reference(m, t); }

 private:
  const E* inner_;
  std::vector<SymbolId> map_;
  RankedAlphabet alphabet_;
};

/// Transition of an aspect of either polarity.
template <Evaluator E>
Transition<typename E::Payload> transition_pbf(const E& ev, const typename E::Structure& m,
                                               const Aspect<typename E::Payload>& a, SymbolId s) {
  auto f = ev.transition(m, a.payload, s);
  if (a.polarity == Polarity::Plain) return f;
  using P = typename E::Payload;
  return f.dualize([](const AspectAtom<P>& x) { return AspectAtom<P>{flip(x.aspect), x.move}; });
}

template <Evaluator E>
std::string describe_aspect(const E& ev, const typename E::Structure& m, const Aspect<typename E::Payload>& a) {
  std::string d = ev.describe(m, a.payload);
  return a.polarity == Polarity::Plain ? d : "dual " + d;
}

/// Compiles (evaluator, structure, label) to a 2ATA. State 2i is the plain
/// aspect of payload i, state 2i+1 its dual. No final states: acceptance is
/// carried by True constants.
template <Evaluator E>
Twata build_twata(const E& ev, const typename E::Structure& m, Label label) {
  using P = typename E::Payload;
  const auto payloads = ev.aspects(m);
  if (payloads.empty()) throw IllFormedEvaluator("evaluator enumerated no aspects");
  std::map<P, StateId> index;
  for (std::size_t i = 0; i < payloads.size(); ++i)
    if (!index.emplace(payloads[i], static_cast<StateId>(i)).second)
      throw IllFormedEvaluator("duplicate aspect " + ev.describe(m, payloads[i]));
  auto state_of = [&](const Aspect<P>& a) -> StateId {
    auto it = index.find(a.payload);
    if (it == index.end()) throw IllFormedEvaluator("aspect " + describe_aspect(ev, m, a) + " is not enumerated");
    return 2 * it->second + (a.polarity == Polarity::Dual ? 1 : 0);
  };
  const auto& alphabet = ev.alphabet();
  const std::size_t n = 2 * payloads.size();
  std::vector<PosBool> delta(n * alphabet.size());
  std::vector<std::string> names(n);
  for (std::size_t i = 0; i < payloads.size(); ++i)
    for (Polarity pol : {Polarity::Plain, Polarity::Dual}) {
      Aspect<P> a{pol, payloads[i]};
      StateId q = state_of(a);
      names[q] = describe_aspect(ev, m, a);
      for (SymbolId s = 0; s < alphabet.size(); ++s) {
        auto f = transition_pbf(ev, m, a, s);
        delta[q * alphabet.size() + s] =
            f.map_atoms([&](const AspectAtom<P>& x) { return StateAtom{state_of(x.aspect), x.move}; });
      }
    }
  StateId init = state_of(ev.initial(m, label));
  return Twata(alphabet, n, init, std::move(delta), std::vector<bool>(n, false), std::move(names));
}

struct Violation {
  enum class Kind { Exhaustiveness, Closure, Arity };
  Kind kind;
  std::string aspect;
  std::string symbol;
  std::string atom;

  std::string to_string() const {
    const char* k = kind == Kind::Exhaustiveness ? "exhaustiveness" : kind == Kind::Closure ? "closure" : "arity";
    return std::string(k) + ": aspect " + aspect + ", symbol " + symbol + (atom.empty() ? "" : ", atom " + atom);
  }
};

/// Checks totality, closure of atoms under the enumerated aspects, and child
/// indices against arities. Violations are data, not exceptions.
template <Evaluator E>
std::vector<Violation> check_well_formed(const E& ev, const typename E::Structure& m) {
  using P = typename E::Payload;
  std::vector<Violation> out;
  std::vector<P> payloads;
  try {
    payloads = ev.aspects(m);
  } catch (const std::exception& e) {
    out.push_back({Violation::Kind::Exhaustiveness, "<enumeration>", "", e.what()});
    return out;
  }
  std::set<P> known(payloads.begin(), payloads.end());
  const auto& alphabet = ev.alphabet();
  auto atom_text = [&](const AspectAtom<P>& x) {
    return "(" + describe_aspect(ev, m, x.aspect) + "," + x.move.to_string() + ")";
  };
  auto check_initial = [&](Label l) {
    try {
      auto a = ev.initial(m, l);
      if (!known.count(a.payload))
        out.push_back({Violation::Kind::Closure, "<initial>", "", describe_aspect(ev, m, a)});
    } catch (const std::exception& e) {
      out.push_back({Violation::Kind::Exhaustiveness, "<initial>", "", e.what()});
    }
  };
  check_initial(Label::Positive);
  check_initial(Label::Negative);
  for (const auto& p : payloads)
    for (SymbolId s = 0; s < alphabet.size(); ++s) {
      const std::string aspect = ev.describe(m, p);
      const std::string& sym = alphabet[s].name;
      Transition<P> f;
      try {
        f = ev.transition(m, p, s);
      } catch (const std::exception& e) {
        out.push_back({Violation::Kind::Exhaustiveness, aspect, sym, e.what()});
        continue;
      }
      for (const auto& x : f.atoms()) {
        if (!known.count(x.aspect.payload)) out.push_back({Violation::Kind::Closure, aspect, sym, atom_text(x)});
        if (x.move.is_child() && static_cast<unsigned>(x.move.child_index()) > alphabet[s].arity)
          out.push_back({Violation::Kind::Arity, aspect, sym, atom_text(x)});
      }
    }
  return out;
}

}  // namespace facet
