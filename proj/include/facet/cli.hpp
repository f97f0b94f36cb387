#pragma once

// Command implementations behind the `facet` executable. Each command writes
// to the given streams and returns the process exit status.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "facet/languages.hpp"
#include "facet/learn.hpp"
#include "facet/search.hpp"

namespace facet::cli {

enum Exit : int { Ok = 0, Unrealizable = 1, InputError = 2, Exhausted = 3, OracleMismatch = 4 };

struct LearnFlags {
  std::optional<std::size_t> max_states;
  std::optional<double> timeout_seconds;
  bool stats = false;
  bool oracle = false;
  std::string dot_path;
};

namespace detail {

using lang::json;

/// Identifiers in term or grammar text, with grammar left-hand sides
/// collected separately. `#` comments are skipped.
struct Names {
  std::vector<std::string> all;  // first-occurrence order
  std::set<std::string> lhs;
};

inline Names scan_names(std::string_view text) {
  Names n;
  std::set<std::string> seen;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (!is_name_char(c)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_name_char(text[j])) ++j;
    std::string name(text.substr(i, j - i));
    std::size_t k = j;
    while (k < text.size() && (text[k] == ' ' || text[k] == '\t')) ++k;
    if (text.substr(k, 2) == "->") n.lhs.insert(name);
    if (seen.insert(name).second) n.all.push_back(name);
    i = j;
  }
  return n;
}

inline std::vector<std::string> split_underscore(const std::string& s) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    std::size_t u = s.find('_', start);
    parts.push_back(s.substr(start, u == std::string::npos ? std::string::npos : u - start));
    if (u == std::string::npos) return parts;
    start = u + 1;
  }
}

/// 1-based index of a variable name (x, y, z or x1, x2, ...), or 0.
inline std::size_t variable_index(const std::string& v) {
  if (v == "x") return 1;
  if (v == "y") return 2;
  if (v == "z") return 3;
  if (v.size() >= 2 && v[0] == 'x' && std::all_of(v.begin() + 1, v.end(), [](char c) { return c >= '0' && c <= '9'; }))
    return static_cast<std::size_t>(std::stoul(v.substr(1)));
  return 0;
}

inline std::size_t variables_mentioned(const Names& n, bool skip_head) {
  std::size_t k = 0;
  for (const auto& name : n.all) {
    if (n.lhs.count(name)) continue;
    auto parts = split_underscore(name);
    for (std::size_t i = skip_head ? 1 : 0; i < parts.size(); ++i) k = std::max(k, variable_index(parts[i]));
  }
  return k;
}

inline void add_unique(std::vector<std::string>& v, const std::string& x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

/// Evaluator for E: explicit params win; absent ones come from the
/// structures and from the symbols mentioned in `text`.
template <class E>
E make_evaluator(json params, const std::vector<typename E::Structure>& ms, std::string_view text) {
  using T = lang::Traits<E>;
  if (!params.is_object()) {
    if (!params.is_null()) throw StructureError("params must be a JSON object");
    params = json::object();
  }
  const Names names = scan_names(text);
  auto free_names = [&](const std::set<std::string>& ops) {
    std::vector<std::string> out;
    for (const auto& x : names.all)
      if (!names.lhs.count(x) && !ops.count(x)) out.push_back(x);
    return out;
  };
  auto merge_sorted = [](std::vector<std::string> a, const std::vector<std::string>& b) {
    std::set<std::string> s(a.begin(), a.end());
    s.insert(b.begin(), b.end());
    return std::vector<std::string>(s.begin(), s.end());
  };
  if constexpr (std::is_same_v<E, lang::ModalEvaluator> || std::is_same_v<E, lang::CtlEvaluator>) {
    if (!params.contains("propositions")) {
      const std::set<std::string> ops = std::is_same_v<E, lang::ModalEvaluator>
                                            ? std::set<std::string>{"and", "or", "not", "box", "dia"}
                                            : std::set<std::string>{"EG", "EU", "EX", "or", "not"};
      std::vector<std::string> props;
      for (const auto& m : ms)
        for (const auto& x : lang::kripke_propositions(m)) props.push_back(x);
      params["propositions"] = merge_sorted(props, free_names(ops));
    }
  } else if constexpr (std::is_same_v<E, lang::RegexEvaluator> || std::is_same_v<E, lang::LtlEvaluator>) {
    if (!params.contains("letters")) {
      const std::set<std::string> ops = std::is_same_v<E, lang::RegexEvaluator>
                                            ? std::set<std::string>{"concat", "union", "inter", "star", "not"}
                                            : std::set<std::string>{"and", "or", "not", "X", "U"};
      std::vector<std::string> letters;
      for (const auto& m : ms) {
        if constexpr (std::is_same_v<E, lang::RegexEvaluator>) {
          for (const auto& x : lang::letters_of(m.letters)) letters.push_back(x);
        } else {
          for (const auto& x : lang::letters_of(m.u + m.v)) letters.push_back(x);
        }
      }
      params["letters"] = merge_sorted(letters, free_names(ops));
    }
  } else if constexpr (std::is_same_v<E, lang::CfgEvaluator>) {
    std::vector<std::string> starts, others, terminals;
    for (const auto& x : names.all) {
      if (names.lhs.count(x)) continue;
      auto u = x.find('_');
      if (u == std::string::npos) continue;
      std::string head = x.substr(0, u), rest = x.substr(u + 1);
      if (head == "top") add_unique(starts, rest);
      else if (head == "lhs" || head == "rhs") add_unique(others, rest);
      else if (head == "term") add_unique(terminals, rest);
    }
    if (!params.contains("nonterminals") && !starts.empty()) {
      for (const auto& x : others) add_unique(starts, x);
      params["nonterminals"] = starts;
    }
    if (!params.contains("terminals")) {
      std::vector<std::string> letters;
      for (const auto& w : ms)
        for (const auto& x : lang::letters_of(w.letters)) letters.push_back(x);
      params["terminals"] = merge_sorted(letters, terminals);
    }
  } else if constexpr (std::is_same_v<E, lang::RatfoEvaluator>) {
    if (!params.contains("k")) {
      std::size_t k = variables_mentioned(names, true);
      for (const auto& t : ms) k = std::max(k, t.values.size());
      if (k == 0) throw StructureError("cannot infer params.k");
      params["k"] = k;
    }
  } else if constexpr (std::is_same_v<E, lang::FoEvaluator>) {
    if (!params.contains("k")) params["k"] = std::max<std::size_t>(2, variables_mentioned(names, true));
    if (!params.contains("signature")) {
      json sig = json::object();
      for (const auto& m : ms)
        for (const auto& [name, arity] : lang::signature_of(m)) sig[name] = arity;
      for (const auto& x : free_names({"and", "or", "not"})) {
        auto parts = split_underscore(x);
        if (parts[0] == "forall" || parts[0] == "exists") continue;
        if (!sig.contains(parts[0])) sig[parts[0]] = parts.size() - 1;
      }
      params["signature"] = sig;
    }
  }
  return T::make(params, ms);
}

inline json load_json_file(const std::string& path) { return lang::parse_json_text(lang::read_file(path), path); }

template <class E>
std::vector<typename E::Structure> parse_all(const std::vector<json>& xs, const char* what) {
  std::vector<typename E::Structure> out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    try {
      out.push_back(lang::Traits<E>::parse(xs[i]));
    } catch (const StructureError& e) {
      throw StructureError(std::string(what) + "[" + std::to_string(i) + "]: " + e.what());
    }
  }
  return out;
}

template <class E>
Problem<E> typed_problem(const lang::ProblemFile& pf) {
  auto pos = parse_all<E>(pf.positives, "positives");
  auto neg = parse_all<E>(pf.negatives, "negatives");
  std::vector<typename E::Structure> all = pos;
  all.insert(all.end(), neg.begin(), neg.end());
  E ev = make_evaluator<E>(pf.params, all, pf.grammar_text);
  RegularTreeGrammar g = parse_grammar(pf.grammar_text, ev.alphabet());
  std::vector<Nfta> filters = lang::Traits<E>::filters(ev);
  return Problem<E>{std::move(ev), std::move(pos), std::move(neg), std::move(g), std::move(filters)};
}

template <class E>
std::string show_structure(const E& ev, const typename E::Structure& m) {
  return ev.describe(m, ev.initial(m, Label::Positive).payload);
}

/// Game, converted automaton and reference on one term and example.
template <class E>
bool cross_check(const E& ev, const typename E::Structure& m, const Term& t, bool expected, std::ostream& err,
                 const std::string& where) {
  const bool ref = ev.reference(m, t);
  Twata pos = build_twata(ev, m, Label::Positive);
  const bool game = accepts(pos, t);
  const bool nfta = to_nfta(pos).accepts(t);
  const bool neg = accepts(build_twata(ev, m, Label::Negative), t);
  if (ref == expected && game == ref && nfta == ref && neg == !ref) return true;
  err << "oracle disagreement on " << where << ": reference " << ref << ", game " << game << ", nfta " << nfta
      << ", dual game " << neg << ", expected " << expected << "\n";
  return false;
}

template <class E>
int learn_typed(const lang::ProblemFile& pf, const LearnFlags& flags, std::ostream& out, std::ostream& err) {
  Problem<E> p = typed_problem<E>(pf);
  LearnOptions opts;
  if (flags.max_states) opts.max_states = *flags.max_states;
  if (flags.timeout_seconds)
    opts.timeout = std::chrono::milliseconds(static_cast<long long>(*flags.timeout_seconds * 1000.0));
  SearchTrace trace;
  if (!flags.dot_path.empty()) opts.trace = &trace;
  Solution sol = learn(p, opts);

  if (!flags.dot_path.empty()) {
    std::ofstream dot(flags.dot_path, std::ios::binary);
    if (!dot) throw Error("cannot write " + flags.dot_path);
    dot << trace_to_dot(trace, p.evaluator.alphabet());
  }

  int status = Exit::Ok;
  switch (sol.verdict) {
    case Verdict::Consistent:
      out << to_string(*sol.term) << "\n";
      out << "size " << sol.size() << "\n";
      if constexpr (std::is_same_v<E, lang::CfgEvaluator>)
        out << "grammar " << p.evaluator.grammar_string(p.evaluator.decode(*sol.term)) << "\n";
      break;
    case Verdict::Unrealizable:
      out << "unrealizable\n";
      status = Exit::Unrealizable;
      break;
    case Verdict::ResourceExhausted:
      out << "resource-exhausted\n";
      status = Exit::Exhausted;
      break;
  }
  if (flags.stats) {
    out << "grammar-states " << sol.stats.grammar_states << "\n";
    for (const auto& e : sol.stats.examples)
      out << "example " << (e.positive ? "positive " : "negative ") << e.input_index << " twata-states "
          << e.twata_states << (e.merged ? " merged" : " summaries " + std::to_string(e.summaries)) << "\n";
    out << "product-states " << sol.stats.product_states << "\n";
    out << "hyperedges " << sol.stats.hyperedges << "\n";
    out << "pops " << sol.stats.pops << "\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", sol.stats.seconds);
    err << "time " << buf << "s\n";
  }
  if (flags.oracle && sol.term) {
    bool ok = true;
    for (std::size_t i = 0; i < p.positives.size(); ++i)
      ok &= cross_check(p.evaluator, p.positives[i], *sol.term, true, err, "positives[" + std::to_string(i) + "]");
    for (std::size_t i = 0; i < p.negatives.size(); ++i)
      ok &= cross_check(p.evaluator, p.negatives[i], *sol.term, false, err, "negatives[" + std::to_string(i) + "]");
    if (!ok) return Exit::OracleMismatch;
  }
  return status;
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return Exit::InputError;
  } catch (const lang::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return Exit::InputError;
  }
}

}  // namespace detail

/// `facet learn PROBLEM`: 0 consistent, 1 unrealizable, 2 input error,
/// 3 resource limit hit, 4 oracle disagreement.
inline int cmd_learn(const std::string& problem_path, const LearnFlags& flags, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    lang::ProblemFile pf = lang::load_problem_file(problem_path);
    return lang::dispatch(pf.language, [&]<class E>(E*) { return detail::learn_typed<E>(pf, flags, out, err); });
  });
}

/// `facet eval LANGUAGE STRUCTURE TERM`: prints whether the positive
/// automaton accepts the term.
inline int cmd_eval(const std::string& language, const std::string& structure_path, const std::string& term_text,
                    bool oracle, const std::string& params_text, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    lang::json params = params_text.empty() ? lang::json::object() : lang::parse_json_text(params_text, "--params");
    lang::json sj = detail::load_json_file(structure_path);
    return lang::dispatch(language, [&]<class E>(E*) {
      auto m = lang::Traits<E>::parse(sj);
      E ev = detail::make_evaluator<E>(params, {m}, term_text);
      Term t = parse_term(term_text, ev.alphabet());
      for (const auto& f : lang::Traits<E>::filters(ev))
        if (!f.accepts(t)) throw StructureError("term is not a productive grammar encoding");
      const bool result = accepts(build_twata(ev, m, Label::Positive), t);
      out << (result ? "true" : "false") << "\n";
      if (oracle && !detail::cross_check(ev, m, t, result, err, "the given structure")) return int(Exit::OracleMismatch);
      return int(Exit::Ok);
    });
  });
}

/// `facet check-grammar GRAMMAR LANGUAGE`: parses the grammar against the
/// language alphabet. For cfg it also requires that no non-productive
/// encoding is generated.
inline int cmd_check_grammar(const std::string& grammar_path, const std::string& language,
                             const std::string& params_text, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    lang::json params = params_text.empty() ? lang::json::object() : lang::parse_json_text(params_text, "--params");
    std::string text = lang::read_file(grammar_path);
    return lang::dispatch(language, [&]<class E>(E*) {
      E ev = detail::make_evaluator<E>(params, {}, text);
      RegularTreeGrammar g = parse_grammar(text, ev.alphabet());
      if constexpr (std::is_same_v<E, lang::CfgEvaluator>) {
        Nfta bad = product(grammar_to_nfta(g), lang::nonproductive_checker(ev));
        if (auto w = min_witness(bad)) {
          err << "error: grammar admits a non-productive encoding: " << to_string(w->first) << " ("
              << ev.grammar_string(ev.decode(w->first)) << ")\n";
          return int(Exit::InputError);
        }
      }
      out << "ok " << g.nonterminals().size() << " nonterminals, " << g.productions().size() << " productions\n";
      return int(Exit::Ok);
    });
  });
}

}  // namespace facet::cli
