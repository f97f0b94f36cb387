#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "facet/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Learn and evaluate expressions of languages given by tree-automaton evaluators"};
  app.require_subcommand(1);

  facet::cli::LearnFlags flags;
  std::string problem;
  auto* learn = app.add_subcommand("learn", "Find a smallest expression consistent with a problem file");
  learn->add_option("PROBLEM", problem, "Problem file (JSON)")->required();
  learn->add_option("--max-states", flags.max_states, "Cap on explored product states");
  learn->add_option("--timeout", flags.timeout_seconds, "Wall-clock limit in seconds");
  learn->add_flag("--stats", flags.stats, "Print automaton and search statistics");
  learn->add_flag("--oracle", flags.oracle, "Cross-check the witness against the reference semantics");
  learn->add_option("--emit-dot", flags.dot_path, "Write the explored product automaton as Graphviz");

  std::string language, structure, term, params;
  bool oracle = false;
  auto* eval = app.add_subcommand("eval", "Evaluate an expression on one structure");
  eval->add_option("LANGUAGE", language, "modal, ctl, regex, ltl, cfg, ratfo or fo")->required();
  eval->add_option("STRUCTURE", structure, "Structure file (JSON)")->required();
  eval->add_option("TERM", term, "Expression in prefix notation")->required();
  eval->add_flag("--oracle", oracle, "Cross-check against the reference semantics");
  eval->add_option("--params", params, "Language parameters as inline JSON");

  std::string grammar, glanguage, gparams;
  auto* check = app.add_subcommand("check-grammar", "Validate a grammar against a language alphabet");
  check->add_option("GRAMMAR", grammar, "Grammar file")->required();
  check->add_option("LANGUAGE", glanguage, "modal, ctl, regex, ltl, cfg, ratfo or fo")->required();
  check->add_option("--params", gparams, "Language parameters as inline JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : facet::cli::Exit::InputError;
  }

  if (learn->parsed()) return facet::cli::cmd_learn(problem, flags, std::cout, std::cerr);
  if (eval->parsed()) return facet::cli::cmd_eval(language, structure, term, oracle, params, std::cout, std::cerr);
  return facet::cli::cmd_check_grammar(grammar, glanguage, gparams, std::cout, std::cerr);
}
