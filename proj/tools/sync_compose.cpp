// Command-line front end: compose, simulate and check subcommands over JSON
// composition specs.

#include <iostream>

#include "CLI11.hpp"
#include "syncomp/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"synchronous machine composition and LTL checking"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string inputs_path;
  std::size_t steps = 0;
  syncomp::CheckOptions check_options;

  CLI::App* compose = app.add_subcommand("compose", "validate a spec and report the composition");
  compose->add_option("spec", spec_path, "composition spec file")->required();

  CLI::App* simulate = app.add_subcommand("simulate", "replay environment inputs step by step");
  simulate->add_option("spec", spec_path, "composition spec file")->required();
  simulate->add_option("--inputs", inputs_path, "JSON file with environment input tuples")
      ->required();
  simulate->add_option("--steps", steps, "number of rounds to run")->required();

  CLI::App* check = app.add_subcommand("check", "model-check a named formula");
  check->add_option("spec", spec_path, "composition spec file")->required();
  check->add_option("--formula", check_options.formula, "formula name from the spec")
      ->required();
  check->add_option("--max-states", check_options.max_states,
                    "explicit-state budget (default 1000000)");
  check->add_option("--dump-graph", check_options.dump_graph_path,
                    "write the reachable state graph to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? syncomp::exit_ok : syncomp::exit_error;
  }

  if (compose->parsed()) {
    return syncomp::run_compose(spec_path, std::cout, std::cerr);
  }
  if (simulate->parsed()) {
    return syncomp::run_simulate(spec_path, inputs_path, steps, std::cout,
                                 std::cerr);
  }
  return syncomp::run_check(spec_path, check_options, std::cout, std::cerr);
}
