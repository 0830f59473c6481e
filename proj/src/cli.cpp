#include "syncomp/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>

#include "syncomp/modelcheck.hpp"

namespace syncomp {

bool verbose_logging() {
  const char* env = std::getenv("SYNC_COMPOSE_LOG");
  return env != nullptr && env[0] != '\0' && !(env[0] == '0' && env[1] == '\0');
}

namespace {

int report_error(std::ostream& err, const std::string& message) {
  err << "error: " << message << "\n";
  return exit_error;
}

}  // namespace

int run_compose(const std::string& spec_path, std::ostream& out,
                std::ostream& err) {
  SpecBundle bundle;
  try {
    bundle = load_spec(spec_path);
  } catch (const InvalidSpecError& e) {
    out << "spec: " << spec_path << "\n";
    out << "validation: failed\n" << e.report.str();
    return exit_error;
  } catch (const std::exception& e) {
    return report_error(err, e.what());
  }

  out << "spec: " << spec_path << "\n";
  out << "validation: ok\n";
  ValidationReport report = validate(bundle.spec);
  for (const Issue& w : report.warnings) {
    out << "warning: " << w.str() << "\n";
  }

  out << "machines:";
  for (std::size_t j = 0; j < bundle.spec.machines.size(); ++j) {
    out << " " << (j + 1) << ":" << bundle.spec.machines[j].name;
  }
  out << "\n";

  std::vector<Port> nodes = internal_nodes(bundle.spec);
  out << "internal nodes:";
  if (nodes.empty()) out << " none";
  for (const Port& p : nodes) {
    out << " " << p.str();
  }
  out << "\n";

  StateLayout layout = state_layout(bundle.spec);
  out << "state layout (arity " << layout.size() << "):";
  for (const Sort& s : layout.machine_state_sorts) {
    out << " " << s.str();
  }
  for (const auto& [node, sort] : layout.latched) {
    out << " " << node.str() << ":" << sort.str();
  }
  out << "\n";

  ComposedMachine cm = compose(bundle.spec);
  out << "composed signature: " << cm.input_sorts().size() << " inputs, "
      << cm.output_sorts().size() << " outputs\n";
  out << "initial: " << bundle.initial.str() << "\n";
  out << "env inputs: " << bundle.env_inputs.size() << "\n";
  return exit_ok;
}

int run_simulate(const std::string& spec_path, const std::string& inputs_path,
                 std::size_t steps, std::ostream& out, std::ostream& err) {
  try {
    SpecBundle bundle = load_spec(spec_path);
    std::vector<Value> inputs = load_inputs_file(inputs_path);
    if (inputs.size() < steps) {
      return report_error(err, "inputs file provides " +
                                   std::to_string(inputs.size()) +
                                   " tuples but " + std::to_string(steps) +
                                   " steps were requested");
    }
    ComposedMachine cm = compose(bundle.spec, /*debug_checks=*/true);
    ComposedState state = bundle.initial;
    out << "initial: " << state.str() << "\n";
    for (std::size_t i = 0; i < steps; ++i) {
      StepResult result = cm.step(inputs[i], state);
      state = std::move(result.state);
      out << "step " << (i + 1) << ": input " << inputs[i].str() << "\n";
      out << "  state: " << state.str() << "\n";
      out << "  output: " << result.output.str() << "\n";
    }
    return exit_ok;
  } catch (const std::exception& e) {
    return report_error(err, e.what());
  }
}

int run_check(const std::string& spec_path, const CheckOptions& options,
              std::ostream& out, std::ostream& err) {
  try {
    SpecBundle bundle = load_spec(spec_path);
    FormulaPtr formula = expand_formula(bundle.formulas, options.formula);

    ComposedMachine cm = compose(bundle.spec);
    KripkeStructure k = build_state_graph(cm, bundle.env_inputs, bundle.initial,
                                          bundle.props, options.max_states);
    if (!options.dump_graph_path.empty()) {
      std::ofstream dump(options.dump_graph_path);
      if (!dump) {
        return report_error(err, "cannot write " + options.dump_graph_path);
      }
      dump_graph(k, dump);
    }

    Verdict verdict = model_check(k, formula);
    out << "spec: " << spec_path << "\n";
    out << "formula: " << options.formula << " = " << formula->str() << "\n";
    out << "states: " << verdict.stats.kripke_states << "\n";
    if (verbose_logging()) {
      err << "buchi states: " << verdict.stats.buchi_states << "\n";
      err << "product states: " << verdict.stats.product_states << "\n";
      err << "runtime: " << verdict.stats.runtime_ms << " ms\n";
    }
    if (verdict.holds) {
      out << "verdict: HOLDS\n";
      return exit_ok;
    }
    if (!verdict.counterexample ||
        !replay_lasso(k, *verdict.counterexample, formula)) {
      return report_error(err,
                          "internal error: counterexample failed certification");
    }
    out << "verdict: VIOLATED\n";
    out << "counterexample:\n";
    out << format_lasso(k, *verdict.counterexample);
    return exit_violated;
  } catch (const std::exception& e) {
    return report_error(err, e.what());
  }
}

}  // namespace syncomp
