#pragma once

#include "syncomp/lmst.hpp"

namespace syncomp {

struct SpecFileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Everything a command needs from a composition spec file: the validated
/// ensemble, the initial composed state, the environment input set, the named
/// formula table and the proposition list.
struct SpecBundle {
  EnsembleSpec spec;
  ComposedState initial;
  std::vector<Value> env_inputs;
  std::map<std::string, FormulaPtr> formulas;
  std::vector<Proposition> props;
};

/// The registry backing spec files: the logic gates plus the protocol node.
MachineRegistry builtin_registry();

/// Loads and validates a JSON composition spec. Scenario blocks expand into a
/// full network spec. Throws SpecFileError (parse and schema problems, with
/// location), InvalidSpecError (wiring) or UnknownMachineError.
SpecBundle load_spec(const std::string& path);
SpecBundle load_spec(const std::string& path, const MachineRegistry& registry);

/// Tagged JSON literal to value: booleans and numbers map to boolean/natural,
/// "ok"/"fail"/"nomsg"/"*" to the obvious constants, {"msg":[id,x,y]} and
/// {"ids":[...]} to messages and id lists, arrays to tuples.
Value value_from_json_text(const std::string& text);

/// Parses sort names: unit, boolean, natural, status, message, idList,
/// optional(S), tuple(S1,...,Sn).
Sort parse_sort(const std::string& text);

/// Environment input tuples from a JSON file (an array of tuples).
std::vector<Value> load_inputs_file(const std::string& path);

/// Expands named-formula references (acyclic macros) into a closed formula.
/// Identity entries (name mapped to its own proposition) terminate the
/// expansion; real cycles are an error.
FormulaPtr expand_formula(const std::map<std::string, FormulaPtr>& table,
                          const std::string& name);

}  // namespace syncomp
