#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "syncomp/value.hpp"

namespace syncomp {

struct MachineSignature {
  std::vector<Sort> input_sorts;   // n >= 1
  Sort state_sort;
  std::vector<Sort> output_sorts;  // m >= 1

  std::size_t n_inputs() const { return input_sorts.size(); }
  std::size_t n_outputs() const { return output_sorts.size(); }
};

using TransitionFn = std::function<Value(const Value& input, const Value& state)>;

/// A synchronous machine: per round it consumes one input tuple and, from the
/// current state, produces the next state and one output tuple. Both halves
/// must be pure; definitions are immutable once built.
struct MachineDef {
  std::string name;
  MachineSignature sig;
  TransitionFn next_state;  // (input tuple, state) -> state'
  TransitionFn output;      // (input tuple, state) -> output tuple
};

/// One synchronous step of a single machine. With `check_sorts`, input and
/// state are validated against the signature first and the results after.
std::pair<Value, Value> step_machine(const MachineDef& m, const Value& input,
                                     const Value& state,
                                     bool check_sorts = false);

/// The boundary of a composition: input_sorts describe the values flowing TO
/// the environment (n_e of them), output_sorts the values it feeds back
/// (m_e of them).
struct EnvSignature {
  std::vector<Sort> input_sorts;
  std::vector<Sort> output_sorts;

  std::size_t n_inputs() const { return input_sorts.size(); }
  std::size_t n_outputs() const { return output_sorts.size(); }
};

// Stateless gates used by the circuit examples.
MachineDef make_xor2();
MachineDef make_and2();

/// Single-port machine whose output equals its current input; state is unit.
MachineDef make_identity(Sort value_sort);

using MachineParams = std::map<std::string, std::uint64_t>;
using MachineFactory = std::function<MachineDef(const MachineParams&)>;

struct UnknownMachineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Name -> factory table so spec files can reference machine kinds.
class MachineRegistry {
 public:
  void add(std::string name, MachineFactory factory);
  bool contains(const std::string& name) const;
  MachineDef make(const std::string& name, const MachineParams& params) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, MachineFactory> factories_;
};

/// Registers the logic gates (xor2, and2).
void register_gates(MachineRegistry& registry);

}  // namespace syncomp
