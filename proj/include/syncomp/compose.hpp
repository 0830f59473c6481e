#pragma once

#include <span>

#include "syncomp/wiring.hpp"

namespace syncomp {

/// State of a composed machine: one value per component machine followed by
/// one latched value per internal node (in canonical node order). Structural
/// equality and hashing make these usable as explicit-state identities.
struct ComposedState {
  std::vector<Value> machine_states;
  std::vector<Value> latched;

  std::size_t hash() const;
  std::string str() const;

  friend bool operator==(const ComposedState&, const ComposedState&) = default;
};

struct ComposedStateHash {
  std::size_t operator()(const ComposedState& s) const { return s.hash(); }
};

struct StepResult {
  ComposedState state;
  Value output;  // tuple of the environment-bound values
};

/// The single machine derived from an ensemble: one step runs every component
/// machine once on inputs assembled from the environment tuple and the
/// latched internal-node values, all read from the pre-step state, then
/// commits new states and latches together.
class ComposedMachine {
 public:
  /// Throws InvalidSpecError when the spec does not validate. With
  /// `debug_checks` every step re-validates sorts on the way through.
  explicit ComposedMachine(EnsembleSpec spec, bool debug_checks = false);

  const EnsembleSpec& spec() const { return spec_; }
  const StateLayout& layout() const { return layout_; }
  const std::vector<Port>& nodes() const { return nodes_; }

  // Composition is closed: the result is itself a machine with the
  // environment's outputs as inputs and vice versa.
  const std::vector<Sort>& input_sorts() const { return spec_.env.output_sorts; }
  const std::vector<Sort>& output_sorts() const { return spec_.env.input_sorts; }

  /// Input tuple for machine j (1-based) given the environment tuple and the
  /// pre-step state: environment-sourced slots come from `env_input`,
  /// machine-sourced slots from the latches.
  Value assemble_input(std::uint32_t j, const Value& env_input,
                       const ComposedState& s) const;

  StepResult step(const Value& env_input, const ComposedState& s) const;

  /// Identical to step() but evaluates the component machines in the given
  /// permutation of 0..J-1. Results never depend on the order; this exists to
  /// make that property testable.
  StepResult step_ordered(const Value& env_input, const ComposedState& s,
                          std::span<const std::uint32_t> order) const;

  /// Wraps this composition as an ordinary machine (state encoded as one
  /// tuple), enabling hierarchical re-composition.
  MachineDef as_machine_def(std::string name = "composed") const;

  Value encode_state(const ComposedState& s) const;
  ComposedState decode_state(const Value& v) const;
  Sort state_sort() const;

  bool state_conforms(const ComposedState& s) const;

 private:
  struct Source {
    bool from_env;
    std::uint32_t index;  // env slot (0-based) or latch index
  };

  EnsembleSpec spec_;
  bool debug_checks_;
  std::vector<Port> nodes_;
  StateLayout layout_;
  std::vector<std::vector<Source>> input_sources_;  // per machine, per slot
  // per latch / per environment input: (machine index, output slot), 0-based
  std::vector<std::pair<std::uint32_t, std::uint32_t>> latch_sources_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> env_out_sources_;
};

/// Builds the composed machine for a validated spec.
inline ComposedMachine compose(EnsembleSpec spec, bool debug_checks = false) {
  return ComposedMachine(std::move(spec), debug_checks);
}

std::ostream& operator<<(std::ostream& os, const ComposedState& s);

}  // namespace syncomp
