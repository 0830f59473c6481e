#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "syncomp/machine.hpp"

namespace syncomp {

/// An input or output port. Owner 0 denotes the environment (printed "e"),
/// any other value is a 1-based machine index. Slots are 1-based.
struct Port {
  static constexpr std::uint32_t env_owner = 0;

  std::uint32_t owner = env_owner;
  std::uint32_t slot = 1;

  static Port env(std::uint32_t slot) { return Port{env_owner, slot}; }
  static Port machine(std::uint32_t j, std::uint32_t slot) { return Port{j, slot}; }

  bool is_env() const { return owner == env_owner; }

  friend auto operator<=>(const Port&, const Port&) = default;

  std::string str() const;
};

/// Maps every input port to the output port it reads from. Fan-out is
/// expressed by several keys sharing a source; fan-in cannot be expressed.
struct WiringDiagram {
  std::map<Port, Port> src;
};

/// A set of machines (indexed 1..J), an environment boundary, and the wiring
/// connecting them.
struct EnsembleSpec {
  std::vector<MachineDef> machines;
  EnvSignature env;
  WiringDiagram wiring;

  std::size_t machine_count() const { return machines.size(); }
};

enum class IssueKind {
  missing_source,
  dangling_source,
  sort_mismatch,
  env_pass_through,
  unconnected_output,  // warning
};

struct Issue {
  IssueKind kind;
  Port at;
  std::optional<Port> source;
  std::string message;

  std::string str() const;
};

struct ValidationReport {
  std::vector<Issue> errors;
  std::vector<Issue> warnings;

  bool ok() const { return errors.empty(); }
  std::string str() const;
};

struct InvalidSpecError : std::runtime_error {
  explicit InvalidSpecError(ValidationReport r)
      : std::runtime_error("invalid ensemble spec:\n" + r.str()),
        report(std::move(r)) {}

  ValidationReport report;
};

/// Checks totality of the wiring over all input ports, existence of every
/// source, sort compatibility of every mapping, and rejects environment
/// pass-through wires. Unread machine outputs are reported as warnings.
ValidationReport validate(const EnsembleSpec& spec);

/// The machine output ports feeding at least one machine input, in ascending
/// (machine, slot) order. Requires a spec that passed validation.
std::vector<Port> internal_nodes(const EnsembleSpec& spec);

/// Slot-by-slot shape of the composed state: one slot per machine state
/// followed by one latch slot per internal node.
struct StateLayout {
  std::vector<Sort> machine_state_sorts;
  std::vector<std::pair<Port, Sort>> latched;

  std::size_t size() const { return machine_state_sorts.size() + latched.size(); }
};

StateLayout state_layout(const EnsembleSpec& spec);

std::ostream& operator<<(std::ostream& os, const Port& p);

}  // namespace syncomp
