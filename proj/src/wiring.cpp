#include "syncomp/wiring.hpp"

#include <ostream>
#include <set>
#include <sstream>

namespace syncomp {

std::string Port::str() const {
  std::ostringstream os;
  os << "(";
  if (is_env()) {
    os << "e";
  } else {
    os << owner;
  }
  os << "," << slot << ")";
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Port& p) {
  return os << p.str();
}

std::string Issue::str() const {
  std::ostringstream os;
  switch (kind) {
    case IssueKind::missing_source:
      os << "MissingSource " << at;
      break;
    case IssueKind::dangling_source:
      os << "DanglingSource " << at;
      break;
    case IssueKind::sort_mismatch:
      os << "SortMismatch " << (source ? source->str() : "?") << " -> " << at;
      break;
    case IssueKind::env_pass_through:
      os << "EnvPassThrough " << at;
      break;
    case IssueKind::unconnected_output:
      os << "UnconnectedOutput " << at;
      break;
  }
  if (!message.empty()) {
    os << ": " << message;
  }
  return os.str();
}

std::string ValidationReport::str() const {
  std::ostringstream os;
  for (const Issue& e : errors) os << "error: " << e.str() << "\n";
  for (const Issue& w : warnings) os << "warning: " << w.str() << "\n";
  return os.str();
}

namespace {

// Sort of an output port, or nullopt when the port does not exist.
std::optional<Sort> output_sort(const EnsembleSpec& spec, const Port& p) {
  if (p.is_env()) {
    if (p.slot == 0 || p.slot > spec.env.n_outputs()) return std::nullopt;
    return spec.env.output_sorts[p.slot - 1];
  }
  if (p.owner > spec.machine_count()) return std::nullopt;
  const MachineSignature& sig = spec.machines[p.owner - 1].sig;
  if (p.slot == 0 || p.slot > sig.n_outputs()) return std::nullopt;
  return sig.output_sorts[p.slot - 1];
}

std::optional<Sort> input_sort(const EnsembleSpec& spec, const Port& p) {
  if (p.is_env()) {
    if (p.slot == 0 || p.slot > spec.env.n_inputs()) return std::nullopt;
    return spec.env.input_sorts[p.slot - 1];
  }
  if (p.owner > spec.machine_count()) return std::nullopt;
  const MachineSignature& sig = spec.machines[p.owner - 1].sig;
  if (p.slot == 0 || p.slot > sig.n_inputs()) return std::nullopt;
  return sig.input_sorts[p.slot - 1];
}

}  // namespace

ValidationReport validate(const EnsembleSpec& spec) {
  ValidationReport report;
  auto error = [&report](IssueKind kind, Port at, std::optional<Port> source,
                         std::string message) {
    report.errors.push_back(
        Issue{kind, at, std::move(source), std::move(message)});
  };

  if (spec.machines.empty()) {
    error(IssueKind::missing_source, Port::env(1), std::nullopt,
          "spec must contain at least one machine");
    return report;
  }

  // Totality: every machine input and every environment input needs a source.
  for (std::uint32_t j = 1; j <= spec.machine_count(); ++j) {
    const MachineSignature& sig = spec.machines[j - 1].sig;
    for (std::uint32_t n = 1; n <= sig.n_inputs(); ++n) {
      if (!spec.wiring.src.count(Port::machine(j, n))) {
        error(IssueKind::missing_source, Port::machine(j, n), std::nullopt,
              "input port has no source");
      }
    }
  }
  for (std::uint32_t k = 1; k <= spec.env.n_inputs(); ++k) {
    if (!spec.wiring.src.count(Port::env(k))) {
      error(IssueKind::missing_source, Port::env(k), std::nullopt,
            "environment input has no source");
    }
  }

  for (const auto& [to, from] : spec.wiring.src) {
    std::optional<Sort> dst = input_sort(spec, to);
    if (!dst) {
      error(IssueKind::dangling_source, to, from,
            "mapping destination is not an input port");
      continue;
    }
    if (to.is_env() && from.is_env()) {
      error(IssueKind::env_pass_through, to, from,
            "environment inputs may not read environment outputs");
      continue;
    }
    std::optional<Sort> src = output_sort(spec, from);
    if (!src) {
      error(IssueKind::dangling_source, from, std::nullopt,
            "source is not an output port");
      continue;
    }
    if (!sort_accepts(*dst, *src)) {
      error(IssueKind::sort_mismatch, to, from,
            "source sort " + src->str() + " does not fit input sort " +
                dst->str());
    }
  }

  // Unread machine outputs are legal but usually unintended.
  std::set<Port> used;
  for (const auto& [to, from] : spec.wiring.src) {
    used.insert(from);
  }
  for (std::uint32_t j = 1; j <= spec.machine_count(); ++j) {
    const MachineSignature& sig = spec.machines[j - 1].sig;
    for (std::uint32_t m = 1; m <= sig.n_outputs(); ++m) {
      if (!used.count(Port::machine(j, m))) {
        report.warnings.push_back(Issue{IssueKind::unconnected_output,
                                        Port::machine(j, m), std::nullopt,
                                        "output feeds nothing"});
      }
    }
  }
  return report;
}

std::vector<Port> internal_nodes(const EnsembleSpec& spec) {
  std::set<Port> nodes;
  for (const auto& [to, from] : spec.wiring.src) {
    if (!to.is_env() && !from.is_env()) {
      nodes.insert(from);
    }
  }
  return {nodes.begin(), nodes.end()};
}

StateLayout state_layout(const EnsembleSpec& spec) {
  StateLayout layout;
  for (const MachineDef& m : spec.machines) {
    layout.machine_state_sorts.push_back(m.sig.state_sort);
  }
  for (const Port& node : internal_nodes(spec)) {
    const MachineSignature& sig = spec.machines[node.owner - 1].sig;
    layout.latched.emplace_back(node, sig.output_sorts[node.slot - 1]);
  }
  return layout;
}

}  // namespace syncomp
