#include "syncomp/compose.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

namespace syncomp {

std::size_t ComposedState::hash() const {
  std::size_t h = 0x2545f4914f6cdd1dULL;
  for (const Value& v : machine_states) h = hash_combine(h, v.hash());
  h = hash_combine(h, 0x9e3779b97f4a7c15ULL);
  for (const Value& v : latched) h = hash_combine(h, v.hash());
  return h;
}

std::string ComposedState::str() const {
  std::string out = "(";
  bool first = true;
  for (const Value& v : machine_states) {
    if (!first) out += ", ";
    out += v.str();
    first = false;
  }
  if (!latched.empty()) {
    out += " ; ";
    first = true;
    for (const Value& v : latched) {
      if (!first) out += ", ";
      out += v.str();
      first = false;
    }
  }
  return out + ")";
}

std::ostream& operator<<(std::ostream& os, const ComposedState& s) {
  return os << s.str();
}

ComposedMachine::ComposedMachine(EnsembleSpec spec, bool debug_checks)
    : spec_(std::move(spec)), debug_checks_(debug_checks) {
  ValidationReport report = validate(spec_);
  if (!report.ok()) {
    throw InvalidSpecError(std::move(report));
  }
  nodes_ = internal_nodes(spec_);
  layout_ = state_layout(spec_);

  std::map<Port, std::uint32_t> latch_index;
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    latch_index[nodes_[i]] = i;
    latch_sources_.emplace_back(nodes_[i].owner - 1, nodes_[i].slot - 1);
  }

  input_sources_.resize(spec_.machine_count());
  for (std::uint32_t j = 1; j <= spec_.machine_count(); ++j) {
    const MachineSignature& sig = spec_.machines[j - 1].sig;
    auto& sources = input_sources_[j - 1];
    sources.reserve(sig.n_inputs());
    for (std::uint32_t n = 1; n <= sig.n_inputs(); ++n) {
      Port from = spec_.wiring.src.at(Port::machine(j, n));
      if (from.is_env()) {
        sources.push_back(Source{true, from.slot - 1});
      } else {
        sources.push_back(Source{false, latch_index.at(from)});
      }
    }
  }

  env_out_sources_.reserve(spec_.env.n_inputs());
  for (std::uint32_t k = 1; k <= spec_.env.n_inputs(); ++k) {
    Port from = spec_.wiring.src.at(Port::env(k));
    env_out_sources_.emplace_back(from.owner - 1, from.slot - 1);
  }
}

bool ComposedMachine::state_conforms(const ComposedState& s) const {
  if (s.machine_states.size() != layout_.machine_state_sorts.size() ||
      s.latched.size() != layout_.latched.size()) {
    return false;
  }
  for (std::size_t i = 0; i < s.machine_states.size(); ++i) {
    if (!s.machine_states[i].conforms(layout_.machine_state_sorts[i])) {
      return false;
    }
  }
  for (std::size_t i = 0; i < s.latched.size(); ++i) {
    if (!s.latched[i].conforms(layout_.latched[i].second)) return false;
  }
  return true;
}

Value ComposedMachine::assemble_input(std::uint32_t j, const Value& env_input,
                                      const ComposedState& s) const {
  const auto& sources = input_sources_.at(j - 1);
  std::vector<Value> slots;
  slots.reserve(sources.size());
  for (const Source& src : sources) {
    if (src.from_env) {
      slots.push_back(project(env_input, src.index + 1));
    } else {
      slots.push_back(s.latched[src.index]);
    }
  }
  return Value::tuple(std::move(slots));
}

StepResult ComposedMachine::step(const Value& env_input,
                                 const ComposedState& s) const {
  std::vector<std::uint32_t> order(spec_.machine_count());
  std::iota(order.begin(), order.end(), 0);
  return step_ordered(env_input, s, order);
}

StepResult ComposedMachine::step_ordered(
    const Value& env_input, const ComposedState& s,
    std::span<const std::uint32_t> order) const {
  const std::size_t machine_count = spec_.machine_count();
  if (order.size() != machine_count) {
    throw std::invalid_argument("evaluation order must cover every machine");
  }
  if (debug_checks_) {
    if (env_input.kind() != ValueKind::tuple ||
        env_input.arity() != input_sorts().size()) {
      throw SortError("composed input must be a tuple of arity " +
                      std::to_string(input_sorts().size()));
    }
    for (std::size_t k = 0; k < input_sorts().size(); ++k) {
      if (!env_input.elems()[k].conforms(input_sorts()[k])) {
        throw SortError("composed input component " + std::to_string(k + 1) +
                        " is ill-sorted: " + env_input.elems()[k].str());
      }
    }
    if (!state_conforms(s)) {
      throw SortError("composed state does not match layout: " + s.str());
    }
  }

  // Phase one: every machine reads only the pre-step state and the fresh
  // environment tuple.
  std::vector<Value> next_states(machine_count);
  std::vector<Value> outputs(machine_count);
  for (std::uint32_t idx : order) {
    Value input = assemble_input(idx + 1, env_input, s);
    auto [next, out] = step_machine(spec_.machines[idx], input,
                                    s.machine_states[idx], debug_checks_);
    next_states[idx] = std::move(next);
    outputs[idx] = std::move(out);
  }

  // Phase two: commit states, latches, and the environment-bound values.
  StepResult result;
  result.state.machine_states = std::move(next_states);
  result.state.latched.reserve(latch_sources_.size());
  for (const auto& [machine, slot] : latch_sources_) {
    result.state.latched.push_back(project(outputs[machine], slot + 1));
  }
  std::vector<Value> env_values;
  env_values.reserve(env_out_sources_.size());
  for (const auto& [machine, slot] : env_out_sources_) {
    env_values.push_back(project(outputs[machine], slot + 1));
  }
  result.output = Value::tuple(std::move(env_values));
  return result;
}

Value ComposedMachine::encode_state(const ComposedState& s) const {
  std::vector<Value> slots;
  slots.reserve(s.machine_states.size() + s.latched.size());
  slots.insert(slots.end(), s.machine_states.begin(), s.machine_states.end());
  slots.insert(slots.end(), s.latched.begin(), s.latched.end());
  return Value::tuple(std::move(slots));
}

ComposedState ComposedMachine::decode_state(const Value& v) const {
  const std::size_t machines = layout_.machine_state_sorts.size();
  const std::size_t latches = layout_.latched.size();
  if (v.kind() != ValueKind::tuple || v.arity() != machines + latches) {
    throw SortError("encoded composed state must be a tuple of arity " +
                    std::to_string(machines + latches));
  }
  ComposedState s;
  s.machine_states.assign(v.elems().begin(), v.elems().begin() + machines);
  s.latched.assign(v.elems().begin() + machines, v.elems().end());
  return s;
}

Sort ComposedMachine::state_sort() const {
  std::vector<Sort> slots = layout_.machine_state_sorts;
  for (const auto& [node, sort] : layout_.latched) {
    slots.push_back(sort);
  }
  return Sort::tuple(std::move(slots));
}

MachineDef ComposedMachine::as_machine_def(std::string name) const {
  MachineDef def;
  def.name = std::move(name);
  def.sig.input_sorts = input_sorts();
  def.sig.state_sort = state_sort();
  def.sig.output_sorts = output_sorts();
  ComposedMachine self = *this;
  def.next_state = [self](const Value& in, const Value& st) {
    return self.encode_state(self.step(in, self.decode_state(st)).state);
  };
  def.output = [self](const Value& in, const Value& st) {
    return self.step(in, self.decode_state(st)).output;
  };
  return def;
}

}  // namespace syncomp
