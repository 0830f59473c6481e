#include "syncomp/kripke.hpp"

#include <algorithm>
#include <deque>
#include <ostream>
#include <unordered_map>

namespace syncomp {

bool KripkeStructure::has_prop(const std::string& name) const {
  return std::find(prop_names.begin(), prop_names.end(), name) !=
         prop_names.end();
}

std::uint32_t KripkeStructure::prop_index(const std::string& name) const {
  auto it = std::find(prop_names.begin(), prop_names.end(), name);
  if (it == prop_names.end()) {
    throw std::invalid_argument("unknown proposition: " + name);
  }
  return static_cast<std::uint32_t>(it - prop_names.begin());
}

Value nat_to_env_input(std::uint64_t k, std::uint32_t bits) {
  if (bits == 0 || bits >= 64) {
    throw std::invalid_argument("bit width must be in 1..63");
  }
  if (k >= (std::uint64_t{1} << bits)) {
    throw std::out_of_range("failure mask " + std::to_string(k) +
                            " out of range for " + std::to_string(bits) +
                            " bits");
  }
  std::vector<Value> slots;
  slots.reserve(bits);
  for (std::uint32_t i = 0; i < bits; ++i) {
    slots.push_back((k >> i) & 1 ? Value::fail() : Value::ok());
  }
  return Value::tuple(std::move(slots));
}

std::vector<Value> enumerate_env_inputs(std::uint32_t bits) {
  if (bits == 0 || bits > 20) {
    throw std::invalid_argument("enumeration width must be in 1..20");
  }
  std::vector<Value> out;
  out.reserve(std::size_t{1} << bits);
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << bits); ++k) {
    out.push_back(nat_to_env_input(k, bits));
  }
  return out;
}

std::vector<Value> enumerate_bool_inputs(std::uint32_t width) {
  if (width == 0 || width > 20) {
    throw std::invalid_argument("enumeration width must be in 1..20");
  }
  std::vector<Value> out;
  out.reserve(std::size_t{1} << width);
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << width); ++k) {
    std::vector<Value> slots;
    slots.reserve(width);
    for (std::uint32_t i = 0; i < width; ++i) {
      slots.push_back(Value::boolean(((k >> i) & 1) != 0));
    }
    out.push_back(Value::tuple(std::move(slots)));
  }
  return out;
}

std::vector<ComposedState> successor_states(const ComposedMachine& cm,
                                            std::span<const Value> inputs,
                                            const ComposedState& s) {
  std::vector<ComposedState> out;
  for (const Value& x : inputs) {
    ComposedState next = cm.step(x, s).state;
    if (std::find(out.begin(), out.end(), next) == out.end()) {
      out.push_back(std::move(next));
    }
  }
  return out;
}

KripkeStructure build_state_graph(const ComposedMachine& cm,
                                  std::span<const Value> inputs,
                                  const ComposedState& init,
                                  std::span<const Proposition> props,
                                  std::size_t max_states) {
  if (inputs.empty()) {
    throw std::invalid_argument("environment input set must be non-empty");
  }
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    for (std::size_t j = i + 1; j < inputs.size(); ++j) {
      if (inputs[i] == inputs[j]) {
        throw std::invalid_argument("environment input set contains duplicates");
      }
    }
  }
  if (props.size() > 64) {
    throw std::invalid_argument("at most 64 propositions are supported");
  }
  if (max_states == 0) {
    throw std::invalid_argument("state budget must be positive");
  }

  KripkeStructure k;
  for (const Proposition& p : props) {
    k.prop_names.push_back(p.name);
  }

  auto label_of = [&props](const ComposedState& s) {
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < props.size(); ++i) {
      if (props[i].eval(s)) mask |= std::uint64_t{1} << i;
    }
    return mask;
  };

  std::unordered_map<ComposedState, std::uint32_t, ComposedStateHash> index;
  std::deque<std::uint32_t> frontier;
  auto intern = [&](ComposedState s) {
    auto it = index.find(s);
    if (it != index.end()) return it->second;
    if (k.states.size() >= max_states) {
      throw StateBudgetExceeded(max_states);
    }
    std::uint32_t id = static_cast<std::uint32_t>(k.states.size());
    k.labels.push_back(label_of(s));
    index.emplace(s, id);
    k.states.push_back(std::move(s));
    k.successors.emplace_back();
    frontier.push_back(id);
    return id;
  };

  intern(init);
  while (!frontier.empty()) {
    std::uint32_t at = frontier.front();
    frontier.pop_front();
    for (const Value& x : inputs) {
      // Copy: intern() may grow the state vector and invalidate references.
      ComposedState from = k.states[at];
      std::uint32_t to = intern(cm.step(x, from).state);
      auto& adj = k.successors[at];
      if (std::find(adj.begin(), adj.end(), to) == adj.end()) {
        adj.push_back(to);
      }
    }
  }
  return k;
}

void dump_graph(const KripkeStructure& k, std::ostream& os) {
  for (std::size_t i = 0; i < k.states.size(); ++i) {
    os << "#" << i << ": " << k.states[i].str() << " |";
    for (std::size_t p = 0; p < k.prop_names.size(); ++p) {
      if (k.holds(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(p))) {
        os << " " << k.prop_names[p];
      }
    }
    os << "\n";
  }
  for (std::size_t i = 0; i < k.successors.size(); ++i) {
    for (std::uint32_t j : k.successors[i]) {
      os << "#" << i << " -> #" << j << "\n";
    }
  }
}

}  // namespace syncomp
