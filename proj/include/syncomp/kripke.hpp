#pragma once

#include <functional>
#include <iosfwd>

#include "syncomp/compose.hpp"

namespace syncomp {

/// A named state predicate used to label Kripke states. Must be pure.
struct Proposition {
  std::string name;
  std::function<bool(const ComposedState&)> eval;
};

struct StateBudgetExceeded : std::runtime_error {
  explicit StateBudgetExceeded(std::size_t limit)
      : std::runtime_error(
            "state budget exceeded: more than " + std::to_string(limit) +
            " reachable states; the model is too large for explicit "
            "enumeration (raise the limit or shrink the model)"),
        limit(limit) {}

  std::size_t limit;
};

/// Reachable state graph of a composed machine driven by a nondeterministic
/// environment. States are numbered in BFS discovery order, so construction
/// is deterministic. Labels are bitmasks over prop_names (at most 64 props).
struct KripkeStructure {
  std::vector<ComposedState> states;
  std::uint32_t initial = 0;
  std::vector<std::vector<std::uint32_t>> successors;
  std::vector<std::string> prop_names;
  std::vector<std::uint64_t> labels;

  std::size_t size() const { return states.size(); }
  bool has_prop(const std::string& name) const;
  std::uint32_t prop_index(const std::string& name) const;  // throws if absent
  bool holds(std::uint32_t state, std::uint32_t prop) const {
    return (labels[state] >> prop) & 1;
  }
};

/// Status tuple for failure mask k: component i (1-based) is fail exactly
/// when bit i-1 of k is set. Requires k < 2^bits.
Value nat_to_env_input(std::uint64_t k, std::uint32_t bits);

/// All 2^bits status tuples, ascending by mask. Duplicate-free by
/// construction.
std::vector<Value> enumerate_env_inputs(std::uint32_t bits);

/// All 2^width boolean tuples with the same bit convention, for boolean-port
/// compositions.
std::vector<Value> enumerate_bool_inputs(std::uint32_t width);

/// Distinct post-states of s under every environment input, in order of first
/// occurrence.
std::vector<ComposedState> successor_states(const ComposedMachine& cm,
                                            std::span<const Value> inputs,
                                            const ComposedState& s);

/// Breadth-first reachable closure from `init`. Every state is labeled by
/// evaluating all props. Throws StateBudgetExceeded when the graph would grow
/// past `max_states`.
KripkeStructure build_state_graph(const ComposedMachine& cm,
                                  std::span<const Value> inputs,
                                  const ComposedState& init,
                                  std::span<const Proposition> props,
                                  std::size_t max_states = 1'000'000);

/// Debug dump: one `#idx: <state> | labels` line per state, then one
/// `#i -> #j` line per edge.
void dump_graph(const KripkeStructure& k, std::ostream& os);

}  // namespace syncomp
