#pragma once

#include <optional>

#include "syncomp/kripke.hpp"
#include "syncomp/ltl.hpp"

namespace syncomp {

struct NodePos {
  std::uint32_t id = 1;  // >= 1
  std::uint64_t x = 0;
  std::uint64_t y = 0;

  friend bool operator==(const NodePos&, const NodePos&) = default;
};

/// Squared Euclidean distance; all geometry stays in exact integers.
std::uint64_t dist_squared(const NodePos& a, const NodePos& b);

struct WeightedEdge {
  std::uint32_t a = 0;  // a < b
  std::uint32_t b = 0;
  std::uint64_t weight = 0;

  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

/// Simple undirected graph of a node's visible neighborhood, weighted by
/// squared distance.
struct WeightedGraph {
  std::vector<NodePos> vertices;   // ascending by id
  std::vector<WeightedEdge> edges;
};

/// The neighborhood a node distills from one round of hello messages: itself
/// plus every sender within range, with an edge between every vertex pair
/// within range.
WeightedGraph visible_graph(const NodePos& self,
                            std::span<const std::optional<MsgData>> heard,
                            std::uint64_t rmax_squared);

/// Minimum spanning forest by Kruskal's algorithm. Ties break on
/// (weight, smaller id, larger id), so the result is deterministic.
std::vector<WeightedEdge> mst(const WeightedGraph& g);

// Node states live in the universal value model as
// (liveness status, id, x, y, routing table); a failed node collapses to the
// canonical (fail, 0, 0, 0, []).
Sort node_state_sort();
Value live_node_state(std::uint32_t id, std::uint64_t x, std::uint64_t y,
                      std::vector<std::uint32_t> routing);
Value failed_node_state();
bool node_is_failed(const Value& state);
NodePos node_position(const Value& state);
std::span<const std::uint32_t> node_routing(const Value& state);

/// New routing table for a live node: its one-hop neighbors in the minimum
/// spanning tree of the visible graph, ascending. The input tuple carries the
/// other nodes' hello lines followed by the node's status line.
std::vector<std::uint32_t> routing_update(const Value& input, const Value& state,
                                          std::uint64_t rmax_squared);

/// Power needed to reach the furthest routing neighbor (squared), resolved
/// against the scenario positions; 0 with an empty table. Reported as a
/// metric only.
std::uint64_t tx_power_squared(const Value& state,
                               std::span<const NodePos> positions);

/// Next-state half of the node machine: failure is absorbing, a fail status
/// kills the node this round, otherwise the routing table is recomputed.
Value node_next_state(const Value& input, const Value& state,
                      std::uint64_t rmax_squared);

/// Output half: a hello message carrying id and coordinates, or nomsg when
/// failed or failing this round.
Value node_output(const Value& input, const Value& state);

/// The protocol node as a machine with node_count inputs (hello lines from
/// every other node, then the status line) and one hello output.
MachineDef lmst_node_machine(std::uint32_t node_count,
                             std::uint64_t rmax_squared);

/// A ready-to-check network: spec, initial state, environment inputs,
/// propositions and the formula table.
struct LmstScenario {
  std::vector<NodePos> positions;
  std::uint64_t rmax_squared = 0;
  EnsembleSpec spec;
  ComposedState initial;
  std::vector<Value> env_inputs;
  std::map<std::string, FormulaPtr> formulas;
  std::vector<Proposition> props;
};

/// All-to-all network of the given nodes. Node ids must be contiguous from 1;
/// at least two nodes. Every node starts live with an empty routing table and
/// all hello latches empty.
LmstScenario build_scenario(std::vector<NodePos> positions,
                            std::uint64_t rmax_squared);

/// Whether the directed graph of routing entries between live nodes is
/// strongly connected over the live nodes; vacuously true with at most one
/// live node.
bool connected_prop(const ComposedState& s);

bool failed_prop(std::uint32_t id, const ComposedState& s);

/// The named formula table for an n-node network: no-new-failures?, the
/// round-stability implication correct?, and its literal-precedence variant
/// correct-literal?.
std::map<std::string, FormulaPtr> correctness_formulas(std::uint32_t node_count);

void register_lmst_machines(MachineRegistry& registry);

}  // namespace syncomp
