#include "syncomp/lmst.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

namespace syncomp {

std::uint64_t dist_squared(const NodePos& a, const NodePos& b) {
  std::uint64_t dx = a.x > b.x ? a.x - b.x : b.x - a.x;
  std::uint64_t dy = a.y > b.y ? a.y - b.y : b.y - a.y;
  return dx * dx + dy * dy;
}

WeightedGraph visible_graph(const NodePos& self,
                            std::span<const std::optional<MsgData>> heard,
                            std::uint64_t rmax_squared) {
  WeightedGraph g;
  g.vertices.push_back(self);
  for (const std::optional<MsgData>& m : heard) {
    if (!m || m->id == self.id) continue;
    NodePos sender{m->id, m->x, m->y};
    if (dist_squared(self, sender) <= rmax_squared) {
      g.vertices.push_back(sender);
    }
  }
  std::sort(g.vertices.begin(), g.vertices.end(),
            [](const NodePos& a, const NodePos& b) { return a.id < b.id; });
  g.vertices.erase(std::unique(g.vertices.begin(), g.vertices.end(),
                               [](const NodePos& a, const NodePos& b) {
                                 return a.id == b.id;
                               }),
                   g.vertices.end());
  for (std::size_t i = 0; i < g.vertices.size(); ++i) {
    for (std::size_t j = i + 1; j < g.vertices.size(); ++j) {
      std::uint64_t w = dist_squared(g.vertices[i], g.vertices[j]);
      if (w <= rmax_squared) {
        g.edges.push_back(
            WeightedEdge{g.vertices[i].id, g.vertices[j].id, w});
      }
    }
  }
  return g;
}

namespace {

struct UnionFind {
  std::vector<std::uint32_t> parent;

  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }

  std::uint32_t find(std::uint32_t v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  }

  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

}  // namespace

std::vector<WeightedEdge> mst(const WeightedGraph& g) {
  std::vector<WeightedEdge> edges = g.edges;
  for (WeightedEdge& e : edges) {
    if (e.a > e.b) std::swap(e.a, e.b);
  }
  std::sort(edges.begin(), edges.end(),
            [](const WeightedEdge& x, const WeightedEdge& y) {
              return std::tie(x.weight, x.a, x.b) < std::tie(y.weight, y.a, y.b);
            });

  std::map<std::uint32_t, std::uint32_t> index;
  for (const NodePos& v : g.vertices) {
    index.emplace(v.id, static_cast<std::uint32_t>(index.size()));
  }
  UnionFind uf(index.size());
  std::vector<WeightedEdge> out;
  for (const WeightedEdge& e : edges) {
    if (uf.unite(index.at(e.a), index.at(e.b))) {
      out.push_back(e);
    }
  }
  return out;
}

Sort node_state_sort() {
  return Sort::tuple({Sort::status(), Sort::natural(), Sort::natural(),
                      Sort::natural(), Sort::id_list()});
}

Value live_node_state(std::uint32_t id, std::uint64_t x, std::uint64_t y,
                      std::vector<std::uint32_t> routing) {
  if (id == 0) {
    throw SortError("node ids must be >= 1");
  }
  return Value::tuple({Value::ok(), Value::nat(id), Value::nat(x), Value::nat(y),
                       Value::id_list(std::move(routing))});
}

Value failed_node_state() {
  return Value::tuple({Value::fail(), Value::nat(0), Value::nat(0), Value::nat(0),
                       Value::id_list({})});
}

bool node_is_failed(const Value& state) {
  return project(state, 1).as_status() == Status::fail;
}

NodePos node_position(const Value& state) {
  return NodePos{static_cast<std::uint32_t>(project(state, 2).as_nat()),
                 project(state, 3).as_nat(), project(state, 4).as_nat()};
}

std::span<const std::uint32_t> node_routing(const Value& state) {
  return project(state, 5).ids();
}

namespace {

std::vector<std::optional<MsgData>> heard_from_input(const Value& input) {
  std::vector<std::optional<MsgData>> heard;
  heard.reserve(input.arity() - 1);
  for (std::size_t i = 1; i < input.arity(); ++i) {
    const Value& line = input.elems()[i - 1];
    if (line.kind() == ValueKind::message) {
      heard.push_back(line.as_msg());
    } else {
      heard.push_back(std::nullopt);
    }
  }
  return heard;
}

Status status_line(const Value& input) {
  return project(input, input.arity()).as_status();
}

}  // namespace

std::vector<std::uint32_t> routing_update(const Value& input, const Value& state,
                                          std::uint64_t rmax_squared) {
  if (node_is_failed(state)) {
    throw SortError("routing update on a failed node");
  }
  NodePos self = node_position(state);
  std::vector<std::optional<MsgData>> heard = heard_from_input(input);
  WeightedGraph g = visible_graph(self, heard, rmax_squared);
  std::vector<std::uint32_t> routing;
  for (const WeightedEdge& e : mst(g)) {
    if (e.a == self.id) routing.push_back(e.b);
    if (e.b == self.id) routing.push_back(e.a);
  }
  std::sort(routing.begin(), routing.end());
  return routing;
}

std::uint64_t tx_power_squared(const Value& state,
                               std::span<const NodePos> positions) {
  if (node_is_failed(state)) return 0;
  NodePos self = node_position(state);
  std::uint64_t power = 0;
  for (std::uint32_t id : node_routing(state)) {
    auto it = std::find_if(positions.begin(), positions.end(),
                           [id](const NodePos& p) { return p.id == id; });
    if (it == positions.end()) {
      throw std::invalid_argument("routing id " + std::to_string(id) +
                                  " has no known position");
    }
    power = std::max(power, dist_squared(self, *it));
  }
  return power;
}

Value node_next_state(const Value& input, const Value& state,
                      std::uint64_t rmax_squared) {
  if (node_is_failed(state)) {
    return state;
  }
  if (status_line(input) == Status::fail) {
    return failed_node_state();
  }
  NodePos self = node_position(state);
  return live_node_state(self.id, self.x, self.y,
                         routing_update(input, state, rmax_squared));
}

Value node_output(const Value& input, const Value& state) {
  if (node_is_failed(state) || status_line(input) == Status::fail) {
    return Value::tuple({Value::nomsg()});
  }
  NodePos self = node_position(state);
  return Value::tuple({Value::msg(self.id, self.x, self.y)});
}

MachineDef lmst_node_machine(std::uint32_t node_count,
                             std::uint64_t rmax_squared) {
  if (node_count < 2) {
    throw std::invalid_argument("a network needs at least two nodes");
  }
  MachineDef def;
  def.name = "lmst-node";
  for (std::uint32_t i = 0; i + 1 < node_count; ++i) {
    def.sig.input_sorts.push_back(Sort::optional(Sort::message()));
  }
  def.sig.input_sorts.push_back(Sort::status());
  def.sig.state_sort = node_state_sort();
  def.sig.output_sorts = {Sort::optional(Sort::message())};
  def.next_state = [rmax_squared](const Value& in, const Value& st) {
    return node_next_state(in, st, rmax_squared);
  };
  def.output = [](const Value& in, const Value& st) {
    return node_output(in, st);
  };
  return def;
}

std::map<std::string, FormulaPtr> correctness_formulas(std::uint32_t node_count) {
  if (node_count < 2) {
    throw std::invalid_argument("a network needs at least two nodes");
  }
  auto failed_name = [](std::uint32_t i) {
    return "failed?(" + std::to_string(i) + ")";
  };
  FormulaPtr stable;
  for (std::uint32_t i = 1; i <= node_count; ++i) {
    FormulaPtr clause = Formula::iff(Formula::prop(failed_name(i)),
                                     Formula::next(Formula::prop(failed_name(i))));
    stable = stable ? Formula::conj(std::move(stable), std::move(clause))
                    : std::move(clause);
  }

  std::map<std::string, FormulaPtr> table;
  table["no-new-failures?"] = stable;
  table["correct?"] = Formula::next(Formula::always(
      Formula::implies(Formula::prop("no-new-failures?"),
                       Formula::next(Formula::prop("connected?")))));
  table["correct-literal?"] = Formula::next(
      Formula::implies(Formula::always(Formula::prop("no-new-failures?")),
                       Formula::next(Formula::prop("connected?"))));
  return table;
}

bool failed_prop(std::uint32_t id, const ComposedState& s) {
  if (id == 0 || id > s.machine_states.size()) {
    throw std::out_of_range("node id out of range");
  }
  return node_is_failed(s.machine_states[id - 1]);
}

bool connected_prop(const ComposedState& s) {
  const std::size_t n = s.machine_states.size();
  std::vector<std::uint32_t> live;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (!node_is_failed(s.machine_states[i])) live.push_back(i + 1);
  }
  if (live.size() <= 1) return true;

  auto is_live = [&](std::uint32_t id) {
    return std::find(live.begin(), live.end(), id) != live.end();
  };
  // Directed edges: j -> r for every live r in live j's routing table.
  auto forward = [&](std::uint32_t id) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t r : node_routing(s.machine_states[id - 1])) {
      if (is_live(r)) out.push_back(r);
    }
    return out;
  };
  auto backward = [&](std::uint32_t id) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t j : live) {
      for (std::uint32_t r : node_routing(s.machine_states[j - 1])) {
        if (r == id) out.push_back(j);
      }
    }
    return out;
  };
  auto reaches_all = [&](auto&& neighbors) {
    std::set<std::uint32_t> seen{live.front()};
    std::vector<std::uint32_t> stack{live.front()};
    while (!stack.empty()) {
      std::uint32_t at = stack.back();
      stack.pop_back();
      for (std::uint32_t next : neighbors(at)) {
        if (seen.insert(next).second) stack.push_back(next);
      }
    }
    return seen.size() == live.size();
  };
  // Strongly connected over the live set: one live node reaches every other
  // and is reached by every other.
  return reaches_all(forward) && reaches_all(backward);
}

LmstScenario build_scenario(std::vector<NodePos> positions,
                            std::uint64_t rmax_squared) {
  const std::uint32_t n = static_cast<std::uint32_t>(positions.size());
  if (n < 2) {
    throw std::invalid_argument("a network needs at least two nodes");
  }
  std::sort(positions.begin(), positions.end(),
            [](const NodePos& a, const NodePos& b) { return a.id < b.id; });
  for (std::uint32_t i = 0; i < n; ++i) {
    if (positions[i].id != i + 1) {
      throw std::invalid_argument("node ids must be contiguous from 1");
    }
  }

  LmstScenario sc;
  sc.positions = positions;
  sc.rmax_squared = rmax_squared;

  for (std::uint32_t j = 0; j < n; ++j) {
    sc.spec.machines.push_back(lmst_node_machine(n, rmax_squared));
  }
  sc.spec.env.input_sorts = {Sort::optional(Sort::message())};
  sc.spec.env.output_sorts.assign(n, Sort::status());

  // Hello lines from the other nodes in ascending id order, then the status
  // line from the environment; the environment reads node 1's hello output.
  for (std::uint32_t j = 1; j <= n; ++j) {
    std::uint32_t slot = 1;
    for (std::uint32_t other = 1; other <= n; ++other) {
      if (other == j) continue;
      sc.spec.wiring.src[Port::machine(j, slot++)] = Port::machine(other, 1);
    }
    sc.spec.wiring.src[Port::machine(j, n)] = Port::env(j);
  }
  sc.spec.wiring.src[Port::env(1)] = Port::machine(1, 1);

  for (const NodePos& p : positions) {
    sc.initial.machine_states.push_back(live_node_state(p.id, p.x, p.y, {}));
  }
  sc.initial.latched.assign(n, Value::nomsg());

  sc.env_inputs = enumerate_env_inputs(n);

  for (std::uint32_t i = 1; i <= n; ++i) {
    std::string name = "failed?(" + std::to_string(i) + ")";
    sc.props.push_back(Proposition{
        name, [i](const ComposedState& s) { return failed_prop(i, s); }});
  }
  sc.props.push_back(Proposition{
      "connected?", [](const ComposedState& s) { return connected_prop(s); }});

  sc.formulas = correctness_formulas(n);
  sc.formulas["always-connected?"] =
      Formula::next(Formula::always(Formula::prop("connected?")));
  for (const Proposition& p : sc.props) {
    sc.formulas.emplace(p.name, Formula::prop(p.name));
  }
  return sc;
}

void register_lmst_machines(MachineRegistry& registry) {
  registry.add("lmst-node", [](const MachineParams& params) {
    auto nodes = params.find("nodes");
    auto range = params.find("rmaxSquared");
    if (nodes == params.end() || range == params.end()) {
      throw std::invalid_argument(
          "lmst-node needs parameters nodes and rmaxSquared");
    }
    return lmst_node_machine(static_cast<std::uint32_t>(nodes->second),
                             range->second);
  });
}

}  // namespace syncomp
