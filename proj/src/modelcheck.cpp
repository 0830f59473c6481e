#include "syncomp/modelcheck.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>
#include <unordered_map>

namespace syncomp {

namespace {

struct MaskedEdge {
  std::uint32_t to;
  std::uint64_t pos_mask;
  std::uint64_t neg_mask;
};

// Guards compiled against the structure's proposition indices.
std::vector<std::vector<MaskedEdge>> compile_guards(const KripkeStructure& k,
                                                    const BuchiAutomaton& ba) {
  std::vector<std::vector<MaskedEdge>> out(ba.size());
  for (std::size_t q = 0; q < ba.size(); ++q) {
    out[q].reserve(ba.edges[q].size());
    for (const BuchiEdge& e : ba.edges[q]) {
      MaskedEdge me{e.to, 0, 0};
      for (const std::string& name : e.pos) {
        me.pos_mask |= std::uint64_t{1} << k.prop_index(name);
      }
      for (const std::string& name : e.neg) {
        me.neg_mask |= std::uint64_t{1} << k.prop_index(name);
      }
      out[q].push_back(me);
    }
  }
  return out;
}

// Word-preserving normalization: shrink the cycle to its primitive period,
// then absorb prefix states that merely repeat the cycle.
void normalize_lasso(Lasso& lasso) {
  auto& cycle = lasso.cycle;
  for (std::size_t period = 1; period <= cycle.size() / 2; ++period) {
    if (cycle.size() % period != 0) continue;
    bool repeats = true;
    for (std::size_t i = period; i < cycle.size() && repeats; ++i) {
      repeats = cycle[i] == cycle[i % period];
    }
    if (repeats) {
      cycle.resize(period);
      break;
    }
  }
  while (!lasso.prefix.empty() && lasso.prefix.back() == cycle.back()) {
    lasso.prefix.pop_back();
    std::rotate(cycle.begin(), cycle.end() - 1, cycle.end());
  }
}

struct ProductSearch {
  const KripkeStructure& k;
  const BuchiAutomaton& ba;
  const std::vector<std::vector<MaskedEdge>>& guards;

  // Product states discovered so far; ids are assigned in discovery order.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pstates;
  std::unordered_map<std::uint64_t, std::uint32_t> ids;
  std::vector<std::vector<std::uint32_t>> succ_cache;
  std::vector<std::uint8_t> color;  // 0 white, 1 cyan (on stack), 2 blue
  std::vector<std::uint8_t> red;
  std::vector<std::uint32_t> blue_path;
  std::vector<std::uint32_t> depth_of;  // valid while cyan

  std::uint32_t intern(std::uint32_t ks, std::uint32_t bs) {
    std::uint64_t key = (std::uint64_t{ks} << 32) | bs;
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    std::uint32_t id = static_cast<std::uint32_t>(pstates.size());
    ids.emplace(key, id);
    pstates.emplace_back(ks, bs);
    succ_cache.emplace_back();
    expanded_.push_back(0);
    color.push_back(0);
    red.push_back(0);
    depth_of.push_back(0);
    return id;
  }

  const std::vector<std::uint32_t>& successors(std::uint32_t id) {
    if (expanded_[id]) return succ_cache[id];
    auto [ks, bs] = pstates[id];
    std::uint64_t label = k.labels[ks];
    // intern() can grow succ_cache, so collect locally before storing.
    std::vector<std::uint32_t> out;
    for (std::uint32_t ks2 : k.successors[ks]) {
      for (const MaskedEdge& e : guards[bs]) {
        if ((label & e.pos_mask) == e.pos_mask && (label & e.neg_mask) == 0) {
          out.push_back(intern(ks2, e.to));
        }
      }
    }
    succ_cache[id] = std::move(out);
    expanded_[id] = 1;
    return succ_cache[id];
  }

  struct Found {
    std::uint32_t seed;
    std::uint32_t target;                  // cyan state hit by the red search
    std::vector<std::uint32_t> red_path;   // seed .. predecessor of target
  };

  std::optional<Found> run(std::uint32_t root) {
    struct Frame {
      std::uint32_t id;
      std::uint32_t next = 0;
    };
    std::vector<Frame> stack;
    color[root] = 1;
    depth_of[root] = 0;
    blue_path.push_back(root);
    stack.push_back(Frame{root});
    while (!stack.empty()) {
      Frame& frame = stack.back();
      const auto& succs = successors(frame.id);
      if (frame.next < succs.size()) {
        std::uint32_t w = succs[frame.next++];
        if (color[w] == 0) {
          color[w] = 1;
          depth_of[w] = static_cast<std::uint32_t>(blue_path.size());
          blue_path.push_back(w);
          stack.push_back(Frame{w});
        }
        continue;
      }
      std::uint32_t v = frame.id;
      if (ba.accepting[pstates[v].second]) {
        if (auto found = red_search(v)) {
          return found;
        }
      }
      color[v] = 2;
      blue_path.pop_back();
      stack.pop_back();
    }
    return std::nullopt;
  }

  // Inner search from an accepting state; any hit on the blue stack closes a
  // cycle through the seed's path.
  std::optional<Found> red_search(std::uint32_t seed) {
    std::unordered_map<std::uint32_t, std::uint32_t> parent;
    std::vector<std::uint32_t> stack{seed};
    while (!stack.empty()) {
      std::uint32_t u = stack.back();
      stack.pop_back();
      for (std::uint32_t w : successors(u)) {
        if (color[w] == 1) {
          Found found;
          found.seed = seed;
          found.target = w;
          for (std::uint32_t at = u; at != seed; at = parent.at(at)) {
            found.red_path.push_back(at);
          }
          found.red_path.push_back(seed);
          std::reverse(found.red_path.begin(), found.red_path.end());
          return found;
        }
        if (!red[w]) {
          red[w] = 1;
          parent.emplace(w, u);
          stack.push_back(w);
        }
      }
    }
    return std::nullopt;
  }

 private:
  std::vector<std::uint8_t> expanded_;
};

}  // namespace

std::vector<PropSet> lasso_labels(const KripkeStructure& k,
                                  std::span<const std::uint32_t> states) {
  std::vector<PropSet> out;
  out.reserve(states.size());
  for (std::uint32_t s : states) {
    PropSet set;
    for (std::size_t p = 0; p < k.prop_names.size(); ++p) {
      if (k.holds(s, static_cast<std::uint32_t>(p))) {
        set.insert(k.prop_names[p]);
      }
    }
    out.push_back(std::move(set));
  }
  return out;
}

Verdict model_check(const KripkeStructure& k, const FormulaPtr& f) {
  auto started = std::chrono::steady_clock::now();
  for (const std::string& name : collect_props(f)) {
    k.prop_index(name);  // throws for unknown propositions
  }
  if (k.size() == 0) {
    throw std::invalid_argument("cannot check an empty structure");
  }

  BuchiAutomaton ba = to_buchi(to_nnf(Formula::negation(f)));
  Verdict verdict;
  verdict.stats.kripke_states = k.size();
  verdict.stats.buchi_states = ba.size();

  auto finish = [&](bool holds, std::optional<Lasso> cx) {
    verdict.holds = holds;
    verdict.counterexample = std::move(cx);
    verdict.stats.runtime_ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - started)
            .count();
    return verdict;
  };

  if (ba.initial.empty()) {
    return finish(true, std::nullopt);
  }

  auto guards = compile_guards(k, ba);
  ProductSearch search{k, ba, guards};
  std::optional<ProductSearch::Found> found;
  for (std::uint32_t q0 : ba.initial) {
    std::uint32_t root = search.intern(k.initial, q0);
    if (search.color[root] == 0) {
      found = search.run(root);
      if (found) break;
    }
  }
  verdict.stats.product_states = search.pstates.size();
  if (!found) {
    return finish(true, std::nullopt);
  }

  // Product lasso: blue path up to the cyan target, then the blue segment
  // target..seed, then the red detour back to the target.
  Lasso lasso;
  std::uint32_t cut = search.depth_of[found->target];
  for (std::uint32_t i = 0; i < cut; ++i) {
    lasso.prefix.push_back(search.pstates[search.blue_path[i]].first);
  }
  for (std::uint32_t i = cut; i < search.blue_path.size(); ++i) {
    lasso.cycle.push_back(search.pstates[search.blue_path[i]].first);
  }
  for (std::size_t i = 1; i < found->red_path.size(); ++i) {
    lasso.cycle.push_back(search.pstates[found->red_path[i]].first);
  }
  normalize_lasso(lasso);
  return finish(false, std::move(lasso));
}

bool replay_lasso(const KripkeStructure& k, const Lasso& lasso,
                  const FormulaPtr& f) {
  if (lasso.cycle.empty()) return false;
  std::vector<std::uint32_t> run = lasso.prefix;
  run.insert(run.end(), lasso.cycle.begin(), lasso.cycle.end());
  for (std::uint32_t s : run) {
    if (s >= k.size()) return false;
  }
  if (run.front() != k.initial) return false;
  auto has_edge = [&k](std::uint32_t from, std::uint32_t to) {
    const auto& adj = k.successors[from];
    return std::find(adj.begin(), adj.end(), to) != adj.end();
  };
  for (std::size_t i = 0; i + 1 < run.size(); ++i) {
    if (!has_edge(run[i], run[i + 1])) return false;
  }
  if (!has_edge(run.back(), lasso.cycle.front())) return false;

  std::vector<PropSet> prefix_labels = lasso_labels(k, lasso.prefix);
  std::vector<PropSet> cycle_labels = lasso_labels(k, lasso.cycle);
  return eval_on_lasso(Formula::negation(f), prefix_labels, cycle_labels);
}

std::string format_lasso(const KripkeStructure& k, const Lasso& lasso) {
  std::ostringstream os;
  os << "prefix:";
  for (std::uint32_t s : lasso.prefix) os << " s" << s;
  os << " / cycle:";
  for (std::uint32_t s : lasso.cycle) os << " s" << s;
  os << "\n";
  std::vector<std::uint32_t> seen;
  auto describe = [&](std::uint32_t s) {
    if (std::find(seen.begin(), seen.end(), s) != seen.end()) return;
    seen.push_back(s);
    os << "s" << s << ": " << k.states[s].str() << " |";
    for (std::size_t p = 0; p < k.prop_names.size(); ++p) {
      if (k.holds(s, static_cast<std::uint32_t>(p))) {
        os << " " << k.prop_names[p];
      }
    }
    os << "\n";
  };
  for (std::uint32_t s : lasso.prefix) describe(s);
  for (std::uint32_t s : lasso.cycle) describe(s);
  return os.str();
}

}  // namespace syncomp
