#include "syncomp/buchi.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace syncomp {

namespace {

struct PtrLess {
  bool operator()(const FormulaPtr& a, const FormulaPtr& b) const {
    return compare(*a, *b) < 0;
  }
};

// Interns structurally equal subformulas so tableau nodes can hold plain int
// sets with a canonical order.
struct Pool {
  std::vector<FormulaPtr> by_id;
  std::map<FormulaPtr, int, PtrLess> ids;

  int intern(const FormulaPtr& f) {
    auto it = ids.find(f);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(by_id.size());
    by_id.push_back(f);
    ids.emplace(f, id);
    return id;
  }

  const Formula& at(int id) const { return *by_id[id]; }
  const FormulaPtr& ptr(int id) const { return by_id[id]; }
};

struct Tentative {
  std::set<int> incoming;  // graph node ids; 0 is the virtual initial state
  std::set<int> news, olds, nexts;
};

struct GraphNode {
  std::set<int> incoming;
  std::set<int> olds, nexts;
};

// Identifier of the literal contradicting `id`, or -1 when `id` is not a
// literal.
int contradiction_of(Pool& pool, int id) {
  const Formula& f = pool.at(id);
  if (f.op() == LtlOp::prop) {
    return pool.intern(Formula::negation(pool.ptr(id)));
  }
  if (f.op() == LtlOp::negation) {
    return pool.intern(f.lhs());
  }
  return -1;
}

// Classic tableau expansion: processes obligation sets, splitting on
// disjunctive forms and pushing next-time obligations, merging nodes with
// identical processed/next sets.
std::vector<GraphNode> expand_graph(Pool& pool, int root) {
  std::vector<GraphNode> nodes;  // node ids are offset by 1 (0 = init marker)
  std::vector<Tentative> work;

  Tentative first;
  first.incoming.insert(0);
  first.news.insert(root);
  work.push_back(std::move(first));

  while (!work.empty()) {
    Tentative cur = std::move(work.back());
    work.pop_back();

    if (cur.news.empty()) {
      auto same = std::find_if(nodes.begin(), nodes.end(), [&](const GraphNode& n) {
        return n.olds == cur.olds && n.nexts == cur.nexts;
      });
      if (same != nodes.end()) {
        same->incoming.insert(cur.incoming.begin(), cur.incoming.end());
        continue;
      }
      int id = static_cast<int>(nodes.size()) + 1;
      nodes.push_back(GraphNode{cur.incoming, cur.olds, cur.nexts});
      Tentative succ;
      succ.incoming.insert(id);
      succ.news = cur.nexts;
      work.push_back(std::move(succ));
      continue;
    }

    int fid = *cur.news.begin();
    cur.news.erase(cur.news.begin());
    const Formula& f = pool.at(fid);

    if (cur.olds.count(fid)) {
      work.push_back(std::move(cur));
      continue;
    }

    switch (f.op()) {
      case LtlOp::tru:
        work.push_back(std::move(cur));
        break;
      case LtlOp::fls:
        break;  // inconsistent node
      case LtlOp::prop:
      case LtlOp::negation: {
        if (f.op() == LtlOp::negation && f.lhs()->op() != LtlOp::prop) {
          throw std::invalid_argument(
              "tableau requires negation normal form, got " + f.str());
        }
        int contra = contradiction_of(pool, fid);
        if (contra >= 0 && cur.olds.count(contra)) {
          break;  // p and !p together: drop the node
        }
        cur.olds.insert(fid);
        work.push_back(std::move(cur));
        break;
      }
      case LtlOp::conj: {
        cur.olds.insert(fid);
        cur.news.insert(pool.intern(f.lhs()));
        cur.news.insert(pool.intern(f.rhs()));
        work.push_back(std::move(cur));
        break;
      }
      case LtlOp::disj: {
        cur.olds.insert(fid);
        Tentative right = cur;
        cur.news.insert(pool.intern(f.lhs()));
        right.news.insert(pool.intern(f.rhs()));
        work.push_back(std::move(cur));
        work.push_back(std::move(right));
        break;
      }
      case LtlOp::next: {
        cur.olds.insert(fid);
        cur.nexts.insert(pool.intern(f.lhs()));
        work.push_back(std::move(cur));
        break;
      }
      case LtlOp::until: {
        cur.olds.insert(fid);
        Tentative now = cur;
        cur.news.insert(pool.intern(f.lhs()));
        cur.nexts.insert(fid);
        now.news.insert(pool.intern(f.rhs()));
        work.push_back(std::move(cur));
        work.push_back(std::move(now));
        break;
      }
      case LtlOp::release: {
        cur.olds.insert(fid);
        Tentative both = cur;
        cur.news.insert(pool.intern(f.rhs()));
        cur.nexts.insert(fid);
        both.news.insert(pool.intern(f.lhs()));
        both.news.insert(pool.intern(f.rhs()));
        work.push_back(std::move(cur));
        work.push_back(std::move(both));
        break;
      }
      case LtlOp::always: {
        cur.olds.insert(fid);
        cur.news.insert(pool.intern(f.lhs()));
        cur.nexts.insert(fid);
        work.push_back(std::move(cur));
        break;
      }
      case LtlOp::eventually: {
        cur.olds.insert(fid);
        Tentative now = cur;
        cur.nexts.insert(fid);
        now.news.insert(pool.intern(f.lhs()));
        work.push_back(std::move(cur));
        work.push_back(std::move(now));
        break;
      }
      default:
        throw std::invalid_argument(
            "tableau requires negation normal form, got " + f.str());
    }
  }
  return nodes;
}

struct Generalized {
  BuchiAutomaton ba;
  std::vector<std::vector<bool>> accept_sets;  // one membership vector each
};

Generalized build_generalized(Pool& pool, const std::vector<GraphNode>& nodes) {
  Generalized g;
  const std::size_t count = nodes.size() + 1;  // state 0 is the initial state
  g.ba.edges.resize(count);
  g.ba.initial = {0};
  g.ba.accepting.assign(count, false);

  auto guard_of = [&pool](const GraphNode& n) {
    std::pair<std::vector<std::string>, std::vector<std::string>> guard;
    for (int id : n.olds) {
      const Formula& f = pool.at(id);
      if (f.op() == LtlOp::prop) {
        guard.first.push_back(f.prop_name());
      } else if (f.op() == LtlOp::negation) {
        guard.second.push_back(f.lhs()->prop_name());
      }
    }
    std::sort(guard.first.begin(), guard.first.end());
    std::sort(guard.second.begin(), guard.second.end());
    return guard;
  };

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const GraphNode& n = nodes[i];
    auto [pos, neg] = guard_of(n);
    for (int from : n.incoming) {
      g.ba.edges[from].push_back(
          BuchiEdge{static_cast<std::uint32_t>(i + 1), pos, neg});
    }
  }

  // One acceptance set per until-type subformula: states that either dropped
  // the obligation or already satisfy its right-hand side.
  std::vector<int> until_ids;
  for (std::size_t fid = 0; fid < pool.by_id.size(); ++fid) {
    LtlOp op = pool.at(static_cast<int>(fid)).op();
    if (op == LtlOp::until || op == LtlOp::eventually) {
      until_ids.push_back(static_cast<int>(fid));
    }
  }
  for (int fid : until_ids) {
    const Formula& f = pool.at(fid);
    int sat = pool.intern(f.op() == LtlOp::until ? f.rhs() : f.lhs());
    std::vector<bool> member(count, false);
    member[0] = true;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      member[i + 1] =
          !nodes[i].olds.count(fid) || nodes[i].olds.count(sat) != 0;
    }
    g.accept_sets.push_back(std::move(member));
  }
  return g;
}

BuchiAutomaton degeneralize(const Generalized& g) {
  const std::size_t k = g.accept_sets.size();
  BuchiAutomaton out;
  if (k == 0) {
    out = g.ba;
    out.accepting.assign(out.size(), true);
    return out;
  }
  if (k == 1) {
    out = g.ba;
    for (std::size_t i = 0; i < out.size(); ++i) {
      out.accepting[i] = g.accept_sets[0][i];
    }
    return out;
  }

  // Counter product: level advances when leaving a state of the level's set;
  // accepting when sitting at level 0 inside set 0.
  const std::size_t base = g.ba.size();
  auto pack = [base](std::size_t q, std::size_t level) { return level * base + q; };
  out.edges.resize(base * k);
  out.accepting.assign(base * k, false);
  for (std::size_t level = 0; level < k; ++level) {
    for (std::size_t q = 0; q < base; ++q) {
      std::size_t next_level = g.accept_sets[level][q] ? (level + 1) % k : level;
      for (const BuchiEdge& e : g.ba.edges[q]) {
        out.edges[pack(q, level)].push_back(
            BuchiEdge{static_cast<std::uint32_t>(pack(e.to, next_level)),
                      e.pos, e.neg});
      }
      out.accepting[pack(q, level)] = level == 0 && g.accept_sets[0][q];
    }
  }
  for (std::uint32_t q0 : g.ba.initial) {
    out.initial.push_back(static_cast<std::uint32_t>(pack(q0, 0)));
  }
  return out;
}

// Drops states unreachable from the initial set and states with no outgoing
// edges (iteratively); both preserve the language.
BuchiAutomaton trim(const BuchiAutomaton& ba) {
  const std::size_t n = ba.size();
  std::vector<bool> alive(n, true);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t q = 0; q < n; ++q) {
      if (!alive[q]) continue;
      bool any = false;
      for (const BuchiEdge& e : ba.edges[q]) {
        if (alive[e.to]) {
          any = true;
          break;
        }
      }
      if (!any) {
        alive[q] = false;
        changed = true;
      }
    }
  }

  std::vector<bool> reach(n, false);
  std::vector<std::uint32_t> stack;
  for (std::uint32_t q0 : ba.initial) {
    if (alive[q0] && !reach[q0]) {
      reach[q0] = true;
      stack.push_back(q0);
    }
  }
  while (!stack.empty()) {
    std::uint32_t q = stack.back();
    stack.pop_back();
    for (const BuchiEdge& e : ba.edges[q]) {
      if (alive[e.to] && !reach[e.to]) {
        reach[e.to] = true;
        stack.push_back(e.to);
      }
    }
  }

  std::vector<std::uint32_t> remap(n, UINT32_MAX);
  BuchiAutomaton out;
  for (std::size_t q = 0; q < n; ++q) {
    if (reach[q]) {
      remap[q] = static_cast<std::uint32_t>(out.edges.size());
      out.edges.emplace_back();
      out.accepting.push_back(ba.accepting[q]);
    }
  }
  for (std::size_t q = 0; q < n; ++q) {
    if (!reach[q]) continue;
    for (const BuchiEdge& e : ba.edges[q]) {
      if (reach[e.to]) {
        out.edges[remap[q]].push_back(BuchiEdge{remap[e.to], e.pos, e.neg});
      }
    }
  }
  for (std::uint32_t q0 : ba.initial) {
    if (q0 < n && remap[q0] != UINT32_MAX) {
      out.initial.push_back(remap[q0]);
    }
  }
  return out;
}

// A state off every cycle is visited at most once per run, so its accepting
// flag never matters; clearing it lets the quotient merge more states.
void clear_transient_acceptance(BuchiAutomaton& ba) {
  const std::size_t n = ba.size();
  for (std::size_t q = 0; q < n; ++q) {
    if (!ba.accepting[q]) continue;
    std::vector<bool> vis(n, false);
    std::vector<std::uint32_t> stack{static_cast<std::uint32_t>(q)};
    bool on_cycle = false;
    // First expansion from q itself; vis guards everything after.
    while (!stack.empty() && !on_cycle) {
      std::uint32_t u = stack.back();
      stack.pop_back();
      for (const BuchiEdge& e : ba.edges[u]) {
        if (e.to == q) {
          on_cycle = true;
          break;
        }
        if (!vis[e.to]) {
          vis[e.to] = true;
          stack.push_back(e.to);
        }
      }
    }
    if (!on_cycle) {
      ba.accepting[q] = false;
    }
  }
}

// Quotient by strong bisimulation (partition refinement on accepting bit and
// guarded successor blocks). Language-preserving; shrinks the tableau output
// considerably.
BuchiAutomaton quotient(const BuchiAutomaton& ba) {
  const std::size_t n = ba.size();
  if (n <= 1) return ba;

  std::vector<std::uint32_t> block(n);
  for (std::size_t q = 0; q < n; ++q) {
    block[q] = ba.accepting[q] ? 1 : 0;
  }

  using Sig = std::set<std::tuple<std::vector<std::string>, std::vector<std::string>,
                                  std::uint32_t>>;
  while (true) {
    std::map<std::pair<std::uint32_t, Sig>, std::uint32_t> fresh;
    std::vector<std::uint32_t> next(n);
    for (std::size_t q = 0; q < n; ++q) {
      Sig sig;
      for (const BuchiEdge& e : ba.edges[q]) {
        sig.emplace(e.pos, e.neg, block[e.to]);
      }
      auto key = std::make_pair(block[q], std::move(sig));
      auto it = fresh.find(key);
      if (it == fresh.end()) {
        it = fresh.emplace(std::move(key), static_cast<std::uint32_t>(fresh.size()))
                 .first;
      }
      next[q] = it->second;
    }
    if (next == block) break;
    block = std::move(next);
  }

  std::uint32_t blocks = *std::max_element(block.begin(), block.end()) + 1;
  BuchiAutomaton out;
  out.edges.resize(blocks);
  out.accepting.assign(blocks, false);
  std::vector<bool> done(blocks, false);
  for (std::size_t q = 0; q < n; ++q) {
    std::uint32_t b = block[q];
    out.accepting[b] = ba.accepting[q];
    if (done[b]) continue;
    done[b] = true;
    for (const BuchiEdge& e : ba.edges[q]) {
      BuchiEdge mapped{block[e.to], e.pos, e.neg};
      auto& edges = out.edges[b];
      if (std::find(edges.begin(), edges.end(), mapped) == edges.end()) {
        edges.push_back(std::move(mapped));
      }
    }
  }
  std::set<std::uint32_t> inits;
  for (std::uint32_t q0 : ba.initial) {
    inits.insert(block[q0]);
  }
  out.initial.assign(inits.begin(), inits.end());
  return out;
}

}  // namespace

BuchiAutomaton to_buchi(const FormulaPtr& f) {
  if (!is_nnf(*f)) {
    throw std::invalid_argument("to_buchi requires negation normal form: " +
                                f->str());
  }
  Pool pool;
  int root = pool.intern(f);
  std::vector<GraphNode> nodes = expand_graph(pool, root);
  Generalized g = build_generalized(pool, nodes);
  BuchiAutomaton ba = trim(degeneralize(g));
  clear_transient_acceptance(ba);
  return quotient(ba);
}

bool accepts_lasso(const BuchiAutomaton& ba, std::span<const PropSet> prefix,
                   std::span<const PropSet> cycle) {
  if (cycle.empty()) {
    throw std::invalid_argument("lasso cycle must be non-empty");
  }
  const std::size_t p = prefix.size();
  const std::size_t n = p + cycle.size();
  auto nxt = [p, n](std::size_t i) { return i + 1 < n ? i + 1 : p; };
  auto letter = [&](std::size_t i) -> const PropSet& {
    return i < p ? prefix[i] : cycle[i - p];
  };
  auto guard_ok = [](const BuchiEdge& e, const PropSet& l) {
    for (const std::string& name : e.pos) {
      if (!l.count(name)) return false;
    }
    for (const std::string& name : e.neg) {
      if (l.count(name)) return false;
    }
    return true;
  };

  // Product of the lasso positions with the automaton.
  auto pack = [&](std::size_t pos, std::uint32_t q) { return pos * ba.size() + q; };
  std::vector<bool> seen(n * ba.size(), false);
  std::vector<std::size_t> stack;
  for (std::uint32_t q0 : ba.initial) {
    std::size_t v = pack(0, q0);
    if (!seen[v]) {
      seen[v] = true;
      stack.push_back(v);
    }
  }
  std::vector<std::size_t> reachable;
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    reachable.push_back(v);
    std::size_t pos = v / ba.size();
    std::uint32_t q = static_cast<std::uint32_t>(v % ba.size());
    for (const BuchiEdge& e : ba.edges[q]) {
      if (!guard_ok(e, letter(pos))) continue;
      std::size_t w = pack(nxt(pos), e.to);
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }

  // Accepting iff some reachable accepting node lies on a product cycle.
  for (std::size_t v : reachable) {
    std::uint32_t q = static_cast<std::uint32_t>(v % ba.size());
    if (!ba.accepting[q]) continue;
    std::vector<bool> vis(n * ba.size(), false);
    std::vector<std::size_t> work{v};
    bool loops = false;
    while (!work.empty() && !loops) {
      std::size_t u = work.back();
      work.pop_back();
      std::size_t pos = u / ba.size();
      std::uint32_t qu = static_cast<std::uint32_t>(u % ba.size());
      for (const BuchiEdge& e : ba.edges[qu]) {
        if (!guard_ok(e, letter(pos))) continue;
        std::size_t w = pack(nxt(pos), e.to);
        if (w == v) {
          loops = true;
          break;
        }
        if (!vis[w]) {
          vis[w] = true;
          work.push_back(w);
        }
      }
    }
    if (loops) return true;
  }
  return false;
}

}  // namespace syncomp
