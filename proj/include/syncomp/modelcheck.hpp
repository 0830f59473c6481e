#pragma once

#include <optional>

#include "syncomp/buchi.hpp"
#include "syncomp/kripke.hpp"

namespace syncomp {

/// Counterexample witness: the run prefix . cycle^omega through the Kripke
/// structure, as state indices. The prefix may be empty, in which case the
/// run starts at cycle.front().
struct Lasso {
  std::vector<std::uint32_t> prefix;
  std::vector<std::uint32_t> cycle;
};

struct CheckStats {
  std::size_t kripke_states = 0;
  std::size_t buchi_states = 0;
  std::size_t product_states = 0;
  double runtime_ms = 0.0;
};

struct Verdict {
  bool holds = false;
  std::optional<Lasso> counterexample;
  CheckStats stats;
};

/// Automata-theoretic LTL check: holds iff no run of k from its initial state
/// satisfies the negation of f, decided by nested depth-first emptiness
/// search on the on-the-fly product of k with the Buchi automaton for !f.
/// Violations come with a lasso witness. Throws std::invalid_argument when f
/// names a proposition k does not label.
Verdict model_check(const KripkeStructure& k, const FormulaPtr& f);

/// Certifies a counterexample: the lasso must start at k's initial state,
/// every consecutive pair (including the prefix-to-cycle seam and the cycle
/// wrap) must be an edge of k, and the induced word must satisfy !f.
bool replay_lasso(const KripkeStructure& k, const Lasso& lasso,
                  const FormulaPtr& f);

/// Label sets of the lasso's states, for feeding eval_on_lasso.
std::vector<PropSet> lasso_labels(const KripkeStructure& k,
                                  std::span<const std::uint32_t> states);

/// Human-readable lasso: the index line, then each distinct state with its
/// labels.
std::string format_lasso(const KripkeStructure& k, const Lasso& lasso);

}  // namespace syncomp
