#pragma once

#include <vector>

#include "syncomp/ltl.hpp"

namespace syncomp {

/// Transition guard: the letter (a proposition set) must contain every name
/// in `pos` and none in `neg`. Guards built by the translation are always
/// satisfiable (pos and neg never intersect).
struct BuchiEdge {
  std::uint32_t to;
  std::vector<std::string> pos;  // sorted, unique
  std::vector<std::string> neg;  // sorted, unique

  friend bool operator==(const BuchiEdge&, const BuchiEdge&) = default;
};

/// Nondeterministic Buchi automaton over proposition-set letters. A run
/// q0 q1 q2 ... over word x0 x1 x2 ... takes an edge qi -> qi+1 whose guard
/// accepts xi, starting from an initial state; it accepts when it visits
/// accepting states infinitely often. The automaton may be empty.
struct BuchiAutomaton {
  std::vector<std::vector<BuchiEdge>> edges;  // indexed by source state
  std::vector<std::uint32_t> initial;
  std::vector<bool> accepting;

  std::size_t size() const { return edges.size(); }
};

/// Tableau translation from a negation-normal formula to a Buchi automaton
/// accepting exactly the infinite words that satisfy it. Generalized
/// acceptance (one set per until-type subformula) is degeneralized with a
/// counter, then the automaton is trimmed and quotiented by bisimulation.
/// Throws std::invalid_argument when f is not in negation normal form.
BuchiAutomaton to_buchi(const FormulaPtr& f);

/// Whether the automaton accepts prefix . cycle^omega. Independent of the
/// emptiness search used for model checking; intended for certification and
/// differential testing.
bool accepts_lasso(const BuchiAutomaton& ba, std::span<const PropSet> prefix,
                   std::span<const PropSet> cycle);

}  // namespace syncomp
