#pragma once

#include <iosfwd>

#include "syncomp/specfile.hpp"

namespace syncomp {

// Exit codes shared by all commands: 0 success/holds, 1 property violated,
// 2 any error.
inline constexpr int exit_ok = 0;
inline constexpr int exit_violated = 1;
inline constexpr int exit_error = 2;

/// Whether the SYNC_COMPOSE_LOG environment variable asks for verbose
/// diagnostics.
bool verbose_logging();

/// Validates a spec and reports the derived structure: internal nodes, state
/// layout and the composed signature.
int run_compose(const std::string& spec_path, std::ostream& out,
                std::ostream& err);

/// Deterministic replay: steps the composed machine through the inputs file
/// and prints each round.
int run_simulate(const std::string& spec_path, const std::string& inputs_path,
                 std::size_t steps, std::ostream& out, std::ostream& err);

struct CheckOptions {
  std::string formula;
  std::size_t max_states = 1'000'000;
  std::string dump_graph_path;  // empty: no dump
};

/// Builds the reachable state graph and model-checks the named formula.
/// Counterexamples are re-certified before they are printed.
int run_check(const std::string& spec_path, const CheckOptions& options,
              std::ostream& out, std::ostream& err);

}  // namespace syncomp
