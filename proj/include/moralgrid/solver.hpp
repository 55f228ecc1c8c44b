#pragma once

#include <map>
#include <memory>

#include "moralgrid/agents.hpp"

namespace moralgrid {

struct SolveOptions {
  int horizon = -1;            // -1 = scenario max_steps
  long state_cap = 4000000;    // distinct (world, ledger) states
  CostOptions cost_options;
};

struct SolveResult {
  std::vector<Action> actions;  // the optimal deterministic episode
  std::map<std::string, double> per_norm_adherence;
  std::vector<double> per_norm_m;  // aligned with the chain order
  double metric = 0.0;
  double episode_return = 0.0;
  long states_explored = 0;

  std::unique_ptr<Policy> policy() const;
};

// Exhaustive search over the deterministic transition graph maximising the
// morality metric of the induced episode, ties broken by higher return and
// then by fixed action order. Throws ResourceError past the state cap.
SolveResult exact_solve(std::shared_ptr<const ScenarioConfig> scenario,
                        const MoralityChain& chain, const ChainWeights& weights,
                        const SolveOptions& options = {});

}  // namespace moralgrid
