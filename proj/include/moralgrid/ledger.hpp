#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "moralgrid/morality.hpp"
#include "moralgrid/world.hpp"

namespace moralgrid {

// Per-step record that a norm's pattern fired.
struct NormEvent {
  std::string norm_id;
  NormCategory category = NormCategory::Outcome;
  int t = 0;
  std::optional<int> harmed_count;          // present for harm-related events
  std::optional<NormSubject> subject_kind;  // victim kind where applicable
  bool personal = false;                    // push-lineage harm
  bool via_lever = false;                   // harm on an agent-altered route
};

struct CostOptions {
  bool normalize = false;  // divide each step cost by the total weight sum
  // `increment` charges utility norms by the change of their normalised level
  // so the episode total equals the final level; `level` charges the literal
  // level every step.
  enum class UtilityMode { Increment, Level } utility_mode = UtilityMode::Increment;
};

// Episode-aware cost accumulator: event norms charge their weight once per
// episode on first violation; utility norms charge range-normalised
// accumulation.
class CostTracker {
public:
  CostTracker(MoralityChain chain, ChainWeights weights, CostOptions options = {});

  // Processes one step's events and returns the step cost c_t. `t` must be
  // strictly increasing within an episode.
  double record_step(const std::vector<NormEvent>& events, int t);

  void mark_episode_end();
  bool episode_ended() const { return ended_; }

  // Per-norm outcome of the finished episode: 1/0 indicator for event norms,
  // final normalised utility for utility norms. Throws mid-episode.
  std::map<std::string, double> episode_adherence() const;

  void reset();

  double total_cost() const { return total_cost_; }
  double utility_value(const std::string& norm_id) const;
  const MoralityChain& chain() const { return chain_; }
  const ChainWeights& weights() const { return weights_; }
  const CostOptions& options() const { return options_; }

  // Digest of the moral bookkeeping, for solver memoisation.
  std::string state_key() const;

private:
  MoralityChain chain_;
  ChainWeights weights_;
  CostOptions options_;
  std::vector<bool> fired_;
  std::vector<double> utility_;  // raw u_n, starts at range min
  std::vector<double> charged_;  // cumulative weighted normalised level
  int last_t_ = -1;
  bool ended_ = false;
  double total_cost_ = 0.0;
};

// Maps one engine step's raw outcome onto the chain's norms:
//   action norms        -> a push was performed (kind-filtered if set)
//   outcome norms       -> harm to the subject kind (or the agent) occurred
//   causal norms + kind -> push-lineage (personal) harm to that kind
//   causal norms, plain -> any harm the agent caused (push or altered route)
//   utility norms       -> harmed-count increments per kind
std::vector<NormEvent> derive_events(const StepResult& result, const WorldState& world,
                                     const MoralityChain& chain);

// Chains are validated against the event model before use.
void validate_chain_for_events(const MoralityChain& chain);

}  // namespace moralgrid
