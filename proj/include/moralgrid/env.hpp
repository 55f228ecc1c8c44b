#pragma once

#include <map>
#include <memory>

#include "moralgrid/ledger.hpp"
#include "moralgrid/observation.hpp"

namespace moralgrid {

// Step outcome as seen by agents: observation, reward, flags, the step's norm
// events and moral cost, plus a raw per-kind harm summary.
struct StepOutcome {
  Observation obs;
  double reward = 0.0;
  bool terminated = false;
  bool truncated = false;
  std::vector<NormEvent> norm_events;
  double cost = 0.0;
  std::map<std::string, int> harm_summary;  // kind (or "agent") -> count this step
  StepResult raw;
};

// A scenario instance bound to a morality chain: steps the world, derives
// norm events, and accumulates cost. One instance per rollout; not shared
// across threads.
class MoralEnv {
public:
  MoralEnv(std::shared_ptr<const ScenarioConfig> scenario, MoralityChain chain,
           ChainWeights weights, CostOptions options = {});

  Observation reset(uint64_t seed);
  StepOutcome step(Action action);

  bool episode_over() const { return world_.episode_over; }
  const WorldState& world() const { return world_; }
  WorldState& mutable_world() { return world_; }
  const MoralityChain& chain() const { return tracker_.chain(); }
  const ChainWeights& weights() const { return tracker_.weights(); }
  CostTracker& tracker() { return tracker_; }
  const CostTracker& tracker() const { return tracker_; }
  const ScenarioConfig& scenario() const { return *scenario_; }
  std::shared_ptr<const ScenarioConfig> scenario_ptr() const { return scenario_; }

  double episode_return() const { return episode_return_; }
  double episode_cost() const { return tracker_.total_cost(); }

  // Adherence of the finished episode (marks the tracker ended).
  std::map<std::string, double> episode_adherence();

  // Combined world + moral bookkeeping key for search memoisation.
  std::string search_key() const;

private:
  std::shared_ptr<const ScenarioConfig> scenario_;
  WorldState world_;
  CostTracker tracker_;
  double episode_return_ = 0.0;
  bool started_ = false;
};

}  // namespace moralgrid
