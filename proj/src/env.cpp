#include "moralgrid/env.hpp"

#include "moralgrid/errors.hpp"

namespace moralgrid {

MoralEnv::MoralEnv(std::shared_ptr<const ScenarioConfig> scenario, MoralityChain chain,
                   ChainWeights weights, CostOptions options)
    : scenario_(std::move(scenario)),
      world_(reset_world(scenario_, 0)),
      tracker_(std::move(chain), std::move(weights), options) {}

Observation MoralEnv::reset(uint64_t seed) {
  world_ = reset_world(scenario_, seed);
  tracker_.reset();
  episode_return_ = 0.0;
  started_ = true;
  return observe(world_);
}

StepOutcome MoralEnv::step(Action action) {
  if (!started_) throw StateError("step before reset");
  StepOutcome out;
  out.raw = step_world(world_, action);
  out.norm_events = derive_events(out.raw, world_, tracker_.chain());
  out.cost = tracker_.record_step(out.norm_events, out.raw.t);
  out.reward = out.raw.reward;
  out.terminated = out.raw.terminated;
  out.truncated = out.raw.truncated;
  out.obs = observe(world_);
  for (const auto& h : out.raw.harms) {
    out.harm_summary[h.is_agent ? "agent" : to_string(h.kind)] += h.count;
  }
  episode_return_ += out.reward;
  if (world_.episode_over) tracker_.mark_episode_end();
  return out;
}

std::map<std::string, double> MoralEnv::episode_adherence() {
  if (!world_.episode_over) throw StateError("episode adherence requested mid-episode");
  tracker_.mark_episode_end();
  return tracker_.episode_adherence();
}

std::string MoralEnv::search_key() const {
  return canonical_state_string(world_) + "#" + tracker_.state_key();
}

}  // namespace moralgrid
