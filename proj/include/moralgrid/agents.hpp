#pragma once

#include <array>
#include <memory>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "moralgrid/env.hpp"

namespace moralgrid {

// A stationary policy over world states. Implementations with per-episode
// state (scripts, exploration streams) reset it in begin_episode.
class Policy {
public:
  virtual ~Policy() = default;
  virtual void begin_episode(uint64_t episode_seed) { (void)episode_seed; }
  virtual Action act(const WorldState& world) = 0;
  virtual bool deterministic() const = 0;
  virtual std::string describe() const = 0;
};

// Uniform over the six actions; the stream is a pure function of
// (seed, episode_seed).
std::unique_ptr<Policy> make_random_policy(uint64_t seed);

// Replays the given actions, then STAY forever.
std::unique_ptr<Policy> make_scripted_policy(std::vector<Action> actions,
                                             std::string label = "scripted");

// Parses an action script: one action name per line, '#' comments allowed.
std::vector<Action> parse_action_script(const std::string& text);

struct TrainConfig {
  double alpha = 0.1;
  double gamma = 0.99;
  double eps_start = 1.0;
  double eps_end = 0.05;
  long eps_decay_steps = 0;  // 0 = first half of total_steps
  long total_steps = 50000;
  enum class RewardMode { EnvOnly, Shaped } reward_mode = RewardMode::EnvOnly;
  double lambda = 1.0;  // shaped reward R_E - lambda * c_t
  uint64_t seed = 0;
  CostOptions cost_options;
};

// Action-value table keyed by the canonical state digest.
struct QTable {
  int version = 1;
  std::string scenario;
  std::string chain;
  std::unordered_map<std::string, std::array<double, kNumActions>> values;

  const std::array<double, kNumActions>& row(const std::string& key) const;
  std::string to_json() const;
  static QTable from_json(const std::string& text);
};

// Tabular Q-learning over the deterministic engine. Identical configs yield
// identical tables.
QTable q_learn(std::shared_ptr<const ScenarioConfig> scenario, const MoralityChain& chain,
               const ChainWeights& weights, const TrainConfig& config);

std::unique_ptr<Policy> make_greedy_policy(QTable table, std::string label = "greedy-q");

}  // namespace moralgrid
