#include "moralgrid/agents.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"
#include "moralgrid/errors.hpp"

namespace moralgrid {

using nlohmann::json;

namespace {

uint64_t mix_seeds(uint64_t a, uint64_t b) {
  // splitmix64 finaliser over the pair
  uint64_t z = a + 0x9e3779b97f4a7c15ull + b * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

class RandomPolicy final : public Policy {
public:
  explicit RandomPolicy(uint64_t seed) : seed_(seed), rng_(seed) {}

  void begin_episode(uint64_t episode_seed) override {
    rng_.seed(mix_seeds(seed_, episode_seed));
  }

  Action act(const WorldState&) override {
    return kAllActions[rng_() % kNumActions];
  }

  bool deterministic() const override { return false; }
  std::string describe() const override { return "random(seed=" + std::to_string(seed_) + ")"; }

private:
  uint64_t seed_;
  std::mt19937_64 rng_;
};

class ScriptedPolicy final : public Policy {
public:
  ScriptedPolicy(std::vector<Action> actions, std::string label)
      : actions_(std::move(actions)), label_(std::move(label)) {}

  void begin_episode(uint64_t) override { next_ = 0; }

  Action act(const WorldState&) override {
    if (next_ < actions_.size()) return actions_[next_++];
    return Action::Stay;
  }

  bool deterministic() const override { return true; }
  std::string describe() const override { return label_; }

private:
  std::vector<Action> actions_;
  size_t next_ = 0;
  std::string label_;
};

class GreedyQPolicy final : public Policy {
public:
  GreedyQPolicy(QTable table, std::string label)
      : table_(std::move(table)), label_(std::move(label)) {}

  Action act(const WorldState& world) override {
    const auto& q = table_.row(canonical_state_string(world));
    int best = 0;
    for (int a = 1; a < kNumActions; ++a) {
      if (q[a] > q[best]) best = a;
    }
    return kAllActions[best];
  }

  bool deterministic() const override { return true; }
  std::string describe() const override { return label_; }

private:
  QTable table_;
  std::string label_;
};

}  // namespace

std::unique_ptr<Policy> make_random_policy(uint64_t seed) {
  return std::make_unique<RandomPolicy>(seed);
}

std::unique_ptr<Policy> make_scripted_policy(std::vector<Action> actions, std::string label) {
  return std::make_unique<ScriptedPolicy>(std::move(actions), std::move(label));
}

std::unique_ptr<Policy> make_greedy_policy(QTable table, std::string label) {
  return std::make_unique<GreedyQPolicy>(std::move(table), std::move(label));
}

std::vector<Action> parse_action_script(const std::string& text) {
  std::vector<Action> actions;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    size_t b = line.find_last_not_of(" \t\r");
    std::string token = line.substr(a, b - a + 1);
    try {
      actions.push_back(action_from_string(token));
    } catch (const ConfigError&) {
      throw ConfigError("action script line " + std::to_string(line_no) + ": unknown action '" +
                        token + "'");
    }
  }
  return actions;
}

const std::array<double, kNumActions>& QTable::row(const std::string& key) const {
  static const std::array<double, kNumActions> kZeros{};
  auto it = values.find(key);
  return it == values.end() ? kZeros : it->second;
}

std::string QTable::to_json() const {
  json j;
  j["version"] = version;
  j["scenario"] = scenario;
  j["chain"] = chain;
  json q = json::object();
  for (const auto& [key, row] : values) {
    q[key] = row;
  }
  j["q"] = q;
  return j.dump();
}

QTable QTable::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("q-table parse error: ") + e.what());
  }
  QTable t;
  t.version = j.value("version", 1);
  if (t.version != 1) throw ConfigError("q-table: unsupported version");
  t.scenario = j.value("scenario", "");
  t.chain = j.value("chain", "");
  for (const auto& [key, row] : j.at("q").items()) {
    std::array<double, kNumActions> r{};
    if (row.size() != kNumActions) throw ConfigError("q-table row size mismatch");
    for (int a = 0; a < kNumActions; ++a) r[a] = row[a].get<double>();
    t.values[key] = r;
  }
  return t;
}

QTable q_learn(std::shared_ptr<const ScenarioConfig> scenario, const MoralityChain& chain,
               const ChainWeights& weights, const TrainConfig& config) {
  if (!(config.gamma > 0.0 && config.gamma <= 1.0)) {
    throw ConfigError("train: gamma must lie in (0, 1]");
  }
  if (config.eps_start < 0.0 || config.eps_start > 1.0 || config.eps_end < 0.0 ||
      config.eps_end > 1.0) {
    throw ConfigError("train: exploration rates must lie in [0, 1]");
  }
  if (config.lambda < 0.0) throw ConfigError("train: lambda must be >= 0");
  if (config.alpha <= 0.0 || config.alpha > 1.0) {
    throw ConfigError("train: alpha must lie in (0, 1]");
  }
  QTable table;
  table.scenario = scenario->name;
  table.chain = chain.name;

  MoralEnv env(scenario, chain, weights, config.cost_options);
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const long decay_steps =
      config.eps_decay_steps > 0 ? config.eps_decay_steps : std::max(1l, config.total_steps / 2);

  auto greedy = [&](const std::string& key) {
    const auto& q = table.row(key);
    int best = 0;
    for (int a = 1; a < kNumActions; ++a) {
      if (q[a] > q[best]) best = a;
    }
    return best;
  };

  long step_count = 0;
  uint64_t episode = 0;
  while (step_count < config.total_steps) {
    env.reset(config.seed + episode);
    ++episode;
    std::string key = canonical_state_string(env.world());
    while (!env.episode_over() && step_count < config.total_steps) {
      double frac = std::min(1.0, static_cast<double>(step_count) / decay_steps);
      double eps = config.eps_start + frac * (config.eps_end - config.eps_start);
      int a = unit(rng) < eps ? static_cast<int>(rng() % kNumActions) : greedy(key);

      StepOutcome out = env.step(kAllActions[a]);
      double r = out.reward;
      if (config.reward_mode == TrainConfig::RewardMode::Shaped) r -= config.lambda * out.cost;

      std::string next_key = canonical_state_string(env.world());
      double target = r;
      if (!out.terminated && !out.truncated) {
        const auto& nq = table.row(next_key);
        target += config.gamma * *std::max_element(nq.begin(), nq.end());
      }
      auto& q = table.values[key];  // zero-initialised on first touch
      q[a] += config.alpha * (target - q[a]);

      key = std::move(next_key);
      ++step_count;
    }
  }
  return table;
}

}  // namespace moralgrid
