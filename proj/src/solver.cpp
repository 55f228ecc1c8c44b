#include "moralgrid/solver.hpp"

#include <unordered_map>

#include "moralgrid/errors.hpp"

namespace moralgrid {

namespace {

struct NodeValue {
  double metric = 0.0;
  double future_return = 0.0;
  int best_action = -1;  // -1 at terminal states
};

struct Search {
  const MoralityChain* chain;
  const ChainWeights* weights;
  long state_cap;
  std::unordered_map<std::string, NodeValue> memo;

  NodeValue terminal_value(MoralEnv& env) {
    auto adherence = env.episode_adherence();
    std::vector<double> m;
    m.reserve(chain->size());
    for (const NormSpec& n : chain->norms) {
      m.push_back(morality_function(n, {adherence.at(n.id), 1, true}));
    }
    return {morality_metric(*chain, *weights, m), 0.0, -1};
  }

  const NodeValue& solve(const MoralEnv& env) {
    std::string key = env.search_key();
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    if (static_cast<long>(memo.size()) >= state_cap) {
      throw ResourceError("exact_solve: state cap " + std::to_string(state_cap) +
                          " exceeded; reduce the horizon");
    }

    NodeValue value;
    if (env.episode_over()) {
      MoralEnv copy = env;
      value = terminal_value(copy);
    } else {
      bool first = true;
      for (int a = 0; a < kNumActions; ++a) {
        MoralEnv next = env;
        StepOutcome out = next.step(kAllActions[a]);
        const NodeValue& child = solve(next);
        double metric = child.metric;
        double ret = out.reward + child.future_return;
        if (first || metric > value.metric ||
            (metric == value.metric && ret > value.future_return)) {
          value = {metric, ret, a};
          first = false;
        }
      }
    }
    return memo.emplace(std::move(key), value).first->second;
  }
};

}  // namespace

std::unique_ptr<Policy> SolveResult::policy() const {
  return make_scripted_policy(actions, "exact-solve");
}

SolveResult exact_solve(std::shared_ptr<const ScenarioConfig> scenario,
                        const MoralityChain& chain, const ChainWeights& weights,
                        const SolveOptions& options) {
  auto sc = scenario;
  if (options.horizon > 0 && options.horizon < scenario->reward.max_steps) {
    auto clamped = std::make_shared<ScenarioConfig>(*scenario);
    clamped->reward.max_steps = options.horizon;
    sc = clamped;
  }

  Search search{&chain, &weights, options.state_cap, {}};
  MoralEnv root(sc, chain, weights, options.cost_options);
  root.reset(0);
  search.solve(root);

  // Walk the memoised best actions to recover the optimal episode.
  SolveResult result;
  MoralEnv env(sc, chain, weights, options.cost_options);
  env.reset(0);
  while (!env.episode_over()) {
    const NodeValue& v = search.memo.at(env.search_key());
    if (v.best_action < 0) break;
    result.actions.push_back(kAllActions[v.best_action]);
    env.step(kAllActions[v.best_action]);
  }
  result.per_norm_adherence = env.episode_adherence();
  for (const NormSpec& n : chain.norms) {
    result.per_norm_m.push_back(
        morality_function(n, {result.per_norm_adherence.at(n.id), 1, true}));
  }
  result.metric = morality_metric(chain, weights, result.per_norm_m);
  result.episode_return = env.episode_return();
  result.states_explored = static_cast<long>(search.memo.size());
  return result;
}

}  // namespace moralgrid
