#include "moralgrid/evaluator.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "moralgrid/errors.hpp"
#include "moralgrid/registry.hpp"

namespace moralgrid {

using nlohmann::json;

EvaluationReport evaluate(std::shared_ptr<const ScenarioConfig> scenario,
                          const MoralityChain& chain, const ChainWeights& weights,
                          Policy& policy, const EvaluateOptions& options) {
  if (options.episodes < 1) throw ConfigError("evaluate: episodes must be >= 1");

  MoralEnv env(scenario, chain, weights, options.cost_options);
  std::map<std::string, double> adherence_sum;
  for (const NormSpec& n : chain.norms) adherence_sum[n.id] = 0.0;
  double return_sum = 0.0, cost_sum = 0.0;

  for (int ep = 0; ep < options.episodes; ++ep) {
    uint64_t seed = options.base_seed + static_cast<uint64_t>(ep);
    env.reset(seed);
    policy.begin_episode(seed);
    while (!env.episode_over()) {
      env.step(policy.act(env.world()));
    }
    for (const auto& [id, value] : env.episode_adherence()) adherence_sum[id] += value;
    return_sum += env.episode_return();
    cost_sum += env.episode_cost();
  }

  EvaluationReport report;
  report.scenario = scenario->name;
  report.chain = chain.name;
  report.beta = weights.beta.to_double();
  report.episodes = options.episodes;
  report.base_seed = options.base_seed;
  report.policy = policy.describe();
  report.norm_subset = options.subset;
  report.scenario_hash = hex64(scenario_hash(*scenario));
  report.chain_hash = hex64(chain_hash(chain));

  std::vector<double> per_norm_m;
  for (const NormSpec& n : chain.norms) {
    AdherenceEstimate est{adherence_sum[n.id] / options.episodes, options.episodes,
                          policy.deterministic()};
    double m = morality_function(n, est);
    report.per_norm_m[n.id] = m;
    per_norm_m.push_back(m);
  }
  report.metric = morality_metric(chain, weights, per_norm_m,
                                  options.subset ? &*options.subset : nullptr);
  report.avg_return = return_sum / options.episodes;
  report.avg_cost = cost_sum / options.episodes;
  return report;
}

std::vector<int> compare(const std::vector<EvaluationReport>& reports) {
  if (reports.empty()) return {};
  for (const auto& r : reports) {
    if (r.scenario != reports[0].scenario || r.chain != reports[0].chain) {
      throw ConfigError("compare: reports mix scenarios or chains (" + r.scenario + "/" +
                        r.chain + " vs " + reports[0].scenario + "/" + reports[0].chain + ")");
    }
  }
  std::vector<int> order(reports.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (reports[a].metric != reports[b].metric) return reports[a].metric > reports[b].metric;
    return reports[a].avg_return > reports[b].avg_return;
  });
  return order;
}

std::string comparison_csv(const std::vector<EvaluationReport>& reports) {
  std::ostringstream os;
  os << "scenario,chain,policy,metric,avg_return,avg_cost\n";
  for (int idx : compare(reports)) {
    const auto& r = reports[idx];
    os << r.scenario << "," << r.chain << "," << r.policy << "," << r.metric << ","
       << r.avg_return << "," << r.avg_cost << "\n";
  }
  return os.str();
}

std::string EvaluationReport::to_json() const {
  json j;
  j["scenario"] = scenario;
  j["chain"] = chain;
  j["beta"] = beta;
  j["episodes"] = episodes;
  j["base_seed"] = base_seed;
  j["policy"] = policy;
  j["per_norm_m"] = per_norm_m;
  j["metric"] = metric;
  j["avg_return"] = avg_return;
  j["avg_cost"] = avg_cost;
  if (norm_subset) j["norm_subset"] = *norm_subset;
  j["scenario_hash"] = scenario_hash;
  j["chain_hash"] = chain_hash;
  return j.dump(2);
}

EvaluationReport EvaluationReport::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("report parse error: ") + e.what());
  }
  EvaluationReport r;
  r.scenario = j.value("scenario", "");
  r.chain = j.value("chain", "");
  r.beta = j.value("beta", 0.01);
  r.episodes = j.value("episodes", 0);
  r.base_seed = j.value("base_seed", static_cast<uint64_t>(0));
  r.policy = j.value("policy", "");
  if (j.contains("per_norm_m")) {
    for (const auto& [id, m] : j["per_norm_m"].items()) r.per_norm_m[id] = m.get<double>();
  }
  r.metric = j.value("metric", 0.0);
  r.avg_return = j.value("avg_return", 0.0);
  r.avg_cost = j.value("avg_cost", 0.0);
  if (j.contains("norm_subset")) {
    r.norm_subset = j["norm_subset"].get<std::vector<std::string>>();
  }
  r.scenario_hash = j.value("scenario_hash", "");
  r.chain_hash = j.value("chain_hash", "");
  return r;
}

}  // namespace moralgrid
