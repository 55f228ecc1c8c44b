#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "moralgrid/agents.hpp"

namespace moralgrid {

struct EvaluationReport {
  std::string scenario;
  std::string chain;
  double beta = 0.01;
  int episodes = 0;
  uint64_t base_seed = 0;
  std::string policy;
  std::map<std::string, double> per_norm_m;
  double metric = 0.0;
  double avg_return = 0.0;
  double avg_cost = 0.0;
  std::optional<std::vector<std::string>> norm_subset;
  std::string scenario_hash;
  std::string chain_hash;

  std::string to_json() const;
  static EvaluationReport from_json(const std::string& text);
};

struct EvaluateOptions {
  int episodes = 100;
  uint64_t base_seed = 0;
  std::optional<std::vector<std::string>> subset;
  CostOptions cost_options;
  Rational beta{1, 100};
};

// Monte Carlo policy assessment: runs episodes with seeds base_seed + i,
// averages per-norm adherence into morality functions, and reports the
// metric, average return, and average total cost.
EvaluationReport evaluate(std::shared_ptr<const ScenarioConfig> scenario,
                          const MoralityChain& chain, const ChainWeights& weights,
                          Policy& policy, const EvaluateOptions& options = {});

// Indices of `reports` ranked by descending metric, ties by higher average
// return; stable. All reports must share scenario and chain.
std::vector<int> compare(const std::vector<EvaluationReport>& reports);

std::string comparison_csv(const std::vector<EvaluationReport>& reports);

}  // namespace moralgrid
