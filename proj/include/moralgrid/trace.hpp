#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "moralgrid/env.hpp"

namespace moralgrid {

struct TraceHeader {
  int schema_version = 1;
  std::string scenario;
  std::string scenario_hash;
  std::string chain;
  std::string chain_hash;
  double beta = 0.01;
  uint64_t seed = 0;
  bool normalize_cost = false;
};

struct TraceStep {
  int t = 0;
  Action action = Action::Stay;
  double reward = 0.0;
  double cost = 0.0;
  std::vector<NormEvent> norm_events;
  std::string state_digest;
};

struct TraceEnd {
  bool terminated = false;
  bool truncated = false;
  double episode_return = 0.0;
  double total_cost = 0.0;
  std::map<std::string, double> adherence;
};

struct EpisodeTrace {
  TraceHeader header;
  std::vector<TraceStep> steps;
  std::optional<TraceEnd> end;
};

// One JSON object per line: a header record, then step records ordered by t,
// then an end record.
void write_trace(std::ostream& out, const EpisodeTrace& trace);
EpisodeTrace read_trace(std::istream& in);
EpisodeTrace read_trace_file(const std::string& path);

std::string norm_event_to_json(const NormEvent& ev);
NormEvent norm_event_from_json(const std::string& text);

struct ScoreSummary {
  std::vector<double> per_step_costs;
  double total_cost = 0.0;
  std::map<std::string, double> adherence;
  std::map<std::string, double> per_norm_m;
  double metric = 0.0;

  std::string to_json() const;
};

// Re-scores a stored trace against a chain, engine-free: replays the step
// events through a fresh cost tracker.
ScoreSummary score_trace(const EpisodeTrace& trace, const MoralityChain& chain,
                         const ChainWeights& weights, const CostOptions& options = {});

}  // namespace moralgrid
