#include "moralgrid/trace.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "moralgrid/errors.hpp"

namespace moralgrid {

using nlohmann::json;

namespace {

json event_to_json_obj(const NormEvent& ev) {
  json j;
  j["id"] = ev.norm_id;
  j["category"] = to_string(ev.category);
  j["t"] = ev.t;
  if (ev.harmed_count) j["harmed_count"] = *ev.harmed_count;
  if (ev.subject_kind) j["kind"] = to_string(*ev.subject_kind);
  j["personal"] = ev.personal;
  j["via_lever"] = ev.via_lever;
  return j;
}

NormEvent event_from_json_obj(const json& j) {
  NormEvent ev;
  ev.norm_id = j.at("id").get<std::string>();
  ev.category = category_from_string(j.value("category", "outcome"));
  ev.t = j.value("t", 0);
  if (j.contains("harmed_count")) ev.harmed_count = j["harmed_count"].get<int>();
  if (j.contains("kind")) ev.subject_kind = subject_from_string(j["kind"].get<std::string>());
  ev.personal = j.value("personal", false);
  ev.via_lever = j.value("via_lever", false);
  return ev;
}

}  // namespace

std::string norm_event_to_json(const NormEvent& ev) { return event_to_json_obj(ev).dump(); }

NormEvent norm_event_from_json(const std::string& text) {
  return event_from_json_obj(json::parse(text));
}

void write_trace(std::ostream& out, const EpisodeTrace& trace) {
  json h;
  h["type"] = "header";
  h["schema_version"] = trace.header.schema_version;
  h["scenario"] = trace.header.scenario;
  h["scenario_hash"] = trace.header.scenario_hash;
  h["chain"] = trace.header.chain;
  h["chain_hash"] = trace.header.chain_hash;
  h["beta"] = trace.header.beta;
  h["seed"] = trace.header.seed;
  h["normalize_cost"] = trace.header.normalize_cost;
  out << h.dump() << "\n";

  for (const TraceStep& s : trace.steps) {
    json j;
    j["type"] = "step";
    j["t"] = s.t;
    j["action"] = to_string(s.action);
    j["reward"] = s.reward;
    j["cost"] = s.cost;
    json events = json::array();
    for (const NormEvent& ev : s.norm_events) events.push_back(event_to_json_obj(ev));
    j["norm_events"] = events;
    j["state_digest"] = s.state_digest;
    out << j.dump() << "\n";
  }

  if (trace.end) {
    json j;
    j["type"] = "end";
    j["terminated"] = trace.end->terminated;
    j["truncated"] = trace.end->truncated;
    j["return"] = trace.end->episode_return;
    j["total_cost"] = trace.end->total_cost;
    j["adherence"] = trace.end->adherence;
    out << j.dump() << "\n";
  }
}

EpisodeTrace read_trace(std::istream& in) {
  EpisodeTrace trace;
  std::string line;
  int line_no = 0;
  bool have_header = false;
  int last_t = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ConfigError("trace line " + std::to_string(line_no) + ": " + e.what());
    }
    std::string type = j.value("type", "");
    if (type == "header") {
      if (have_header) throw ConfigError("trace: duplicate header");
      trace.header.schema_version = j.value("schema_version", 1);
      trace.header.scenario = j.value("scenario", "");
      trace.header.scenario_hash = j.value("scenario_hash", "");
      trace.header.chain = j.value("chain", "");
      trace.header.chain_hash = j.value("chain_hash", "");
      trace.header.beta = j.value("beta", 0.01);
      trace.header.seed = j.value("seed", static_cast<uint64_t>(0));
      trace.header.normalize_cost = j.value("normalize_cost", false);
      have_header = true;
    } else if (type == "step") {
      if (!have_header) throw ConfigError("trace: step record before header");
      TraceStep s;
      s.t = j.at("t").get<int>();
      if (s.t <= last_t) {
        throw ConfigError("trace line " + std::to_string(line_no) + ": steps out of order");
      }
      last_t = s.t;
      s.action = action_from_string(j.at("action").get<std::string>());
      s.reward = j.value("reward", 0.0);
      s.cost = j.value("cost", 0.0);
      for (const auto& ev : j.value("norm_events", json::array())) {
        s.norm_events.push_back(event_from_json_obj(ev));
      }
      s.state_digest = j.value("state_digest", "");
      trace.steps.push_back(std::move(s));
    } else if (type == "end") {
      TraceEnd e;
      e.terminated = j.value("terminated", false);
      e.truncated = j.value("truncated", false);
      e.episode_return = j.value("return", 0.0);
      e.total_cost = j.value("total_cost", 0.0);
      const json adherence = j.value("adherence", json::object());
      for (const auto& [id, v] : adherence.items()) {
        e.adherence[id] = v.get<double>();
      }
      trace.end = e;
    } else {
      throw ConfigError("trace line " + std::to_string(line_no) + ": unknown record type '" +
                        type + "'");
    }
  }
  if (!have_header) throw ConfigError("trace: missing header record");
  return trace;
}

EpisodeTrace read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read trace '" + path + "'");
  return read_trace(in);
}

ScoreSummary score_trace(const EpisodeTrace& trace, const MoralityChain& chain,
                         const ChainWeights& weights, const CostOptions& options) {
  CostTracker tracker(chain, weights, options);
  ScoreSummary summary;
  for (const TraceStep& s : trace.steps) {
    summary.per_step_costs.push_back(tracker.record_step(s.norm_events, s.t));
  }
  tracker.mark_episode_end();
  summary.total_cost = tracker.total_cost();
  summary.adherence = tracker.episode_adherence();

  std::vector<double> m;
  for (const NormSpec& n : chain.norms) {
    double value = morality_function(n, {summary.adherence.at(n.id), 1, true});
    summary.per_norm_m[n.id] = value;
    m.push_back(value);
  }
  summary.metric = morality_metric(chain, weights, m);
  return summary;
}

std::string ScoreSummary::to_json() const {
  json j;
  j["per_step_costs"] = per_step_costs;
  j["total_cost"] = total_cost;
  j["adherence"] = adherence;
  j["per_norm_m"] = per_norm_m;
  j["metric"] = metric;
  return j.dump(2);
}

}  // namespace moralgrid
