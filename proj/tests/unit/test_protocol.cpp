#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "moralgrid/errors.hpp"
#include "moralgrid/protocol.hpp"
#include "moralgrid/registry.hpp"
#include "moralgrid/trace.hpp"

using namespace moralgrid;
using nlohmann::json;

TEST_CASE("session contract: reset, step, describe, close") {
  Session session;

  json reset = json::parse(session.handle_line(
      R"({"cmd":"reset","seed":0,"scenario":"SwitchStandard","chain":"Utility"})"));
  CHECK(reset["ok"] == true);
  CHECK(reset.contains("obs"));
  CHECK(reset["obs"].contains("agent"));

  json step = json::parse(session.handle_line(R"({"cmd":"step","action":"RIGHT"})"));
  CHECK(step["ok"] == true);
  CHECK(step["reward"] == -1.0);
  CHECK(step["terminated"] == false);
  CHECK(step["truncated"] == false);
  CHECK(step["info"].contains("norm_events"));
  CHECK(step["info"].contains("cost"));

  json describe = json::parse(session.handle_line(R"({"cmd":"describe"})"));
  CHECK(describe["ok"] == true);
  CHECK(describe["scenario"] == "SwitchStandard");
  CHECK(describe["scenarios"].size() >= 11);
  CHECK(describe["actions"].size() == 6);

  json close = json::parse(session.handle_line(R"({"cmd":"close"})"));
  CHECK(close["ok"] == true);
  CHECK(session.closed());
}

TEST_CASE("session error paths keep the connection alive") {
  Session session;

  json no_reset = json::parse(session.handle_line(R"({"cmd":"step","action":"UP"})"));
  CHECK(no_reset["ok"] == false);

  json malformed = json::parse(session.handle_line("{oops"));
  CHECK(malformed["ok"] == false);
  CHECK(malformed.contains("error"));

  json unknown = json::parse(session.handle_line(R"({"cmd":"fly"})"));
  CHECK(unknown["ok"] == false);

  json bad_action = json::parse(session.handle_line(
      R"({"cmd":"reset","seed":0,"scenario":"SwitchStandard"})"));
  CHECK(bad_action["ok"] == true);
  bad_action = json::parse(session.handle_line(R"({"cmd":"step","action":"JUMP"})"));
  CHECK(bad_action["ok"] == false);

  // Finish the episode, then step once more.
  json out;
  do {
    out = json::parse(session.handle_line(R"({"cmd":"step","action":"STAY"})"));
  } while (out["ok"] == true && out["terminated"] == false && out["truncated"] == false);
  json after = json::parse(session.handle_line(R"({"cmd":"step","action":"STAY"})"));
  CHECK(after["ok"] == false);
  CHECK(after["error"] == "episode finished");

  // The session still answers.
  json again = json::parse(session.handle_line(R"({"cmd":"describe"})"));
  CHECK(again["ok"] == true);
}

TEST_CASE("served episodes equal in-process episodes field for field") {
  auto scenario = resolve_scenario("PushOrSwitch");
  LoadedChain loaded = load_chain("NphMh", scenario.get());
  ChainWeights weights = compute_weights(loaded.chain, loaded.beta);

  std::vector<Action> actions{Action::Interact, Action::Right, Action::Right, Action::Right,
                              Action::Right,    Action::Right, Action::Right, Action::Right,
                              Action::Right,    Action::Right, Action::Right, Action::Right};

  MoralEnv env(scenario, loaded.chain, weights, {});
  env.reset(7);

  Session session;
  json reset = json::parse(session.handle_line(
      R"({"cmd":"reset","seed":7,"scenario":"PushOrSwitch","chain":"NphMh"})"));
  REQUIRE(reset["ok"] == true);

  for (Action a : actions) {
    StepOutcome direct = env.step(a);
    json served = json::parse(session.handle_line(
        json{{"cmd", "step"}, {"action", to_string(a)}}.dump()));
    REQUIRE(served["ok"] == true);
    CHECK(served["reward"].get<double>() == direct.reward);
    CHECK(served["terminated"].get<bool>() == direct.terminated);
    CHECK(served["truncated"].get<bool>() == direct.truncated);
    CHECK(served["info"]["cost"].get<double>() == direct.cost);

    json direct_events = json::array();
    for (const NormEvent& ev : direct.norm_events) {
      direct_events.push_back(json::parse(norm_event_to_json(ev)));
    }
    CHECK(served["info"]["norm_events"].dump() == direct_events.dump());
    if (direct.terminated || direct.truncated) break;
  }
}

TEST_CASE("traces write, read back, and re-score identically") {
  auto scenario = resolve_scenario("PushOrSwitch");
  LoadedChain loaded = load_chain("NphMh", scenario.get());
  ChainWeights weights = compute_weights(loaded.chain, loaded.beta);
  MoralEnv env(scenario, loaded.chain, weights, {});
  env.reset(0);

  EpisodeTrace trace;
  trace.header.scenario = scenario->name;
  trace.header.chain = loaded.chain.name;
  trace.header.seed = 0;

  std::vector<Action> script{Action::Right, Action::Right, Action::Right, Action::Right,
                             Action::Right, Action::Down,  Action::Interact};
  std::vector<double> costs;
  size_t next = 0;
  while (!env.episode_over()) {
    Action a = next < script.size() ? script[next++] : Action::Stay;
    StepOutcome out = env.step(a);
    trace.steps.push_back({out.raw.t, a, out.reward, out.cost, out.norm_events,
                           state_digest(env.world())});
    costs.push_back(out.cost);
  }
  TraceEnd end;
  end.terminated = false;
  end.truncated = true;
  end.episode_return = env.episode_return();
  end.total_cost = env.episode_cost();
  end.adherence = env.episode_adherence();
  trace.end = end;

  std::stringstream buffer;
  write_trace(buffer, trace);
  EpisodeTrace back = read_trace(buffer);
  CHECK(back.header.scenario == "PushOrSwitch");
  CHECK(back.steps.size() == trace.steps.size());
  REQUIRE(back.end.has_value());
  CHECK(back.end->total_cost == end.total_cost);

  // Engine-free re-scoring reproduces the recorded per-step costs.
  ScoreSummary score = score_trace(back, loaded.chain, weights, {});
  REQUIRE(score.per_step_costs.size() == costs.size());
  for (size_t i = 0; i < costs.size(); ++i) CHECK(score.per_step_costs[i] == costs[i]);
  CHECK(score.total_cost == doctest::Approx(end.total_cost));
  CHECK(score.adherence == end.adherence);

  // Re-scoring under the reversed chain flips the push-vs-switch ranking.
  LoadedChain reversed = load_chain("MhNph", scenario.get());
  ChainWeights rw = compute_weights(reversed.chain, reversed.beta);
  ScoreSummary flipped = score_trace(back, reversed.chain, rw, {});
  CHECK(score.metric == doctest::Approx(0.8 / 201.0).epsilon(1e-9));        // push under NPH-first
  CHECK(flipped.metric == doctest::Approx(160.0 / 201.0).epsilon(1e-9));    // push under MH-first
}

TEST_CASE("trace parsing rejects malformed inputs") {
  std::stringstream missing_header("{\"type\":\"step\",\"t\":0,\"action\":\"UP\"}\n");
  CHECK_THROWS_AS(read_trace(missing_header), ConfigError);

  std::stringstream out_of_order(
      "{\"type\":\"header\",\"scenario\":\"x\",\"chain\":\"c\"}\n"
      "{\"type\":\"step\",\"t\":1,\"action\":\"UP\"}\n"
      "{\"type\":\"step\",\"t\":0,\"action\":\"UP\"}\n");
  CHECK_THROWS_AS(read_trace(out_of_order), ConfigError);

  std::stringstream garbage("not json\n");
  CHECK_THROWS_AS(read_trace(garbage), ConfigError);
}

TEST_CASE("scoring a pristine trace gives zero cost and a perfect metric") {
  auto scenario = resolve_scenario("SwitchStandard");
  LoadedChain loaded = load_chain("Utility", scenario.get());
  ChainWeights weights = compute_weights(loaded.chain, loaded.beta);

  EpisodeTrace trace;
  trace.header.scenario = scenario->name;
  trace.header.chain = loaded.chain.name;
  for (int t = 0; t < 5; ++t) trace.steps.push_back({t, Action::Stay, -1.0, 0.0, {}, ""});

  ScoreSummary score = score_trace(trace, loaded.chain, weights, {});
  CHECK(score.total_cost == 0.0);
  CHECK(score.metric == 1.0);
  for (const auto& [id, m] : score.per_norm_m) CHECK(m == 1.0);
}

TEST_CASE("scoring applies the one-shot utility total") {
  // 3 of a 5-maximum human group harmed: that norm's cost is w * 3/5.
  auto scenario = resolve_scenario("PushOrSwitch");
  LoadedChain loaded = load_chain("MhNph", scenario.get());  // w_mh = 200
  ChainWeights weights = compute_weights(loaded.chain, loaded.beta);

  EpisodeTrace trace;
  NormEvent ev;
  ev.norm_id = "min_humans_harmed";
  ev.category = NormCategory::Utility;
  ev.t = 0;
  ev.harmed_count = 1;
  trace.steps.push_back({0, Action::Stay, -1.0, 0.0, {ev}, ""});
  ev.t = 3;
  ev.harmed_count = 2;
  trace.steps.push_back({3, Action::Stay, -1.0, 0.0, {ev}, ""});

  ScoreSummary score = score_trace(trace, loaded.chain, weights, {});
  CHECK(score.total_cost == 200.0 * (3.0 / 5.0));
  CHECK(score.per_norm_m.at("min_humans_harmed") == doctest::Approx(0.4));
}
