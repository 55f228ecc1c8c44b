// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line each. Exits nonzero if any criterion fails.
//
// Usage: moralgrid_acceptance [path-to-moralgrid-cli]
// The CLI path is needed for the served-protocol equivalence criterion.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "moralgrid/agents.hpp"
#include "moralgrid/evaluator.hpp"
#include "moralgrid/registry.hpp"
#include "moralgrid/solver.hpp"
#include "moralgrid/trace.hpp"

namespace mg = moralgrid;
using nlohmann::json;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& title, double time_budget_s,
               const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  double elapsed = 0.0;
  try {
    auto start = std::chrono::steady_clock::now();
    ok = body(detail);
    elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (time_budget_s > 0 && elapsed > time_budget_s) {
      ok = false;
      detail += " [over time budget " + std::to_string(time_budget_s) + "s]";
    }
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  if (!ok) ++g_failures;
  std::printf("[%s] criterion %d: %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", number,
              title.c_str(), elapsed, detail.empty() ? "" : " — ", detail.c_str());
  std::fflush(stdout);
}

struct Setup {
  std::shared_ptr<const mg::ScenarioConfig> scenario;
  mg::MoralityChain chain;
  mg::ChainWeights weights;
};

Setup make(const std::string& scenario, const std::string& chain) {
  Setup s;
  s.scenario = mg::resolve_scenario(scenario);
  mg::LoadedChain loaded = mg::load_chain(chain, s.scenario.get());
  s.chain = loaded.chain;
  s.weights = mg::compute_weights(s.chain, loaded.beta);
  return s;
}

double script_metric(const Setup& s, const std::vector<mg::Action>& script) {
  auto policy = mg::make_scripted_policy(script);
  mg::EvaluateOptions opts;
  opts.episodes = 1;
  return mg::evaluate(s.scenario, s.chain, s.weights, *policy, opts).metric;
}

const std::vector<mg::Action> kFlipSwitch{
    mg::Action::Interact, mg::Action::Right, mg::Action::Right, mg::Action::Right,
    mg::Action::Right,    mg::Action::Right, mg::Action::Right, mg::Action::Right,
    mg::Action::Right,    mg::Action::Right, mg::Action::Right, mg::Action::Right};
const std::vector<mg::Action> kPush{
    mg::Action::Right, mg::Action::Right, mg::Action::Right, mg::Action::Right,
    mg::Action::Right, mg::Action::Down,  mg::Action::Interact, mg::Action::Up,
    mg::Action::Right, mg::Action::Right, mg::Action::Right, mg::Action::Right,
    mg::Action::Right, mg::Action::Right};

bool close_to(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

// --- criterion bodies ---

bool weight_recursion(std::string& detail) {
  const mg::Rational beta(1, 100);
  mg::ChainWeights w2 = mg::compute_weights(2, beta);
  mg::ChainWeights w3 = mg::compute_weights(3, beta);
  if (!(w2.values == std::vector<double>{200.0, 1.0})) {
    detail = "k=2 weights wrong";
    return false;
  }
  if (!(w3.values == std::vector<double>{20200.0, 200.0, 1.0})) {
    detail = "k=3 weights wrong";
    return false;
  }
  for (int k = 1; k <= 7; ++k) {
    mg::ChainWeights w = mg::compute_weights(k, beta);
    if (!w.has_exact() || w.exact[k - 1] != mg::Rational(1)) {
      detail = "k=" + std::to_string(k) + " not exact";
      return false;
    }
    mg::Rational tail = w.exact[k - 1];
    for (int i = k - 1; i >= 1; --i) {
      if (w.exact[i - 1] != (tail + mg::Rational(1)) / beta) {
        detail = "recursion identity failed at k=" + std::to_string(k);
        return false;
      }
      tail = tail + w.exact[i - 1];
    }
  }
  return true;
}

bool push_or_switch_policies(std::string& detail) {
  const double tol = 1e-9;
  Setup nph = make("PushOrSwitch", "NphMh");
  double nothing_a = script_metric(nph, {});
  double flip_a = script_metric(nph, kFlipSwitch);
  double push_a = script_metric(nph, kPush);
  if (!close_to(nothing_a, 200.0 / 201.0, tol) ||
      !close_to(flip_a, 200.6 / 201.0, tol) ||
      !close_to(push_a, 0.8 / 201.0, tol)) {
    std::ostringstream os;
    os << "NPH>MH metrics " << nothing_a << "/" << flip_a << "/" << push_a;
    detail = os.str();
    return false;
  }
  Setup mh = make("PushOrSwitch", "MhNph");
  double nothing_b = script_metric(mh, {});
  double flip_b = script_metric(mh, kFlipSwitch);
  double push_b = script_metric(mh, kPush);
  if (!close_to(nothing_b, 1.0 / 201.0, tol) ||
      !close_to(flip_b, 121.0 / 201.0, tol) ||
      !close_to(push_b, 160.0 / 201.0, tol)) {
    std::ostringstream os;
    os << "MH>NPH metrics " << nothing_b << "/" << flip_b << "/" << push_b;
    detail = os.str();
    return false;
  }
  bool order_a = flip_a > nothing_a && nothing_a > push_a;
  bool order_b = push_b > flip_b && flip_b > nothing_b;
  if (!order_a || !order_b) {
    detail = "chain orderings wrong";
    return false;
  }
  detail = "DoNothing/FlipSwitch/Push = 0.995025/0.998010/0.003980 then "
           "0.004975/0.601990/0.796020";
  return true;
}

bool cost_bookkeeping(std::string& detail) {
  // Exact one-shot total: 3 of a 5-maximum group at weight 200.
  {
    mg::MoralityChain chain = mg::chain_from_json(R"({"name":"c","norms":[
      {"id":"mh","category":"utility","kind":"human","force":2,"range":[0,5]},
      {"id":"nph","category":"causal","kind":"human","force":1}]})");
    mg::ChainWeights w = mg::compute_weights(chain, mg::Rational(1, 100));
    mg::CostTracker tracker(chain, w);
    mg::NormEvent ev;
    ev.norm_id = "mh";
    ev.category = mg::NormCategory::Utility;
    ev.harmed_count = 1;
    ev.t = 0;
    double total = tracker.record_step({ev}, 0);
    ev.harmed_count = 2;
    ev.t = 4;
    total += tracker.record_step({ev}, 4);
    if (total != 200.0 * (3.0 / 5.0)) {
      detail = "utility total is not exactly w*3/5";
      return false;
    }
  }
  // Engine-backed: a trolley kills 3 of the 5 humans on the board.
  {
    auto sc = std::make_shared<const mg::ScenarioConfig>(mg::load_scenario(R"({
      "name": "three_of_five",
      "grid": {"width": 7, "height": 3, "blocked": []},
      "rails": [{"id": "main", "cells": [[0,1],[1,1],[2,1],[3,1],[4,1],[5,1],[6,1]]}],
      "characters": [
        {"id": "g3", "pos": [3,1], "kind": "human", "quantity": 3},
        {"id": "g2", "pos": [5,1], "kind": "human", "quantity": 2}
      ],
      "trolleys": [{"id": "t", "segment": "main", "index": 0, "speed": 1}],
      "landmark": [6,0], "agent_start": [0,0],
      "reward": {"max_steps": 10}
    })"));
    mg::LoadedChain loaded = mg::load_chain("MhNph", sc.get());
    mg::ChainWeights w = mg::compute_weights(loaded.chain, loaded.beta);
    mg::MoralEnv env(sc, loaded.chain, w, {});
    env.reset(0);
    double total = 0.0;
    while (!env.episode_over()) total += env.step(mg::Action::Stay).cost;
    if (total != 200.0 * (3.0 / 5.0)) {
      detail = "engine episode cost is not exactly w*3/5";
      return false;
    }
  }
  // Property suite: 1000 randomized episodes, event norms charge once.
  mg::MoralityChain chain = mg::chain_from_json(R"({"name":"p","norms":[
    {"id":"a","category":"action","force":4},
    {"id":"c","category":"causal","kind":"human","force":3},
    {"id":"uh","category":"utility","kind":"human","force":2,"range":[0,6]},
    {"id":"ua","category":"utility","kind":"animal","force":1,"range":[0,3]}]})");
  mg::ChainWeights w = mg::compute_weights(chain, mg::Rational(1, 100));
  std::mt19937 rng(314);
  int violations = 0;
  for (int episode = 0; episode < 1000; ++episode) {
    bool normalize = episode % 2 == 1;
    mg::CostTracker tracker(chain, w, {normalize, mg::CostOptions::UtilityMode::Increment});
    int uh = 0, ua = 0;
    bool fired_a = false, fired_c = false;
    double total = 0.0, charged_a = 0.0, charged_c = 0.0;
    int steps = 1 + static_cast<int>(rng() % 15);
    for (int t = 0; t < steps; ++t) {
      std::vector<mg::NormEvent> events;
      auto add_event = [&](const char* id, mg::NormCategory cat, bool& fired, double& charged) {
        if (rng() % 4 != 0) return;
        mg::NormEvent ev;
        ev.norm_id = id;
        ev.category = cat;
        ev.t = t;
        events.push_back(ev);
        double step_charge = fired ? 0.0 : w.values[chain.index_of(id)];
        charged += step_charge;
        fired = true;
      };
      add_event("a", mg::NormCategory::Action, fired_a, charged_a);
      add_event("c", mg::NormCategory::Causal, fired_c, charged_c);
      if (uh < 6 && rng() % 3 == 0) {
        int inc = 1 + static_cast<int>(rng() % (6 - uh));
        uh += inc;
        mg::NormEvent ev;
        ev.norm_id = "uh";
        ev.category = mg::NormCategory::Utility;
        ev.harmed_count = inc;
        ev.t = t;
        events.push_back(ev);
      }
      if (ua < 3 && rng() % 4 == 0) {
        ua += 1;
        mg::NormEvent ev;
        ev.norm_id = "ua";
        ev.category = mg::NormCategory::Utility;
        ev.harmed_count = 1;
        ev.t = t;
        events.push_back(ev);
      }
      total += tracker.record_step(events, t);
    }
    double expected = charged_a + charged_c + w.values[2] * uh / 6.0 + w.values[3] * ua / 3.0;
    if (normalize) expected /= w.sum();
    if (std::fabs(total - expected) > 1e-9 * std::max(1.0, std::fabs(expected))) ++violations;
    if (charged_a > w.values[0] || charged_c > w.values[1]) ++violations;  // once per episode
  }
  if (violations != 0) {
    detail = std::to_string(violations) + " violations in 1000 episodes";
    return false;
  }
  detail = "1000 randomized episodes, zero violations";
  return true;
}

bool lexicographic_dominance(std::string& detail) {
  std::mt19937 rng(2718);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double beta = 0.01;
  const mg::Rational rbeta(1, 100);
  long trials = 0, holds = 0;
  for (int k = 2; k <= 7; ++k) {
    std::vector<mg::NormSpec> norms;
    for (int f = 0; f < k; ++f) {
      mg::NormSpec n;
      n.id = "n" + std::to_string(f);
      n.category = mg::NormCategory::Causal;
      n.subject = mg::NormSubject::Human;
      n.force = k - f;
      norms.push_back(n);
    }
    mg::MoralityChain chain = mg::build_chain("c", norms);
    mg::ChainWeights w = mg::compute_weights(chain, rbeta);
    for (int trial = 0; trial < 1000; ++trial) {
      int rank = static_cast<int>(rng() % k);
      std::vector<double> u(k), v(k);
      for (int i = 0; i < rank; ++i) u[i] = v[i] = unit(rng);
      v[rank] = unit(rng) * (1.0 - beta);
      u[rank] = v[rank] + beta + unit(rng) * (1.0 - beta - v[rank]);
      for (int i = rank + 1; i < k; ++i) {
        u[i] = unit(rng);
        v[i] = unit(rng);
      }
      ++trials;
      if (mg::morality_metric(chain, w, u) > mg::morality_metric(chain, w, v)) ++holds;
    }
  }
  std::ostringstream os;
  os << holds << "/" << trials << " orderings follow the higher rank";
  detail = os.str();
  return holds == trials;
}

// Runs the CLI server over pipes and compares streams with in-process runs.
bool protocol_equivalence(std::string& detail, const std::string& cli_path) {
  auto scenario = mg::resolve_scenario("PushOrSwitch");
  mg::LoadedChain loaded = mg::load_chain("NphMh", scenario.get());
  mg::ChainWeights weights = mg::compute_weights(loaded.chain, loaded.beta);

  std::vector<mg::Action> actions = kPush;

  // In-process stream: one JSON array entry per step.
  json in_process = json::array();
  mg::MoralEnv env(scenario, loaded.chain, weights, {});
  env.reset(3);
  for (mg::Action a : actions) {
    mg::StepOutcome out = env.step(a);
    json events = json::array();
    for (const mg::NormEvent& ev : out.norm_events) {
      events.push_back(json::parse(mg::norm_event_to_json(ev)));
    }
    in_process.push_back({{"reward", out.reward}, {"cost", out.cost}, {"events", events}});
    if (out.terminated || out.truncated) break;
  }

  // Determinism: a second in-process run must be byte-identical.
  {
    json again = json::array();
    mg::MoralEnv env2(scenario, loaded.chain, weights, {});
    env2.reset(3);
    for (mg::Action a : actions) {
      mg::StepOutcome out = env2.step(a);
      json events = json::array();
      for (const mg::NormEvent& ev : out.norm_events) {
        events.push_back(json::parse(mg::norm_event_to_json(ev)));
      }
      again.push_back({{"reward", out.reward}, {"cost", out.cost}, {"events", events}});
      if (out.terminated || out.truncated) break;
    }
    if (again.dump() != in_process.dump()) {
      detail = "in-process runs are not deterministic";
      return false;
    }
  }

  // Served stream over the real binary.
  int to_child[2], from_child[2];
  if (pipe(to_child) != 0 || pipe(from_child) != 0) {
    detail = "pipe failed";
    return false;
  }
  pid_t pid = fork();
  if (pid < 0) {
    detail = "fork failed";
    return false;
  }
  if (pid == 0) {
    dup2(to_child[0], STDIN_FILENO);
    dup2(from_child[1], STDOUT_FILENO);
    close(to_child[0]);
    close(to_child[1]);
    close(from_child[0]);
    close(from_child[1]);
    execl(cli_path.c_str(), "moralgrid", "serve", "--serve", "stdio", (char*)nullptr);
    _exit(127);
  }
  close(to_child[0]);
  close(from_child[1]);
  FILE* to = fdopen(to_child[1], "w");
  FILE* from = fdopen(from_child[0], "r");

  auto request = [&](const json& req) -> json {
    std::string line = req.dump() + "\n";
    fputs(line.c_str(), to);
    fflush(to);
    char* buf = nullptr;
    size_t cap = 0;
    ssize_t n = getline(&buf, &cap, from);
    json res = n > 0 ? json::parse(std::string(buf, n)) : json{{"ok", false}};
    free(buf);
    return res;
  };

  json served = json::array();
  json reset = request({{"cmd", "reset"}, {"seed", 3}, {"scenario", "PushOrSwitch"},
                        {"chain", "NphMh"}});
  bool ok = reset.value("ok", false);
  if (ok) {
    for (mg::Action a : actions) {
      json res = request({{"cmd", "step"}, {"action", mg::to_string(a)}});
      if (!res.value("ok", false)) {
        ok = false;
        break;
      }
      served.push_back({{"reward", res["reward"]}, {"cost", res["info"]["cost"]},
                        {"events", res["info"]["norm_events"]}});
      if (res.value("terminated", false) || res.value("truncated", false)) break;
    }
  }
  request({{"cmd", "close"}});
  fclose(to);
  fclose(from);
  int status = 0;
  waitpid(pid, &status, 0);

  if (!ok) {
    detail = "server returned an error";
    return false;
  }
  if (served.dump() != in_process.dump()) {
    detail = "served stream differs from the in-process stream";
    return false;
  }
  detail = "byte-equal reward/cost/event streams over " + std::to_string(served.size()) +
           " steps";
  return true;
}

bool oracle_switch_standard(std::string& detail) {
  Setup s = make("SwitchStandard", "Utility");
  mg::SolveResult result = mg::exact_solve(s.scenario, s.chain, s.weights);
  if (std::find(result.actions.begin(), result.actions.end(), mg::Action::Interact) ==
      result.actions.end()) {
    detail = "optimal policy does not toggle the lever";
    return false;
  }
  if (result.per_norm_adherence.at("min_humans_harmed") != 1.0 / 6.0) {
    detail = "utility outcome is not 1 harmed of 6";
    return false;
  }
  double do_nothing = script_metric(s, {});
  double runner = script_metric(
      s, {mg::Action::Right, mg::Action::Right, mg::Action::Right, mg::Action::Right,
          mg::Action::Right, mg::Action::Right, mg::Action::Right, mg::Action::Right,
          mg::Action::Down});
  if (!(result.metric > do_nothing && result.metric > runner)) {
    detail = "oracle metric does not strictly exceed the scripted alternatives";
    return false;
  }
  std::ostringstream os;
  os << "metric " << result.metric << " > scripted max " << std::max(do_nothing, runner);
  detail = os.str();
  return true;
}

bool shaping_direction(std::string& detail) {
  Setup s = make("SwitchStandard", "Utility");
  int wins = 0;
  for (uint64_t seed : {11ull, 22ull, 33ull}) {
    mg::TrainConfig env_cfg;
    env_cfg.alpha = 1.0;  // exact backups in a deterministic world
    env_cfg.total_steps = 80000;
    env_cfg.seed = seed;
    mg::TrainConfig shaped_cfg = env_cfg;
    shaped_cfg.reward_mode = mg::TrainConfig::RewardMode::Shaped;
    shaped_cfg.lambda = 1.0;

    auto metric_of = [&](mg::QTable table) {
      auto policy = mg::make_greedy_policy(std::move(table));
      mg::EvaluateOptions opts;
      opts.episodes = 1;
      return mg::evaluate(s.scenario, s.chain, s.weights, *policy, opts).metric;
    };
    double env_metric = metric_of(mg::q_learn(s.scenario, s.chain, s.weights, env_cfg));
    double shaped_metric = metric_of(mg::q_learn(s.scenario, s.chain, s.weights, shaped_cfg));
    if (shaped_metric >= env_metric) ++wins;
  }
  detail = std::to_string(wins) + "/3 seeds with shaped metric >= env-only metric";
  return wins == 3;
}

bool evaluation_contract(std::string& detail) {
  Setup s = make("PushOrSwitch", "NphMh");
  auto policy = mg::make_scripted_policy(kFlipSwitch);
  mg::EvaluationReport defaulted = mg::evaluate(s.scenario, s.chain, s.weights, *policy);
  if (defaulted.episodes != 100) {
    detail = "default episode count is not 100";
    return false;
  }
  mg::EvaluateOptions one;
  one.episodes = 1;
  mg::EvaluationReport single = mg::evaluate(s.scenario, s.chain, s.weights, *policy, one);
  for (const auto& [id, m] : single.per_norm_m) {
    if (std::fabs(defaulted.per_norm_m.at(id) - m) > 1e-12) {
      detail = "Monte Carlo mean differs from the exact single-episode value on " + id;
      return false;
    }
  }
  if (std::fabs(defaulted.metric - single.metric) > 1e-12) {
    detail = "metric differs between 1 and 100 episodes";
    return false;
  }
  return true;
}

bool catalogue_integrity(std::string& detail) {
  std::vector<std::string> names = mg::builtin_catalogue();
  if (names.size() < 11) {
    detail = "catalogue has fewer than 11 scenarios";
    return false;
  }
  std::mt19937 rng(99);
  for (const std::string& name : names) {
    mg::ScenarioConfig c = mg::load_builtin_scenario(name);
    mg::validate_scenario(c);
    std::string doc = mg::serialize_scenario(c);
    if (mg::serialize_scenario(mg::load_scenario(doc)) != doc) {
      detail = name + " does not round-trip";
      return false;
    }
    auto sc = std::make_shared<const mg::ScenarioConfig>(std::move(c));
    mg::WorldState w = mg::reset_world(sc, 5);
    for (int t = 0; t < 50 && !w.episode_over; ++t) {
      mg::step_world(w, mg::kAllActions[rng() % mg::kNumActions]);
    }
  }
  detail = std::to_string(names.size()) + " scenarios load, round-trip, and run";
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli_path = argc > 1 ? argv[1] : "./moralgrid";

  criterion(1, "weight recursion exact to k=7", 1.0, weight_recursion);
  criterion(2, "PushOrSwitch hand-policy metrics and orderings", 5.0, push_or_switch_policies);
  criterion(3, "cost bookkeeping: one-shot totals and once-per-episode charges", 0,
            cost_bookkeeping);
  criterion(4, "lexicographic dominance, 1000 trials per chain length", 0,
            lexicographic_dominance);
  criterion(5, "determinism and served-protocol equivalence", 10.0,
            [&](std::string& d) { return protocol_equivalence(d, cli_path); });
  criterion(6, "exact oracle on SwitchStandard under Utility", 10.0, oracle_switch_standard);
  criterion(7, "reward shaping direction over 3 seeds", 0, shaping_direction);
  criterion(8, "evaluation contract: 100-episode default, zero-variance determinism", 0,
            evaluation_contract);
  criterion(9, "catalogue integrity", 0, catalogue_integrity);

  if (g_failures == 0) {
    std::printf("all acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance criteria failed\n", g_failures);
  return 1;
}
