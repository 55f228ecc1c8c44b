#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "moralgrid/errors.hpp"
#include "moralgrid/evaluator.hpp"
#include "moralgrid/protocol.hpp"
#include "moralgrid/registry.hpp"
#include "moralgrid/render.hpp"
#include "moralgrid/solver.hpp"
#include "moralgrid/trace.hpp"

namespace mg = moralgrid;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw mg::ConfigError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::optional<std::string>& path, const std::string& text) {
  if (path) {
    std::ofstream out(*path);
    if (!out) throw mg::ConfigError("cannot write '" + *path + "'");
    out << text;
  } else {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << "\n";
  }
}

// Shared option bundle; subcommands pick what they need.
struct CommonArgs {
  std::string scenario;
  std::optional<std::string> variant;
  std::string chain = "Utility";
  std::string beta = "0.01";
  int episodes = 100;
  uint64_t seed = 0;
  bool normalize_cost = false;
  std::string utility_mode = "increment";
  std::optional<std::string> out;

  mg::CostOptions cost_options() const {
    mg::CostOptions o;
    o.normalize = normalize_cost;
    if (utility_mode == "level") {
      o.utility_mode = mg::CostOptions::UtilityMode::Level;
    } else if (utility_mode != "increment") {
      throw mg::ConfigError("--utility-mode must be 'increment' or 'level'");
    }
    return o;
  }
};

struct LoadedSetup {
  std::shared_ptr<const mg::ScenarioConfig> scenario;
  mg::MoralityChain chain;
  mg::ChainWeights weights;
};

LoadedSetup load_setup(const CommonArgs& args) {
  LoadedSetup s;
  s.scenario = mg::resolve_scenario(args.scenario, args.variant);
  mg::LoadedChain loaded = mg::load_chain(args.chain, s.scenario.get());
  mg::Rational beta = args.beta.empty() ? loaded.beta : mg::Rational::from_decimal(args.beta);
  s.chain = std::move(loaded.chain);
  s.weights = mg::compute_weights(s.chain, beta);
  return s;
}

std::unique_ptr<mg::Policy> load_policy(const std::string& spec, uint64_t seed) {
  if (spec == "random") return mg::make_random_policy(seed);
  if (spec.rfind("scripted:", 0) == 0) {
    std::string path = spec.substr(9);
    return mg::make_scripted_policy(mg::parse_action_script(read_file(path)),
                                    "scripted:" + path);
  }
  if (spec.rfind("qtable:", 0) == 0) {
    std::string path = spec.substr(7);
    return mg::make_greedy_policy(mg::QTable::from_json(read_file(path)), "qtable:" + path);
  }
  throw mg::ConfigError("--policy must be random, scripted:<file>, or qtable:<file>");
}

int cmd_list(bool chains_only, bool scenarios_only) {
  json j;
  if (!chains_only) {
    j["scenarios"] = mg::builtin_catalogue();
    j["variants"] = mg::builtin_variant_names();
  }
  if (!scenarios_only) j["chains"] = mg::chain_preset_names();
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_describe(const CommonArgs& args) {
  LoadedSetup s = load_setup(args);
  json j;
  j["scenario"] = json::parse(mg::serialize_scenario(*s.scenario));
  j["chain"] = json::parse(mg::chain_to_json(s.chain, s.weights.beta));
  json w = json::array();
  for (double v : s.weights.values) w.push_back(v);
  j["weights"] = w;
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_render(const CommonArgs& args) {
  auto scenario = mg::resolve_scenario(args.scenario, args.variant);
  mg::WorldState world = mg::reset_world(scenario, args.seed);
  std::cout << mg::render_ascii(world);
  return kExitOk;
}

int cmd_play(const CommonArgs& args, const std::string& script_path, bool render,
             const std::optional<std::string>& trace_path) {
  LoadedSetup s = load_setup(args);
  std::vector<mg::Action> script;
  if (!script_path.empty()) script = mg::parse_action_script(read_file(script_path));

  mg::MoralEnv env(s.scenario, s.chain, s.weights, args.cost_options());
  env.reset(args.seed);

  mg::EpisodeTrace trace;
  trace.header.scenario = s.scenario->name;
  trace.header.scenario_hash = mg::hex64(mg::scenario_hash(*s.scenario));
  trace.header.chain = s.chain.name;
  trace.header.chain_hash = mg::hex64(mg::chain_hash(s.chain));
  trace.header.beta = s.weights.beta.to_double();
  trace.header.seed = args.seed;
  trace.header.normalize_cost = args.normalize_cost;

  if (render) std::cout << mg::render_ascii(env.world()) << "\n";
  size_t next = 0;
  while (!env.episode_over()) {
    mg::Action a = next < script.size() ? script[next++] : mg::Action::Stay;
    mg::StepOutcome out = env.step(a);
    trace.steps.push_back({out.raw.t, a, out.reward, out.cost, out.norm_events,
                           mg::state_digest(env.world())});
    if (render) {
      std::cout << "t=" << out.raw.t << " action=" << mg::to_string(a)
                << " reward=" << out.reward << " cost=" << out.cost << "\n"
                << mg::render_ascii(env.world()) << "\n";
    }
  }
  mg::TraceEnd end;
  end.terminated = env.world().agent.terminated || env.world().landmark_done;
  end.truncated = !end.terminated;
  end.episode_return = env.episode_return();
  end.total_cost = env.episode_cost();
  end.adherence = env.episode_adherence();
  trace.end = end;

  if (trace_path) {
    std::ofstream out(*trace_path);
    if (!out) throw mg::ConfigError("cannot write '" + *trace_path + "'");
    mg::write_trace(out, trace);
  }
  json j;
  j["return"] = end.episode_return;
  j["total_cost"] = end.total_cost;
  j["steps"] = trace.steps.size();
  j["adherence"] = end.adherence;
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_evaluate(const CommonArgs& args, const std::string& policy_spec,
                 const std::vector<std::string>& subset) {
  LoadedSetup s = load_setup(args);
  auto policy = load_policy(policy_spec, args.seed);
  mg::EvaluateOptions opts;
  opts.episodes = args.episodes;
  opts.base_seed = args.seed;
  opts.cost_options = args.cost_options();
  opts.beta = s.weights.beta;
  if (!subset.empty()) opts.subset = subset;
  mg::EvaluationReport report = mg::evaluate(s.scenario, s.chain, s.weights, *policy, opts);
  write_output(args.out, report.to_json() + "\n");
  return kExitOk;
}

int cmd_train(const CommonArgs& args, const std::string& mode, double lambda, long steps,
              double alpha, double gamma) {
  LoadedSetup s = load_setup(args);
  mg::TrainConfig config;
  config.alpha = alpha;
  config.gamma = gamma;
  config.total_steps = steps;
  config.lambda = lambda;
  config.seed = args.seed;
  config.cost_options = args.cost_options();
  if (mode == "shaped") {
    config.reward_mode = mg::TrainConfig::RewardMode::Shaped;
  } else if (mode != "env") {
    throw mg::ConfigError("--mode must be 'env' or 'shaped'");
  }
  mg::QTable table = mg::q_learn(s.scenario, s.chain, s.weights, config);
  write_output(args.out, table.to_json() + "\n");
  std::cerr << "trained " << table.values.size() << " states over " << steps << " steps\n";
  return kExitOk;
}

int cmd_solve(const CommonArgs& args, int horizon, long state_cap) {
  LoadedSetup s = load_setup(args);
  mg::SolveOptions opts;
  opts.horizon = horizon;
  opts.state_cap = state_cap;
  opts.cost_options = args.cost_options();
  mg::SolveResult result = mg::exact_solve(s.scenario, s.chain, s.weights, opts);
  json j;
  json actions = json::array();
  for (mg::Action a : result.actions) actions.push_back(mg::to_string(a));
  j["actions"] = actions;
  j["metric"] = result.metric;
  j["return"] = result.episode_return;
  j["adherence"] = result.per_norm_adherence;
  j["states_explored"] = result.states_explored;
  write_output(args.out, j.dump(2) + "\n");
  return kExitOk;
}

int cmd_score(const CommonArgs& args, const std::string& trace_path) {
  mg::EpisodeTrace trace = mg::read_trace_file(trace_path);
  mg::LoadedChain loaded = mg::load_chain(args.chain, nullptr);
  for (const mg::NormSpec& n : loaded.chain.norms) {
    if (n.category == mg::NormCategory::Utility && !n.utility_range) {
      throw mg::ConfigError("chain '" + loaded.chain.name + "' norm '" + n.id +
                            "' needs an explicit utility range to score a trace");
    }
  }
  mg::Rational beta = args.beta.empty() ? loaded.beta : mg::Rational::from_decimal(args.beta);
  mg::ChainWeights weights = mg::compute_weights(loaded.chain, beta);
  mg::ScoreSummary summary = mg::score_trace(trace, loaded.chain, weights, args.cost_options());
  write_output(args.out, summary.to_json() + "\n");
  return kExitOk;
}

int cmd_serve(const CommonArgs& args, const std::string& transport) {
  mg::Session::Defaults defaults;
  if (!args.scenario.empty()) defaults.scenario = args.scenario;
  defaults.variant = args.variant;
  if (!args.chain.empty()) defaults.chain = args.chain;
  defaults.cost_options = args.cost_options();
  if (transport == "stdio") return mg::serve_stdio(defaults);
  if (transport.rfind("tcp:", 0) == 0) {
    int port = std::stoi(transport.substr(4));
    return mg::serve_tcp(port, defaults);
  }
  throw mg::ConfigError("--serve must be 'stdio' or 'tcp:PORT'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"moralgrid: moral-dilemma grid-world simulator and evaluator"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string policy_spec = "random";
  std::vector<std::string> subset;
  std::string script_path, trace_path_in, mode = "env", transport = "stdio";
  std::optional<std::string> trace_path_out;
  bool render_flag = false, chains_only = false, scenarios_only = false;
  double lambda = 1.0, alpha = 0.1, gamma = 0.99;
  long steps = 50000, state_cap = 4000000;
  int horizon = -1;

  auto add_common = [&](CLI::App* cmd, bool need_scenario) {
    auto* opt = cmd->add_option("--scenario", args.scenario, "scenario name or JSON path");
    if (need_scenario) opt->required();
    cmd->add_option("--variant", args.variant, "variant name or JSON path");
    cmd->add_option("--chain", args.chain, "chain preset, catalogue name, or JSON path");
    cmd->add_option("--beta", args.beta, "lexicographic resolution (decimal)");
    cmd->add_option("--seed", args.seed, "base seed");
    cmd->add_flag("--normalize-cost", args.normalize_cost, "normalise step costs by weight sum");
    cmd->add_option("--utility-mode", args.utility_mode, "utility charging: increment|level");
    cmd->add_option("--out", args.out, "output file (default stdout)");
  };

  auto* list = app.add_subcommand("list", "list builtin scenarios, variants, and chains");
  list->add_flag("--chains", chains_only, "chains only");
  list->add_flag("--scenarios", scenarios_only, "scenarios only");

  auto* describe = app.add_subcommand("describe", "dump a resolved scenario and chain");
  add_common(describe, true);

  auto* render = app.add_subcommand("render", "print the reset frame");
  add_common(render, true);

  auto* play = app.add_subcommand("play", "run a scripted episode");
  add_common(play, true);
  play->add_option("--script", script_path, "action script file (one action per line)");
  play->add_flag("--render", render_flag, "print a frame per step");
  play->add_option("--trace", trace_path_out, "write a JSONL trace");

  auto* evaluate = app.add_subcommand("evaluate", "Monte Carlo policy evaluation");
  add_common(evaluate, true);
  evaluate->add_option("--policy", policy_spec, "random | scripted:<file> | qtable:<file>");
  evaluate->add_option("--episodes", args.episodes, "evaluation episodes");
  evaluate->add_option("--subset", subset, "restrict the metric to these norm ids");

  auto* train = app.add_subcommand("train", "tabular Q-learning");
  add_common(train, true);
  train->add_option("--mode", mode, "env | shaped");
  train->add_option("--lambda", lambda, "shaped-reward cost weight");
  train->add_option("--steps", steps, "total environment steps");
  train->add_option("--alpha", alpha, "learning rate");
  train->add_option("--gamma", gamma, "discount factor");

  auto* solve = app.add_subcommand("solve", "exact lexicographic oracle");
  add_common(solve, true);
  solve->add_option("--horizon", horizon, "search horizon (default scenario max_steps)");
  solve->add_option("--state-cap", state_cap, "state budget");

  auto* score = app.add_subcommand("score", "re-score a stored trace against a chain");
  score->add_option("--trace", trace_path_in, "JSONL trace file")->required();
  score->add_option("--chain", args.chain, "chain preset or JSON path");
  score->add_option("--beta", args.beta, "lexicographic resolution (decimal)");
  score->add_flag("--normalize-cost", args.normalize_cost, "normalise step costs");
  score->add_option("--utility-mode", args.utility_mode, "increment|level");
  score->add_option("--out", args.out, "output file");

  auto* serve = app.add_subcommand("serve", "environment server (newline-delimited JSON)");
  serve->add_option("--serve", transport, "stdio | tcp:PORT")->capture_default_str();
  serve->add_option("--scenario", args.scenario, "default scenario");
  serve->add_option("--variant", args.variant, "default variant");
  serve->add_option("--chain", args.chain, "default chain");
  serve->add_flag("--normalize-cost", args.normalize_cost, "normalise step costs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) return cmd_list(chains_only, scenarios_only);
    if (describe->parsed()) return cmd_describe(args);
    if (render->parsed()) return cmd_render(args);
    if (play->parsed()) return cmd_play(args, script_path, render_flag, trace_path_out);
    if (evaluate->parsed()) return cmd_evaluate(args, policy_spec, subset);
    if (train->parsed()) return cmd_train(args, mode, lambda, steps, alpha, gamma);
    if (solve->parsed()) return cmd_solve(args, horizon, state_cap);
    if (score->parsed()) return cmd_score(args, trace_path_in);
    if (serve->parsed()) return cmd_serve(args, transport);
  } catch (const mg::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
