#include "moralgrid/protocol.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>
#include <iostream>
#include <thread>
#include <vector>

#include "json.hpp"
#include "moralgrid/errors.hpp"
#include "moralgrid/registry.hpp"

namespace moralgrid {

using nlohmann::json;

namespace {

json observation_to_json(const Observation& obs) {
  json j = json::object();
  for (const auto& e : obs.entries) {
    json entry;
    entry["type"] = e.entity_type;
    for (const auto& [name, value] : e.components) entry[name] = value;
    j[e.name] = entry;
  }
  return j;
}

json events_to_json(const std::vector<NormEvent>& events) {
  json arr = json::array();
  for (const NormEvent& ev : events) {
    json j;
    j["id"] = ev.norm_id;
    j["category"] = to_string(ev.category);
    j["t"] = ev.t;
    if (ev.harmed_count) j["harmed_count"] = *ev.harmed_count;
    if (ev.subject_kind) j["kind"] = to_string(*ev.subject_kind);
    j["personal"] = ev.personal;
    j["via_lever"] = ev.via_lever;
    arr.push_back(j);
  }
  return arr;
}

json error_response(const std::string& message) {
  return json{{"ok", false}, {"error", message}};
}

}  // namespace

Session::Session(Defaults defaults) : defaults_(std::move(defaults)) {}

std::string Session::handle_line(const std::string& line) {
  json req;
  try {
    req = json::parse(line);
  } catch (const json::parse_error& e) {
    return error_response(std::string("malformed JSON: ") + e.what()).dump();
  }
  if (!req.is_object() || !req.contains("cmd") || !req["cmd"].is_string()) {
    return error_response("request needs a string 'cmd'").dump();
  }
  const std::string cmd = req["cmd"].get<std::string>();

  try {
    if (cmd == "describe") {
      json j;
      j["ok"] = true;
      j["scenarios"] = builtin_catalogue();
      j["chains"] = chain_preset_names();
      json actions = json::array();
      for (Action a : kAllActions) actions.push_back(to_string(a));
      j["actions"] = actions;
      if (env_) {
        j["scenario"] = env_->scenario().name;
        j["chain"] = env_->chain().name;
        j["max_steps"] = env_->scenario().reward.max_steps;
      }
      return j.dump();
    }

    if (cmd == "reset") {
      std::optional<std::string> scenario_name = defaults_.scenario;
      if (req.contains("scenario")) scenario_name = req["scenario"].get<std::string>();
      if (!scenario_name) return error_response("no scenario selected").dump();
      std::optional<std::string> variant = defaults_.variant;
      if (req.contains("variant")) variant = req["variant"].get<std::string>();
      std::string chain_name = defaults_.chain.value_or("Utility");
      if (req.contains("chain")) chain_name = req["chain"].get<std::string>();
      uint64_t seed = req.value("seed", static_cast<uint64_t>(0));

      auto scenario = resolve_scenario(*scenario_name, variant);
      LoadedChain loaded = load_chain(chain_name, scenario.get());
      ChainWeights weights = compute_weights(loaded.chain, loaded.beta);
      env_ = std::make_unique<MoralEnv>(scenario, loaded.chain, weights,
                                        defaults_.cost_options);
      Observation obs = env_->reset(seed);
      json j;
      j["ok"] = true;
      j["obs"] = observation_to_json(obs);
      j["scenario"] = scenario->name;
      j["chain"] = loaded.chain.name;
      return j.dump();
    }

    if (cmd == "step") {
      if (!env_) return error_response("step before reset").dump();
      if (env_->episode_over()) return error_response("episode finished").dump();
      if (!req.contains("action")) return error_response("step needs an 'action'").dump();
      Action action;
      try {
        action = action_from_string(req["action"].get<std::string>());
      } catch (const ConfigError& e) {
        return error_response(e.what()).dump();
      }
      StepOutcome out = env_->step(action);
      json j;
      j["ok"] = true;
      j["obs"] = observation_to_json(out.obs);
      j["reward"] = out.reward;
      j["terminated"] = out.terminated;
      j["truncated"] = out.truncated;
      j["info"] = {{"norm_events", events_to_json(out.norm_events)}, {"cost", out.cost}};
      return j.dump();
    }

    if (cmd == "close") {
      closed_ = true;
      return json{{"ok", true}}.dump();
    }

    return error_response("unknown cmd '" + cmd + "'").dump();
  } catch (const std::exception& e) {
    return error_response(e.what()).dump();
  }
}

int serve_stdio(const Session::Defaults& defaults) {
  Session session(defaults);
  std::string line;
  while (!session.closed() && std::getline(std::cin, line)) {
    std::cout << session.handle_line(line) << "\n" << std::flush;
  }
  return 0;
}

namespace {

void serve_connection(int fd, const Session::Defaults& defaults) {
  Session session(defaults);
  std::string buffer;
  char chunk[4096];
  while (!session.closed()) {
    auto newline = buffer.find('\n');
    if (newline == std::string::npos) {
      ssize_t n = ::read(fd, chunk, sizeof(chunk));
      if (n <= 0) break;
      buffer.append(chunk, static_cast<size_t>(n));
      continue;
    }
    std::string line = buffer.substr(0, newline);
    buffer.erase(0, newline + 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string response = session.handle_line(line) + "\n";
    size_t off = 0;
    while (off < response.size()) {
      ssize_t n = ::write(fd, response.data() + off, response.size() - off);
      if (n <= 0) break;
      off += static_cast<size_t>(n);
    }
  }
  ::close(fd);
}

}  // namespace

int serve_tcp(int port, const Session::Defaults& defaults, int max_connections) {
  int listener = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listener < 0) {
    std::cerr << "socket: " << std::strerror(errno) << "\n";
    return 3;
  }
  int one = 1;
  ::setsockopt(listener, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(static_cast<uint16_t>(port));
  if (::bind(listener, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0 ||
      ::listen(listener, 8) < 0) {
    std::cerr << "bind/listen on port " << port << ": " << std::strerror(errno) << "\n";
    ::close(listener);
    return 3;
  }
  std::cerr << "listening on 127.0.0.1:" << port << "\n";

  std::vector<std::thread> workers;
  int served = 0;
  while (max_connections < 0 || served < max_connections) {
    int fd = ::accept(listener, nullptr, nullptr);
    if (fd < 0) break;
    ++served;
    workers.emplace_back(serve_connection, fd, defaults);
  }
  for (auto& w : workers) w.join();
  ::close(listener);
  return 0;
}

}  // namespace moralgrid
