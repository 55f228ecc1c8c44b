#pragma once

#include <memory>
#include <optional>
#include <string>

#include "moralgrid/env.hpp"

namespace moralgrid {

// One protocol session: a single environment instance driven by
// newline-delimited JSON requests
//   {"cmd":"reset","seed":0,"scenario":?,"variant":?,"chain":?}
//   {"cmd":"step","action":"UP"}
//   {"cmd":"describe"} {"cmd":"close"}
// Every request yields exactly one response; errors come back as
// {"ok":false,"error":...} and keep the session alive.
class Session {
public:
  struct Defaults {
    std::optional<std::string> scenario;
    std::optional<std::string> variant;
    std::optional<std::string> chain;
    CostOptions cost_options;
  };

  explicit Session(Defaults defaults = {});

  // Handles one request line and returns one response line (no newline).
  std::string handle_line(const std::string& line);

  bool closed() const { return closed_; }

private:
  Defaults defaults_;
  std::unique_ptr<MoralEnv> env_;
  bool closed_ = false;
};

// Serves sessions over stdin/stdout (one session) until EOF or close.
int serve_stdio(const Session::Defaults& defaults);

// Serves sessions over TCP; one session per connection, connections handled
// concurrently. `max_connections` < 0 means run until interrupted.
int serve_tcp(int port, const Session::Defaults& defaults, int max_connections = -1);

}  // namespace moralgrid
