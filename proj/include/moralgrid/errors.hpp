#pragma once

#include <stdexcept>
#include <string>

namespace moralgrid {

// Invalid scenario/chain/CLI configuration. Messages name the offending
// entity or field path.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// step() called after the episode terminated or truncated.
class EpisodeFinishedError : public std::logic_error {
public:
  EpisodeFinishedError() : std::logic_error("episode finished; call reset()") {}
};

// Operation called in the wrong lifecycle phase (e.g. adherence mid-episode).
class StateError : public std::logic_error {
public:
  explicit StateError(const std::string& msg) : std::logic_error(msg) {}
};

// Enumeration/search exceeded its configured budget.
class ResourceError : public std::runtime_error {
public:
  explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace moralgrid
