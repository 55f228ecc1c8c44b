#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "moralgrid/errors.hpp"

namespace moralgrid {

struct GridPos {
  int x = 0;
  int y = 0;

  bool operator==(const GridPos&) const = default;
};

// The six discrete actions. Order is fixed; it is also the deterministic
// tie-break order used by the solver and greedy policies.
enum class Action : int { Up = 0, Down, Left, Right, Stay, Interact };

inline constexpr int kNumActions = 6;
inline constexpr std::array<Action, kNumActions> kAllActions = {
    Action::Up, Action::Down, Action::Left, Action::Right, Action::Stay, Action::Interact};

inline const char* to_string(Action a) {
  switch (a) {
    case Action::Up: return "UP";
    case Action::Down: return "DOWN";
    case Action::Left: return "LEFT";
    case Action::Right: return "RIGHT";
    case Action::Stay: return "STAY";
    case Action::Interact: return "INTERACT";
  }
  return "?";
}

inline Action action_from_string(const std::string& s) {
  for (Action a : kAllActions) {
    if (s == to_string(a)) return a;
  }
  throw ConfigError("unknown action '" + s + "'");
}

// Unit offset of a movement action; Stay/Interact map to (0,0).
inline GridPos action_delta(Action a) {
  switch (a) {
    case Action::Up: return {0, -1};
    case Action::Down: return {0, 1};
    case Action::Left: return {-1, 0};
    case Action::Right: return {1, 0};
    default: return {0, 0};
  }
}

inline GridPos operator+(GridPos a, GridPos b) { return {a.x + b.x, a.y + b.y}; }

inline bool adjacent4(GridPos a, GridPos b) {
  int dx = a.x - b.x, dy = a.y - b.y;
  return (dx == 0 && (dy == 1 || dy == -1)) || (dy == 0 && (dx == 1 || dx == -1));
}

// FNV-1a, used for state digests and file provenance hashes.
inline uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

}  // namespace moralgrid
