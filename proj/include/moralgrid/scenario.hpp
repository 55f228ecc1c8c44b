#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "moralgrid/geometry.hpp"

namespace moralgrid {

enum class CharacterKind { Human, Animal, Robot };

const char* to_string(CharacterKind k);
CharacterKind kind_from_string(const std::string& s);

struct RailSegmentConfig {
  std::string id;
  std::vector<GridPos> cells;  // contiguous, 4-connected, no repeats
};

struct RailSwitchConfig {
  std::string id;
  GridPos location;
  std::vector<std::string> branches;  // >= 2 segment ids through `location`
  int active_index = 0;
};

struct LeverConfig {
  std::string id;
  GridPos pos;
  int num_states = 2;  // 2 or 3
  int state = 0;
  std::string linked_switch;
};

// Pistons are inert mechanical props: they mirror their lever's state but
// have no further dynamics.
struct PistonConfig {
  std::string id;
  GridPos pos;
  std::string linked_lever;
  int state = 0;
};

struct CharacterConfig {
  std::string id;
  GridPos pos;
  CharacterKind kind = CharacterKind::Human;
  int quantity = 1;
};

struct TrolleyConfig {
  std::string id;
  std::string segment;
  int index = 0;  // start cell along the segment
  int speed = 1;  // cells per timestep
  int activation_delay = 0;
};

struct RewardConfig {
  double step_penalty = -1.0;
  double landmark_reward = 100.0;
  double agent_harm_penalty = -100.0;
  int max_steps = 50;
};

struct ObservationConfig {
  std::vector<std::string> entities;  // "agent" plus entity ids, in order
  bool normalize = false;
};

enum class LandmarkMode { Arrive, Interact };

struct ScenarioConfig {
  int schema_version = 1;
  std::string name;
  std::string description;
  int width = 1;
  int height = 1;
  std::vector<GridPos> blocked;
  std::vector<RailSegmentConfig> rails;
  std::vector<RailSwitchConfig> switches;
  std::vector<LeverConfig> levers;
  std::vector<PistonConfig> pistons;
  std::vector<CharacterConfig> characters;
  std::vector<TrolleyConfig> trolleys;
  GridPos landmark;
  LandmarkMode landmark_mode = LandmarkMode::Arrive;
  GridPos agent_start;
  ObservationConfig observation;
  RewardConfig reward;

  bool in_grid(GridPos p) const {
    return p.x >= 0 && p.x < width && p.y >= 0 && p.y < height;
  }
  bool is_blocked(GridPos p) const;
  int total_quantity(CharacterKind kind) const;
  int rail_index(const std::string& id) const;    // -1 if unknown
  int switch_index(const std::string& id) const;  // -1 if unknown
};

struct VariantConfig {
  std::string name;
  std::string base;
  struct CharacterOverride {
    std::optional<CharacterKind> kind;
    std::optional<int> quantity;
    std::optional<GridPos> pos;
  };
  std::map<std::string, CharacterOverride> characters;
  std::map<std::string, int> trolley_speeds;
};

ScenarioConfig load_scenario(const std::string& json_text);
std::string serialize_scenario(const ScenarioConfig& config);
void validate_scenario(const ScenarioConfig& config);  // throws ConfigError

VariantConfig load_variant(const std::string& json_text);
ScenarioConfig instantiate_variant(const ScenarioConfig& base, const VariantConfig& variant);

uint64_t scenario_hash(const ScenarioConfig& config);

}  // namespace moralgrid
