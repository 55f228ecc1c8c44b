#pragma once

#include <memory>
#include <string>
#include <vector>

#include "moralgrid/scenario.hpp"

namespace moralgrid {

struct CharacterGroup {
  std::string id;
  GridPos pos;
  CharacterKind kind = CharacterKind::Human;
  int quantity = 1;
  bool harmed = false;
  bool pushed_by_agent = false;
};

struct LeverState {
  std::string id;
  GridPos pos;
  int num_states = 2;
  int state = 0;
  int switch_idx = -1;  // resolved index into WorldState switches
};

struct SwitchState {
  std::string id;
  GridPos location;
  std::vector<int> branch_segments;  // resolved rail indices
  int active_index = 0;
  int initial_index = 0;
};

struct TrolleyState {
  std::string id;
  int segment = 0;  // resolved rail index
  int index = 0;
  int speed = 1;
  int activation_delay = 0;
  bool active = true;
  bool harmed = false;       // set when the trolley collides with a body
  bool route_altered = false;  // re-routed at a switch left off its initial branch
};

struct AgentState {
  GridPos pos;
  bool harmed = false;
  bool terminated = false;
};

// One casualty event produced by the trolley phase or an immediate push
// collision. `personal` marks push-lineage harm, `caused` harm downstream of
// an agent-altered switch.
struct HarmRecord {
  bool is_agent = false;
  CharacterKind kind = CharacterKind::Human;
  int count = 0;
  bool personal = false;
  bool caused = false;
  std::string entity_id;
};

struct InteractEffect {
  enum class Kind { None, LeverToggled, CharacterPushed, LandmarkActivated };
  Kind kind = Kind::None;
  std::string target_id;
  CharacterKind pushed_kind = CharacterKind::Human;
};

// Raw result of one engine step, before norm attribution.
struct StepResult {
  int t = 0;  // step index this result belongs to
  double reward = 0.0;
  bool terminated = false;
  bool truncated = false;
  bool landmark_reached = false;
  bool agent_newly_harmed = false;
  InteractEffect interact;
  std::vector<HarmRecord> harms;
};

// Full deterministic simulation state. Cheap to copy; the scenario itself is
// shared immutably.
struct WorldState {
  std::shared_ptr<const ScenarioConfig> scenario;
  std::vector<CharacterGroup> characters;
  std::vector<LeverState> levers;
  std::vector<SwitchState> switches;
  std::vector<int> piston_states;
  std::vector<TrolleyState> trolleys;
  std::vector<int> trolley_order;  // evaluation order: ascending trolley id
  AgentState agent;
  int timestep = 0;
  bool episode_over = false;
  bool landmark_done = false;
  uint64_t seed = 0;

  GridPos trolley_pos(const TrolleyState& t) const {
    return scenario->rails[t.segment].cells[t.index];
  }
  const CharacterGroup* group_at(GridPos p) const;
  bool active_trolley_at(GridPos p) const;
  bool cell_walkable(GridPos p) const;  // for the agent
};

WorldState reset_world(std::shared_ptr<const ScenarioConfig> scenario, uint64_t seed);

// Applies one action: agent phase, trolley phase, harm resolution, reward,
// termination/truncation. Throws EpisodeFinishedError after episode end.
StepResult step_world(WorldState& world, Action action);

// INTERACT sub-action resolution (lever first, then push, then landmark;
// adjacency scanned UP, DOWN, LEFT, RIGHT). Appends any immediate push
// collision to `harms`.
InteractEffect resolve_interact(WorldState& world, std::vector<HarmRecord>& harms);

// Advances every active trolley up to `speed` cells with collision checks at
// each intermediate cell.
std::vector<HarmRecord> advance_trolleys(WorldState& world);

// Canonical serialization of the dynamic state; equal strings iff equal
// states. The digest is its FNV-1a hash.
std::string canonical_state_string(const WorldState& world);
std::string state_digest(const WorldState& world);

}  // namespace moralgrid
