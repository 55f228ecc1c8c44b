#include "moralgrid/world.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "moralgrid/errors.hpp"

namespace moralgrid {

const CharacterGroup* WorldState::group_at(GridPos p) const {
  for (const auto& g : characters) {
    if (g.pos == p) return &g;
  }
  return nullptr;
}

bool WorldState::active_trolley_at(GridPos p) const {
  for (const auto& t : trolleys) {
    if (t.active && trolley_pos(t) == p) return true;
  }
  return false;
}

bool WorldState::cell_walkable(GridPos p) const {
  if (!scenario->in_grid(p) || scenario->is_blocked(p)) return false;
  if (group_at(p)) return false;
  if (active_trolley_at(p)) return false;
  for (const auto& l : levers) {
    if (l.pos == p) return false;
  }
  for (size_t i = 0; i < scenario->pistons.size(); ++i) {
    if (scenario->pistons[i].pos == p) return false;
  }
  return true;
}

WorldState reset_world(std::shared_ptr<const ScenarioConfig> scenario, uint64_t seed) {
  validate_scenario(*scenario);
  WorldState w;
  w.scenario = scenario;
  w.seed = seed;
  for (const auto& c : scenario->characters) {
    w.characters.push_back({c.id, c.pos, c.kind, c.quantity, false, false});
  }
  for (const auto& s : scenario->switches) {
    SwitchState sw{s.id, s.location, {}, s.active_index, s.active_index};
    for (const auto& b : s.branches) sw.branch_segments.push_back(scenario->rail_index(b));
    w.switches.push_back(std::move(sw));
  }
  for (const auto& l : scenario->levers) {
    w.levers.push_back({l.id, l.pos, l.num_states, l.state, scenario->switch_index(l.linked_switch)});
  }
  for (const auto& p : scenario->pistons) w.piston_states.push_back(p.state);
  for (const auto& t : scenario->trolleys) {
    w.trolleys.push_back({t.id, scenario->rail_index(t.segment), t.index, t.speed,
                          t.activation_delay, true, false, false});
  }
  w.trolley_order.resize(w.trolleys.size());
  std::iota(w.trolley_order.begin(), w.trolley_order.end(), 0);
  std::sort(w.trolley_order.begin(), w.trolley_order.end(),
            [&](int a, int b) { return w.trolleys[a].id < w.trolleys[b].id; });
  w.agent = {scenario->agent_start, false, false};
  return w;
}

namespace {

// Applies a lever toggle to its switch and any linked pistons.
void toggle_lever(WorldState& w, LeverState& lever) {
  lever.state = (lever.state + 1) % lever.num_states;
  SwitchState& sw = w.switches[lever.switch_idx];
  int clamped = std::min(lever.state, static_cast<int>(sw.branch_segments.size()) - 1);
  sw.active_index = clamped;
  for (size_t i = 0; i < w.scenario->pistons.size(); ++i) {
    if (w.scenario->pistons[i].linked_lever == lever.id) w.piston_states[i] = lever.state;
  }
}

bool push_target_free(const WorldState& w, GridPos p) {
  if (!w.scenario->in_grid(p) || w.scenario->is_blocked(p)) return false;
  if (w.group_at(p)) return false;
  if (w.agent.pos == p) return false;
  for (const auto& l : w.levers) {
    if (l.pos == p) return false;
  }
  for (const auto& pc : w.scenario->pistons) {
    if (pc.pos == p) return false;
  }
  return true;  // rails, landmark and trolley cells are pushable-into
}

void harm_group(WorldState& w, CharacterGroup& g, bool personal, bool caused,
                std::vector<HarmRecord>& harms) {
  if (g.harmed) return;
  g.harmed = true;
  harms.push_back({false, g.kind, g.quantity, personal, caused, g.id});
  (void)w;
}

}  // namespace

InteractEffect resolve_interact(WorldState& w, std::vector<HarmRecord>& harms) {
  static const GridPos kScan[4] = {{0, -1}, {0, 1}, {-1, 0}, {1, 0}};  // UP DOWN LEFT RIGHT

  // Levers take priority over pushes.
  for (GridPos d : kScan) {
    GridPos p = w.agent.pos + d;
    for (auto& lever : w.levers) {
      if (lever.pos == p) {
        toggle_lever(w, lever);
        return {InteractEffect::Kind::LeverToggled, lever.id, CharacterKind::Human};
      }
    }
  }
  for (GridPos d : kScan) {
    GridPos p = w.agent.pos + d;
    for (auto& g : w.characters) {
      if (g.pos != p) continue;
      GridPos target = p + d;  // directly away from the agent
      if (!push_target_free(w, target)) return {};  // blocked push is a no-op
      g.pos = target;
      g.pushed_by_agent = true;
      InteractEffect effect{InteractEffect::Kind::CharacterPushed, g.id, g.kind};
      // Pushed into an active trolley's cell: harmed immediately.
      for (auto& t : w.trolleys) {
        if (t.active && w.trolley_pos(t) == target) {
          harm_group(w, g, /*personal=*/true, t.route_altered, harms);
          t.active = false;
          t.harmed = true;
        }
      }
      return effect;
    }
  }
  if (w.scenario->landmark_mode == LandmarkMode::Interact && w.agent.pos == w.scenario->landmark) {
    return {InteractEffect::Kind::LandmarkActivated, "landmark", CharacterKind::Human};
  }
  return {};
}

namespace {

// Moves one trolley a single cell, re-routing when it leaves a switch cell.
// Returns false when the trolley deactivated at the end of its track.
bool advance_one_cell(WorldState& w, TrolleyState& t) {
  GridPos cur = w.trolley_pos(t);
  for (const auto& sw : w.switches) {
    if (sw.location != cur) continue;
    int seg = sw.branch_segments[sw.active_index];
    const auto& cells = w.scenario->rails[seg].cells;
    auto it = std::find(cells.begin(), cells.end(), cur);
    int j = static_cast<int>(it - cells.begin());
    if (j + 1 >= static_cast<int>(cells.size())) {
      t.active = false;
      return false;
    }
    if (sw.active_index != sw.initial_index) t.route_altered = true;
    t.segment = seg;
    t.index = j + 1;
    return true;
  }
  const auto& cells = w.scenario->rails[t.segment].cells;
  if (t.index + 1 >= static_cast<int>(cells.size())) {
    t.active = false;
    return false;
  }
  t.index += 1;
  return true;
}

}  // namespace

std::vector<HarmRecord> advance_trolleys(WorldState& w) {
  std::vector<HarmRecord> harms;
  for (int ti : w.trolley_order) {
    TrolleyState& t = w.trolleys[ti];
    if (!t.active || w.timestep < t.activation_delay) continue;
    for (int s = 0; s < t.speed && t.active; ++s) {
      if (!advance_one_cell(w, t)) break;
      GridPos p = w.trolley_pos(t);
      bool collided = false;
      for (auto& g : w.characters) {
        if (g.pos == p && !g.harmed) {
          harm_group(w, g, g.pushed_by_agent, t.route_altered, harms);
          collided = true;
        }
      }
      if (w.agent.pos == p && !w.agent.harmed) {
        w.agent.harmed = true;
        harms.push_back({true, CharacterKind::Human, 1, false, t.route_altered, "agent"});
        collided = true;
      }
      if (collided) {
        t.active = false;
        t.harmed = true;
      }
    }
  }
  return harms;
}

StepResult step_world(WorldState& w, Action action) {
  if (w.episode_over) throw EpisodeFinishedError();

  StepResult res;
  res.t = w.timestep;
  const bool was_harmed = w.agent.harmed;

  // Phase 1: agent move / interact.
  if (action == Action::Interact) {
    res.interact = resolve_interact(w, res.harms);
  } else if (action != Action::Stay) {
    GridPos target = w.agent.pos + action_delta(action);
    if (w.cell_walkable(target)) w.agent.pos = target;
  }

  // Phase 2: trolley advance with per-cell collision checks.
  std::vector<HarmRecord> trolley_harms = advance_trolleys(w);
  res.harms.insert(res.harms.end(), trolley_harms.begin(), trolley_harms.end());

  // Phases 3-5: harm flags, reward, termination/truncation.
  res.agent_newly_harmed = w.agent.harmed && !was_harmed;
  res.landmark_reached =
      w.scenario->landmark_mode == LandmarkMode::Arrive
          ? w.agent.pos == w.scenario->landmark
          : res.interact.kind == InteractEffect::Kind::LandmarkActivated;
  if (w.agent.harmed || w.landmark_done) res.landmark_reached = false;

  const RewardConfig& rc = w.scenario->reward;
  res.reward = rc.step_penalty;
  if (res.landmark_reached) {
    res.reward += rc.landmark_reward;
    w.landmark_done = true;
  }
  if (res.agent_newly_harmed) res.reward += rc.agent_harm_penalty;

  if (w.agent.harmed) w.agent.terminated = true;
  res.terminated = res.landmark_reached || w.agent.harmed;
  w.timestep += 1;
  res.truncated = !res.terminated && w.timestep >= rc.max_steps;
  w.episode_over = res.terminated || res.truncated;
  return res;
}

std::string canonical_state_string(const WorldState& w) {
  std::ostringstream os;
  os << "a:" << w.agent.pos.x << "," << w.agent.pos.y << "," << w.agent.harmed << ","
     << w.agent.terminated;
  os << "|L:";
  for (const auto& l : w.levers) os << l.state << ",";
  os << "|S:";
  for (const auto& s : w.switches) os << s.active_index << ",";
  os << "|P:";
  for (int p : w.piston_states) os << p << ",";
  os << "|T:";
  for (const auto& t : w.trolleys) {
    os << t.segment << ":" << t.index << ":" << t.active << ":" << t.harmed << ",";
  }
  os << "|G:";
  for (const auto& g : w.characters) {
    os << g.pos.x << ":" << g.pos.y << ":" << g.harmed << ":" << g.pushed_by_agent << ",";
  }
  os << "|t:" << w.timestep << "|o:" << w.episode_over;
  return os.str();
}

std::string state_digest(const WorldState& w) {
  return hex64(fnv1a(canonical_state_string(w)));
}

}  // namespace moralgrid
