#include "moralgrid/scenario.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"
#include "moralgrid/errors.hpp"

namespace moralgrid {

using nlohmann::json;

const char* to_string(CharacterKind k) {
  switch (k) {
    case CharacterKind::Human: return "human";
    case CharacterKind::Animal: return "animal";
    case CharacterKind::Robot: return "robot";
  }
  return "?";
}

CharacterKind kind_from_string(const std::string& s) {
  if (s == "human") return CharacterKind::Human;
  if (s == "animal") return CharacterKind::Animal;
  if (s == "robot") return CharacterKind::Robot;
  throw ConfigError("unknown character kind '" + s + "'");
}

bool ScenarioConfig::is_blocked(GridPos p) const {
  return std::find(blocked.begin(), blocked.end(), p) != blocked.end();
}

int ScenarioConfig::total_quantity(CharacterKind kind) const {
  int total = 0;
  for (const auto& c : characters) {
    if (c.kind == kind) total += c.quantity;
  }
  return total;
}

int ScenarioConfig::rail_index(const std::string& id) const {
  for (size_t i = 0; i < rails.size(); ++i) {
    if (rails[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

int ScenarioConfig::switch_index(const std::string& id) const {
  for (size_t i = 0; i < switches.size(); ++i) {
    if (switches[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

namespace {

GridPos parse_pos(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw ConfigError(path + ": expected [x, y]");
  }
  return GridPos{j[0].get<int>(), j[1].get<int>()};
}

GridPos parse_pos_field(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) throw ConfigError(path + ": missing field '" + key + "'");
  return parse_pos(j[key], path + "." + key);
}

json pos_to_json(GridPos p) { return json::array({p.x, p.y}); }

template <typename T>
T get_field(const json& j, const std::string& key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(path + ": missing field '" + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(path + "." + key + ": wrong type");
  }
}

template <typename T>
T get_field_or(const json& j, const std::string& key, T fallback) {
  auto it = j.find(key);
  return it == j.end() ? fallback : it->get<T>();
}

}  // namespace

ScenarioConfig load_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("scenario JSON parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("scenario: expected a JSON object");

  ScenarioConfig c;
  c.schema_version = get_field_or(j, "schema_version", 1);
  if (c.schema_version != 1) {
    throw ConfigError("scenario: unsupported schema_version " + std::to_string(c.schema_version));
  }
  c.name = get_field<std::string>(j, "name", "scenario");
  c.description = get_field_or<std::string>(j, "description", "");

  if (!j.contains("grid")) throw ConfigError("scenario: missing 'grid'");
  const json& grid = j["grid"];
  c.width = get_field<int>(grid, "width", "grid");
  c.height = get_field<int>(grid, "height", "grid");
  for (const auto& b : get_field_or(grid, "blocked", json::array())) {
    c.blocked.push_back(parse_pos(b, "grid.blocked"));
  }

  for (const auto& r : get_field_or(j, "rails", json::array())) {
    RailSegmentConfig seg;
    seg.id = get_field<std::string>(r, "id", "rails");
    for (const auto& cell : get_field<json>(r, "cells", "rails." + seg.id)) {
      seg.cells.push_back(parse_pos(cell, "rails." + seg.id + ".cells"));
    }
    c.rails.push_back(std::move(seg));
  }

  for (const auto& s : get_field_or(j, "switches", json::array())) {
    RailSwitchConfig sw;
    sw.id = get_field<std::string>(s, "id", "switches");
    sw.location = parse_pos_field(s, "location", "switches." + sw.id);
    sw.branches = get_field<std::vector<std::string>>(s, "branches", "switches." + sw.id);
    sw.active_index = get_field_or(s, "active_index", 0);
    c.switches.push_back(std::move(sw));
  }

  for (const auto& l : get_field_or(j, "levers", json::array())) {
    LeverConfig lv;
    lv.id = get_field<std::string>(l, "id", "levers");
    lv.pos = parse_pos_field(l, "pos", "levers." + lv.id);
    lv.num_states = get_field_or(l, "num_states", 2);
    lv.state = get_field_or(l, "state", 0);
    lv.linked_switch = get_field<std::string>(l, "linked_switch", "levers." + lv.id);
    c.levers.push_back(std::move(lv));
  }

  for (const auto& p : get_field_or(j, "pistons", json::array())) {
    PistonConfig pc;
    pc.id = get_field<std::string>(p, "id", "pistons");
    pc.pos = parse_pos_field(p, "pos", "pistons." + pc.id);
    pc.linked_lever = get_field<std::string>(p, "linked_lever", "pistons." + pc.id);
    pc.state = get_field_or(p, "state", 0);
    c.pistons.push_back(std::move(pc));
  }

  for (const auto& ch : get_field_or(j, "characters", json::array())) {
    CharacterConfig cc;
    cc.id = get_field<std::string>(ch, "id", "characters");
    cc.pos = parse_pos_field(ch, "pos", "characters." + cc.id);
    cc.kind = kind_from_string(get_field_or<std::string>(ch, "kind", "human"));
    cc.quantity = get_field_or(ch, "quantity", 1);
    c.characters.push_back(std::move(cc));
  }

  for (const auto& t : get_field_or(j, "trolleys", json::array())) {
    TrolleyConfig tc;
    tc.id = get_field<std::string>(t, "id", "trolleys");
    tc.segment = get_field<std::string>(t, "segment", "trolleys." + tc.id);
    tc.index = get_field_or(t, "index", 0);
    tc.speed = get_field_or(t, "speed", 1);
    tc.activation_delay = get_field_or(t, "activation_delay", 0);
    c.trolleys.push_back(std::move(tc));
  }

  c.landmark = parse_pos_field(j, "landmark", "scenario");
  std::string mode = get_field_or<std::string>(j, "landmark_mode", "arrive");
  if (mode == "arrive") {
    c.landmark_mode = LandmarkMode::Arrive;
  } else if (mode == "interact") {
    c.landmark_mode = LandmarkMode::Interact;
  } else {
    throw ConfigError("landmark_mode: expected 'arrive' or 'interact', got '" + mode + "'");
  }
  c.agent_start = parse_pos_field(j, "agent_start", "scenario");

  if (j.contains("observation")) {
    const json& o = j["observation"];
    c.observation.entities = get_field_or(o, "entities", std::vector<std::string>{});
    c.observation.normalize = get_field_or(o, "normalize", false);
  }
  if (c.observation.entities.empty()) {
    // Default order: agent first, then entities in declaration order.
    c.observation.entities.push_back("agent");
    for (const auto& e : c.characters) c.observation.entities.push_back(e.id);
    for (const auto& e : c.levers) c.observation.entities.push_back(e.id);
    for (const auto& e : c.trolleys) c.observation.entities.push_back(e.id);
    for (const auto& e : c.switches) c.observation.entities.push_back(e.id);
  }

  if (j.contains("reward")) {
    const json& r = j["reward"];
    c.reward.step_penalty = get_field_or(r, "step_penalty", -1.0);
    c.reward.landmark_reward = get_field_or(r, "landmark_reward", 100.0);
    c.reward.agent_harm_penalty = get_field_or(r, "agent_harm_penalty", -100.0);
    c.reward.max_steps = get_field_or(r, "max_steps", 50);
  }

  validate_scenario(c);
  return c;
}

void validate_scenario(const ScenarioConfig& c) {
  auto ctx = [&](const std::string& detail) {
    return "scenario '" + c.name + "': " + detail;
  };
  if (c.width < 1 || c.height < 1) throw ConfigError(ctx("grid dimensions must be positive"));
  if (c.reward.max_steps <= 0) throw ConfigError(ctx("reward.max_steps must be > 0"));

  for (GridPos b : c.blocked) {
    if (!c.in_grid(b)) throw ConfigError(ctx("blocked cell off-grid"));
  }

  std::set<std::string> ids;
  auto check_id = [&](const std::string& id, const char* what) {
    if (id.empty()) throw ConfigError(ctx(std::string(what) + " with empty id"));
    if (id == "agent") throw ConfigError(ctx("'agent' is a reserved id"));
    if (!ids.insert(id).second) throw ConfigError(ctx("duplicate entity id '" + id + "'"));
  };

  for (const auto& seg : c.rails) {
    check_id(seg.id, "rail segment");
    if (seg.cells.empty()) throw ConfigError(ctx("rail '" + seg.id + "' has no cells"));
    std::set<std::pair<int, int>> seen;
    for (size_t i = 0; i < seg.cells.size(); ++i) {
      GridPos p = seg.cells[i];
      if (!c.in_grid(p)) throw ConfigError(ctx("rail '" + seg.id + "' cell off-grid"));
      if (c.is_blocked(p)) throw ConfigError(ctx("rail '" + seg.id + "' crosses a blocked cell"));
      if (!seen.insert({p.x, p.y}).second) {
        throw ConfigError(ctx("rail '" + seg.id + "' repeats a cell"));
      }
      if (i > 0 && !adjacent4(seg.cells[i - 1], p)) {
        throw ConfigError(ctx("rail '" + seg.id + "' is not 4-connected at cell " +
                              std::to_string(i)));
      }
    }
  }

  for (const auto& sw : c.switches) {
    check_id(sw.id, "switch");
    if (!c.in_grid(sw.location)) throw ConfigError(ctx("switch '" + sw.id + "' off-grid"));
    if (sw.branches.size() < 2) {
      throw ConfigError(ctx("switch '" + sw.id + "' needs at least 2 branches"));
    }
    if (sw.active_index < 0 || sw.active_index >= static_cast<int>(sw.branches.size())) {
      throw ConfigError(ctx("switch '" + sw.id + "' active_index out of range"));
    }
    for (const auto& b : sw.branches) {
      int idx = c.rail_index(b);
      if (idx < 0) {
        throw ConfigError(ctx("switch '" + sw.id + "' references unknown segment '" + b + "'"));
      }
      const auto& cells = c.rails[idx].cells;
      if (std::find(cells.begin(), cells.end(), sw.location) == cells.end()) {
        throw ConfigError(ctx("switch '" + sw.id + "' branch '" + b +
                              "' does not pass through the switch location"));
      }
    }
  }

  for (const auto& lv : c.levers) {
    check_id(lv.id, "lever");
    if (!c.in_grid(lv.pos)) throw ConfigError(ctx("lever '" + lv.id + "' off-grid"));
    if (c.is_blocked(lv.pos)) throw ConfigError(ctx("lever '" + lv.id + "' on a blocked cell"));
    if (lv.num_states != 2 && lv.num_states != 3) {
      throw ConfigError(ctx("lever '" + lv.id + "' num_states must be 2 or 3"));
    }
    if (lv.state < 0 || lv.state >= lv.num_states) {
      throw ConfigError(ctx("lever '" + lv.id + "' state out of range"));
    }
    if (c.switch_index(lv.linked_switch) < 0) {
      throw ConfigError(ctx("lever '" + lv.id + "' linked to unknown switch '" +
                            lv.linked_switch + "'"));
    }
  }

  for (const auto& p : c.pistons) {
    check_id(p.id, "piston");
    if (!c.in_grid(p.pos)) throw ConfigError(ctx("piston '" + p.id + "' off-grid"));
    bool found = false;
    for (const auto& lv : c.levers) found = found || lv.id == p.linked_lever;
    if (!found) {
      throw ConfigError(ctx("piston '" + p.id + "' linked to unknown lever '" +
                            p.linked_lever + "'"));
    }
  }

  for (const auto& ch : c.characters) {
    check_id(ch.id, "character group");
    if (!c.in_grid(ch.pos)) throw ConfigError(ctx("character '" + ch.id + "' off-grid"));
    if (c.is_blocked(ch.pos)) {
      throw ConfigError(ctx("character '" + ch.id + "' on a blocked cell"));
    }
    if (ch.quantity < 1) throw ConfigError(ctx("character '" + ch.id + "' quantity must be >= 1"));
  }

  for (const auto& t : c.trolleys) {
    check_id(t.id, "trolley");
    int seg = c.rail_index(t.segment);
    if (seg < 0) {
      throw ConfigError(ctx("trolley '" + t.id + "' on unknown segment '" + t.segment + "'"));
    }
    if (t.index < 0 || t.index >= static_cast<int>(c.rails[seg].cells.size())) {
      throw ConfigError(ctx("trolley '" + t.id + "' start index out of range"));
    }
    if (t.speed < 1) throw ConfigError(ctx("trolley '" + t.id + "' speed must be >= 1"));
    if (t.activation_delay < 0) {
      throw ConfigError(ctx("trolley '" + t.id + "' activation_delay must be >= 0"));
    }
  }

  if (!c.in_grid(c.landmark)) throw ConfigError(ctx("landmark off-grid"));
  if (c.is_blocked(c.landmark)) throw ConfigError(ctx("landmark on a blocked cell"));
  if (!c.in_grid(c.agent_start)) throw ConfigError(ctx("agent_start off-grid"));
  if (c.is_blocked(c.agent_start)) throw ConfigError(ctx("agent_start on a blocked cell"));
  for (const auto& ch : c.characters) {
    if (ch.pos == c.agent_start) {
      throw ConfigError(ctx("agent_start collides with character '" + ch.id + "'"));
    }
  }
  for (const auto& lv : c.levers) {
    if (lv.pos == c.agent_start) {
      throw ConfigError(ctx("agent_start collides with lever '" + lv.id + "'"));
    }
  }

  for (const auto& name : c.observation.entities) {
    if (name == "agent") continue;
    if (!ids.count(name) || c.rail_index(name) >= 0) {
      throw ConfigError(ctx("observation lists unknown entity '" + name + "'"));
    }
    bool piston = false;
    for (const auto& p : c.pistons) piston = piston || p.id == name;
    if (piston) {
      throw ConfigError(ctx("observation entity '" + name + "' is a piston (not observable)"));
    }
  }
}

std::string serialize_scenario(const ScenarioConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  j["name"] = c.name;
  if (!c.description.empty()) j["description"] = c.description;
  j["grid"]["width"] = c.width;
  j["grid"]["height"] = c.height;
  json blocked = json::array();
  for (GridPos b : c.blocked) blocked.push_back(pos_to_json(b));
  j["grid"]["blocked"] = blocked;

  j["rails"] = json::array();
  for (const auto& r : c.rails) {
    json cells = json::array();
    for (GridPos p : r.cells) cells.push_back(pos_to_json(p));
    j["rails"].push_back({{"id", r.id}, {"cells", cells}});
  }
  j["switches"] = json::array();
  for (const auto& s : c.switches) {
    j["switches"].push_back({{"id", s.id},
                             {"location", pos_to_json(s.location)},
                             {"branches", s.branches},
                             {"active_index", s.active_index}});
  }
  j["levers"] = json::array();
  for (const auto& l : c.levers) {
    j["levers"].push_back({{"id", l.id},
                           {"pos", pos_to_json(l.pos)},
                           {"num_states", l.num_states},
                           {"state", l.state},
                           {"linked_switch", l.linked_switch}});
  }
  j["pistons"] = json::array();
  for (const auto& p : c.pistons) {
    j["pistons"].push_back({{"id", p.id},
                            {"pos", pos_to_json(p.pos)},
                            {"linked_lever", p.linked_lever},
                            {"state", p.state}});
  }
  j["characters"] = json::array();
  for (const auto& ch : c.characters) {
    j["characters"].push_back({{"id", ch.id},
                               {"pos", pos_to_json(ch.pos)},
                               {"kind", to_string(ch.kind)},
                               {"quantity", ch.quantity}});
  }
  j["trolleys"] = json::array();
  for (const auto& t : c.trolleys) {
    j["trolleys"].push_back({{"id", t.id},
                             {"segment", t.segment},
                             {"index", t.index},
                             {"speed", t.speed},
                             {"activation_delay", t.activation_delay}});
  }
  j["landmark"] = pos_to_json(c.landmark);
  j["landmark_mode"] = c.landmark_mode == LandmarkMode::Arrive ? "arrive" : "interact";
  j["agent_start"] = pos_to_json(c.agent_start);
  j["observation"] = {{"entities", c.observation.entities},
                      {"normalize", c.observation.normalize}};
  j["reward"] = {{"step_penalty", c.reward.step_penalty},
                 {"landmark_reward", c.reward.landmark_reward},
                 {"agent_harm_penalty", c.reward.agent_harm_penalty},
                 {"max_steps", c.reward.max_steps}};
  return j.dump(2);
}

VariantConfig load_variant(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("variant JSON parse error: ") + e.what());
  }
  VariantConfig v;
  v.name = get_field<std::string>(j, "name", "variant");
  v.base = get_field<std::string>(j, "base", "variant");
  const json characters = get_field_or(j, "characters", json::object());
  for (const auto& [id, ov] : characters.items()) {
    VariantConfig::CharacterOverride co;
    if (ov.contains("kind")) co.kind = kind_from_string(ov["kind"].get<std::string>());
    if (ov.contains("quantity")) co.quantity = ov["quantity"].get<int>();
    if (ov.contains("pos")) co.pos = parse_pos(ov["pos"], "variant characters." + id + ".pos");
    v.characters[id] = co;
  }
  const json speeds = get_field_or(j, "trolley_speeds", json::object());
  for (const auto& [id, speed] : speeds.items()) {
    v.trolley_speeds[id] = speed.get<int>();
  }
  return v;
}

ScenarioConfig instantiate_variant(const ScenarioConfig& base, const VariantConfig& variant) {
  ScenarioConfig out = base;
  if (!variant.name.empty()) out.name = variant.name;
  for (const auto& [id, ov] : variant.characters) {
    bool found = false;
    for (auto& ch : out.characters) {
      if (ch.id != id) continue;
      found = true;
      if (ov.kind) ch.kind = *ov.kind;
      if (ov.quantity) ch.quantity = *ov.quantity;
      if (ov.pos) ch.pos = *ov.pos;
    }
    if (!found) {
      throw ConfigError("variant '" + variant.name + "': unknown character '" + id + "'");
    }
  }
  for (const auto& [id, speed] : variant.trolley_speeds) {
    bool found = false;
    for (auto& t : out.trolleys) {
      if (t.id != id) continue;
      found = true;
      t.speed = speed;
    }
    if (!found) {
      throw ConfigError("variant '" + variant.name + "': unknown trolley '" + id + "'");
    }
  }
  validate_scenario(out);
  return out;
}

uint64_t scenario_hash(const ScenarioConfig& config) {
  return fnv1a(serialize_scenario(config));
}

}  // namespace moralgrid
