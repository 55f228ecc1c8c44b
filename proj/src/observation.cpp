#include "moralgrid/observation.hpp"

#include "moralgrid/errors.hpp"

namespace moralgrid {

std::vector<double> Observation::flatten() const {
  std::vector<double> out;
  for (const auto& e : entries) {
    for (const auto& [name, value] : e.components) out.push_back(value);
  }
  return out;
}

namespace {

void push_pos(ObsEntry& e, GridPos p, const ScenarioConfig& sc, bool normalize) {
  double x = p.x, y = p.y;
  if (normalize) {
    x = sc.width > 1 ? x / (sc.width - 1) : 0.0;
    y = sc.height > 1 ? y / (sc.height - 1) : 0.0;
  }
  e.components.emplace_back("x", x);
  e.components.emplace_back("y", y);
}

}  // namespace

Observation observe(const WorldState& w, const ObservationConfig& config) {
  const ScenarioConfig& sc = *w.scenario;
  Observation obs;
  for (const std::string& name : config.entities) {
    ObsEntry e;
    e.name = name;
    if (name == "agent") {
      e.entity_type = "agent";
      push_pos(e, w.agent.pos, sc, config.normalize);
      e.components.emplace_back("harmed", w.agent.harmed ? 1.0 : 0.0);
      e.components.emplace_back("terminated", w.agent.terminated ? 1.0 : 0.0);
      obs.entries.push_back(std::move(e));
      continue;
    }
    bool found = false;
    for (const auto& g : w.characters) {
      if (g.id != name) continue;
      e.entity_type = "character";
      push_pos(e, g.pos, sc, config.normalize);
      e.components.emplace_back("harmed", g.harmed ? 1.0 : 0.0);
      e.components.emplace_back("quantity", g.quantity);
      e.components.emplace_back("kind_human", g.kind == CharacterKind::Human ? 1.0 : 0.0);
      e.components.emplace_back("kind_animal", g.kind == CharacterKind::Animal ? 1.0 : 0.0);
      e.components.emplace_back("kind_robot", g.kind == CharacterKind::Robot ? 1.0 : 0.0);
      found = true;
      break;
    }
    if (!found) {
      for (const auto& l : w.levers) {
        if (l.id != name) continue;
        e.entity_type = "lever";
        for (int s = 0; s < l.num_states; ++s) {
          e.components.emplace_back("state_" + std::to_string(s), l.state == s ? 1.0 : 0.0);
        }
        found = true;
        break;
      }
    }
    if (!found) {
      for (const auto& t : w.trolleys) {
        if (t.id != name) continue;
        e.entity_type = "trolley";
        push_pos(e, w.trolley_pos(t), sc, config.normalize);
        e.components.emplace_back("harmed", t.harmed ? 1.0 : 0.0);
        e.components.emplace_back("active", t.active ? 1.0 : 0.0);
        found = true;
        break;
      }
    }
    if (!found) {
      for (const auto& s : w.switches) {
        if (s.id != name) continue;
        e.entity_type = "switch";
        e.components.emplace_back("active_index", s.active_index);
        found = true;
        break;
      }
    }
    if (!found) throw ConfigError("observation: unknown entity '" + name + "'");
    obs.entries.push_back(std::move(e));
  }
  return obs;
}

Observation observe(const WorldState& w) { return observe(w, w.scenario->observation); }

}  // namespace moralgrid
