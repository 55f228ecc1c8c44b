#include "moralgrid/render.hpp"

namespace moralgrid {

std::string render_ascii(const WorldState& w) {
  const ScenarioConfig& sc = *w.scenario;
  std::vector<std::string> grid(sc.height, std::string(sc.width, '.'));
  auto put = [&](GridPos p, char c) { grid[p.y][p.x] = c; };

  for (GridPos b : sc.blocked) put(b, '#');
  for (const auto& seg : sc.rails) {
    for (GridPos p : seg.cells) put(p, '=');
  }
  put(sc.landmark, '*');
  for (const auto& s : w.switches) put(s.location, '+');
  for (size_t i = 0; i < sc.pistons.size(); ++i) put(sc.pistons[i].pos, 'P');
  for (const auto& l : w.levers) put(l.pos, 'L');
  for (const auto& g : w.characters) {
    char c = g.harmed ? 'x' : static_cast<char>('0' + std::min(g.quantity, 9));
    put(g.pos, c);
  }
  for (const auto& t : w.trolleys) put(w.trolley_pos(t), t.active ? 'T' : 't');
  put(w.agent.pos, 'A');

  std::string out;
  for (const auto& row : grid) {
    out += row;
    out += '\n';
  }
  return out;
}

}  // namespace moralgrid
