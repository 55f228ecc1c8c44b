#pragma once

#include <string>

#include "moralgrid/world.hpp"

namespace moralgrid {

// Terminal frame, one glyph per cell:
//   A agent   T/t trolley (active/stopped)   L lever   P piston   + switch
//   = rail    * landmark   # blocked   . empty
//   1-9 unharmed character group (quantity)   x harmed group
std::string render_ascii(const WorldState& world);

}  // namespace moralgrid
