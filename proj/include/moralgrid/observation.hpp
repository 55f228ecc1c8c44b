#pragma once

#include <string>
#include <vector>

#include "moralgrid/world.hpp"

namespace moralgrid {

// One named entity view: ordered (component, value) pairs. Booleans are 0/1,
// kinds and lever states one-hot, positions optionally normalised to [0,1].
struct ObsEntry {
  std::string name;
  std::string entity_type;  // agent | character | lever | trolley | switch
  std::vector<std::pair<std::string, double>> components;
};

struct Observation {
  std::vector<ObsEntry> entries;

  // Concatenation in declared entity order; component order is fixed per
  // entity type, so the length is scenario-constant.
  std::vector<double> flatten() const;
};

Observation observe(const WorldState& world, const ObservationConfig& config);

// Convenience overload using the scenario's own observation config.
Observation observe(const WorldState& world);

}  // namespace moralgrid
