#pragma once

#include <map>
#include <string>

namespace moralgrid::detail {

// Populated from data/ at build time (cmake/embed_data.cmake).
const std::map<std::string, std::string>& embedded_scenarios();
const std::map<std::string, std::string>& embedded_variants();
const std::map<std::string, std::string>& embedded_chains();

}  // namespace moralgrid::detail
