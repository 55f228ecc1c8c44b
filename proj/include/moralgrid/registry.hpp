#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "moralgrid/morality.hpp"
#include "moralgrid/scenario.hpp"

namespace moralgrid {

// Built-in scenario names, stable and sorted. The MORALGRID_DATA_DIR
// environment variable replaces the embedded catalogue with
// <dir>/scenarios/*.json (same layout for variants/ and chains/).
std::vector<std::string> builtin_catalogue();
std::vector<std::string> builtin_variant_names();

ScenarioConfig load_builtin_scenario(const std::string& name);
VariantConfig load_builtin_variant(const std::string& name);

// Resolves a scenario by catalogue name or file path, with an optional
// variant (catalogue name or path) applied on top.
std::shared_ptr<const ScenarioConfig> resolve_scenario(
    const std::string& scenario, const std::optional<std::string>& variant = std::nullopt);

// The four chain presets: Utility, UtilityAgentHarm, DualProcess,
// DualProcessAgentHarm.
std::vector<std::string> chain_preset_names();
MoralityChain chain_preset(const std::string& name);

// Fills unbound utility ranges from scenario totals: [0, total quantity of
// the norm's kind], or [0, 1] when the kind is absent.
MoralityChain bind_chain(MoralityChain chain, const ScenarioConfig& scenario);

struct LoadedChain {
  MoralityChain chain;
  Rational beta{1, 100};
};

// Parses a chain from a preset name, a JSON document, or a path to one, and
// binds its utility ranges to the scenario when given.
LoadedChain load_chain(const std::string& name_or_json_or_path,
                       const ScenarioConfig* scenario = nullptr);

MoralityChain chain_from_json(const std::string& json_text, Rational* beta_out = nullptr);
std::string chain_to_json(const MoralityChain& chain, const Rational& beta);
uint64_t chain_hash(const MoralityChain& chain);

}  // namespace moralgrid
