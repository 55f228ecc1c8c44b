#include "moralgrid/registry.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "moralgrid/builtin_data.hpp"
#include "moralgrid/errors.hpp"

namespace moralgrid {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::optional<fs::path> data_dir_override() {
  const char* dir = std::getenv("MORALGRID_DATA_DIR");
  if (dir && *dir) return fs::path(dir);
  return std::nullopt;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> list_names(const std::string& category,
                                    const std::map<std::string, std::string>& embedded) {
  std::vector<std::string> names;
  if (auto dir = data_dir_override()) {
    fs::path sub = *dir / category;
    if (fs::is_directory(sub)) {
      for (const auto& entry : fs::directory_iterator(sub)) {
        if (entry.path().extension() == ".json") names.push_back(entry.path().stem().string());
      }
    }
    std::sort(names.begin(), names.end());
    return names;
  }
  for (const auto& [name, text] : embedded) names.push_back(name);
  return names;  // std::map iteration is already sorted
}

std::string load_document(const std::string& category, const std::string& name,
                          const std::map<std::string, std::string>& embedded) {
  if (auto dir = data_dir_override()) {
    fs::path p = *dir / category / (name + ".json");
    if (fs::exists(p)) return read_file(p);
    throw ConfigError("no " + category + " entry named '" + name + "' under " +
                      (*dir / category).string());
  }
  auto it = embedded.find(name);
  if (it == embedded.end()) {
    throw ConfigError("no builtin " + category + " entry named '" + name + "'");
  }
  return it->second;
}


}  // namespace

std::vector<std::string> builtin_catalogue() {
  return list_names("scenarios", detail::embedded_scenarios());
}

std::vector<std::string> builtin_variant_names() {
  return list_names("variants", detail::embedded_variants());
}

ScenarioConfig load_builtin_scenario(const std::string& name) {
  return load_scenario(load_document("scenarios", name, detail::embedded_scenarios()));
}

VariantConfig load_builtin_variant(const std::string& name) {
  return load_variant(load_document("variants", name, detail::embedded_variants()));
}

std::shared_ptr<const ScenarioConfig> resolve_scenario(
    const std::string& scenario, const std::optional<std::string>& variant) {
  ScenarioConfig base;
  if (fs::exists(scenario) && fs::path(scenario).extension() == ".json") {
    base = load_scenario(read_file(scenario));
  } else {
    base = load_builtin_scenario(scenario);
  }
  if (variant) {
    VariantConfig v;
    if (fs::exists(*variant) && fs::path(*variant).extension() == ".json") {
      v = load_variant(read_file(*variant));
    } else {
      v = load_builtin_variant(*variant);
    }
    base = instantiate_variant(base, v);
  }
  return std::make_shared<const ScenarioConfig>(std::move(base));
}

namespace {

NormSpec utility_norm(const std::string& id, NormSubject kind, int force) {
  NormSpec n;
  n.id = id;
  n.category = NormCategory::Utility;
  n.subject = kind;
  n.force = force;
  n.modality = Modality::Prohibited;
  return n;
}

NormSpec causal_norm(const std::string& id, NormSubject kind, int force) {
  NormSpec n;
  n.id = id;
  n.category = NormCategory::Causal;
  n.subject = kind;
  n.force = force;
  n.modality = Modality::Prohibited;
  return n;
}

NormSpec agent_harm_norm(int force) {
  NormSpec n;
  n.id = "avoid_agent_harm";
  n.category = NormCategory::Outcome;
  n.subject = NormSubject::Agent;
  n.force = force;
  n.modality = Modality::Prohibited;
  return n;
}

}  // namespace

std::vector<std::string> chain_preset_names() {
  return {"DualProcess", "DualProcessAgentHarm", "Utility", "UtilityAgentHarm"};
}

MoralityChain chain_preset(const std::string& name) {
  if (name == "Utility") {
    return build_chain(name, {
        utility_norm("min_humans_harmed", NormSubject::Human, 3),
        utility_norm("min_animals_harmed", NormSubject::Animal, 2),
        utility_norm("min_robots_harmed", NormSubject::Robot, 1),
    });
  }
  if (name == "UtilityAgentHarm") {
    return build_chain(name, {
        utility_norm("min_humans_harmed", NormSubject::Human, 4),
        utility_norm("min_animals_harmed", NormSubject::Animal, 3),
        agent_harm_norm(2),
        utility_norm("min_robots_harmed", NormSubject::Robot, 1),
    });
  }
  if (name == "DualProcess") {
    return build_chain(name, {
        causal_norm("avoid_personal_human_harm", NormSubject::Human, 6),
        utility_norm("min_humans_harmed", NormSubject::Human, 5),
        causal_norm("avoid_personal_animal_harm", NormSubject::Animal, 4),
        utility_norm("min_animals_harmed", NormSubject::Animal, 3),
        causal_norm("avoid_personal_robot_harm", NormSubject::Robot, 2),
        utility_norm("min_robots_harmed", NormSubject::Robot, 1),
    });
  }
  if (name == "DualProcessAgentHarm") {
    return build_chain(name, {
        causal_norm("avoid_personal_human_harm", NormSubject::Human, 7),
        utility_norm("min_humans_harmed", NormSubject::Human, 6),
        causal_norm("avoid_personal_animal_harm", NormSubject::Animal, 5),
        utility_norm("min_animals_harmed", NormSubject::Animal, 4),
        causal_norm("avoid_personal_robot_harm", NormSubject::Robot, 3),
        agent_harm_norm(2),
        utility_norm("min_robots_harmed", NormSubject::Robot, 1),
    });
  }
  throw ConfigError("unknown chain preset '" + name + "'");
}

MoralityChain bind_chain(MoralityChain chain, const ScenarioConfig& scenario) {
  for (NormSpec& n : chain.norms) {
    if (n.category != NormCategory::Utility || n.utility_range) continue;
    int total = 0;
    if (n.subject == NormSubject::Human) total = scenario.total_quantity(CharacterKind::Human);
    if (n.subject == NormSubject::Animal) total = scenario.total_quantity(CharacterKind::Animal);
    if (n.subject == NormSubject::Robot) total = scenario.total_quantity(CharacterKind::Robot);
    n.utility_range = {0.0, total > 0 ? static_cast<double>(total) : 1.0};
  }
  return chain;
}

MoralityChain chain_from_json(const std::string& json_text, Rational* beta_out) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("chain JSON parse error: ") + e.what());
  }
  if (!j.contains("norms") || !j["norms"].is_array()) {
    throw ConfigError("chain: missing 'norms' array");
  }
  if (beta_out && j.contains("beta")) {
    // Accept a number or a decimal string; the textual form keeps beta exact.
    const json& b = j["beta"];
    *beta_out = Rational::from_decimal(b.is_string() ? b.get<std::string>() : b.dump());
  }
  std::vector<NormSpec> norms;
  for (const auto& n : j["norms"]) {
    NormSpec spec;
    if (!n.contains("id")) throw ConfigError("chain norm: missing 'id'");
    spec.id = n["id"].get<std::string>();
    spec.category = category_from_string(n.value("category", "outcome"));
    if (n.contains("kind")) spec.subject = subject_from_string(n["kind"].get<std::string>());
    if (!n.contains("force")) throw ConfigError("norm '" + spec.id + "': missing 'force'");
    spec.force = n["force"].get<int>();
    spec.modality = modality_from_string(n.value("modality", "prohibited"));
    if (n.contains("range")) {
      const json& r = n["range"];
      if (!r.is_array() || r.size() != 2) {
        throw ConfigError("norm '" + spec.id + "': range must be [min, max]");
      }
      spec.utility_range = {r[0].get<double>(), r[1].get<double>()};
    }
    norms.push_back(std::move(spec));
  }
  return build_chain(j.value("name", "chain"), std::move(norms));
}

std::string chain_to_json(const MoralityChain& chain, const Rational& beta) {
  json j;
  j["name"] = chain.name;
  j["beta"] = beta.to_double();
  j["norms"] = json::array();
  for (const NormSpec& n : chain.norms) {
    json jn;
    jn["id"] = n.id;
    jn["category"] = to_string(n.category);
    if (n.subject) jn["kind"] = to_string(*n.subject);
    jn["force"] = n.force;
    jn["modality"] = to_string(n.modality);
    if (n.utility_range) jn["range"] = {n.utility_range->first, n.utility_range->second};
    j["norms"].push_back(jn);
  }
  return j.dump(2);
}

uint64_t chain_hash(const MoralityChain& chain) {
  return fnv1a(chain_to_json(chain, Rational(1, 100)));
}

LoadedChain load_chain(const std::string& name_or_json_or_path, const ScenarioConfig* scenario) {
  LoadedChain out;
  std::string trimmed = name_or_json_or_path;
  if (!trimmed.empty() && trimmed.front() == '{') {
    out.chain = chain_from_json(trimmed, &out.beta);
  } else {
    bool preset = false;
    for (const auto& p : chain_preset_names()) preset = preset || p == trimmed;
    if (preset) {
      out.chain = chain_preset(trimmed);
    } else if (fs::exists(trimmed) && fs::path(trimmed).extension() == ".json") {
      out.chain = chain_from_json(read_file(trimmed), &out.beta);
    } else {
      // Fall back to the chain catalogue (embedded or MORALGRID_DATA_DIR).
      out.chain = chain_from_json(
          load_document("chains", trimmed, detail::embedded_chains()), &out.beta);
    }
  }
  if (scenario) out.chain = bind_chain(std::move(out.chain), *scenario);
  return out;
}

}  // namespace moralgrid
