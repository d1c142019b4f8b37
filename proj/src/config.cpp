#include "anls/config.hpp"

#include <map>

#include "anls/common.hpp"
#include "anls/io.hpp"

namespace anls {

namespace {

enum class ParamType { string_t, number_t, integer_t, boolean_t };

struct ParamSpec {
  const char* key;
  ParamType type;
  bool required;
  ordered_json default_value;
};

const std::map<std::string, std::vector<ParamSpec>>& param_table() {
  static const std::map<std::string, std::vector<ParamSpec>> table = {
      {"gen-potential",
       {{"kind", ParamType::string_t, true, {}},
        {"max_freq", ParamType::integer_t, true, {}},
        {"kappa", ParamType::number_t, false, 0.49},
        {"in", ParamType::string_t, false, ""}}},
      {"spectrum",
       {{"potential", ParamType::string_t, true, {}},
        {"max_freq", ParamType::integer_t, true, {}},
        {"fields_limit", ParamType::integer_t, false, -1}}},
      {"gamma-check",
       {{"potential", ParamType::string_t, true, {}},
        {"probes", ParamType::integer_t, false, 20}}},
      {"strichartz",
       {{"potential", ParamType::string_t, true, {}},
        {"max_freq", ParamType::integer_t, true, {}},
        {"kappa", ParamType::number_t, false, 0.49},
        {"eps", ParamType::number_t, false, 0.05},
        {"blocks", ParamType::string_t, false, "2..6"},
        {"samples", ParamType::integer_t, false, 50},
        {"n_time", ParamType::integer_t, false, 256}}},
      {"evolve",
       {{"potential", ParamType::string_t, true, {}},
        {"max_freq", ParamType::integer_t, true, {}},
        {"u0", ParamType::string_t, true, {}},
        {"m", ParamType::integer_t, false, 4},
        {"lambda", ParamType::number_t, false, 1.0},
        {"modes", ParamType::integer_t, true, {}},
        {"dt", ParamType::number_t, false, 1e-3},
        {"T", ParamType::number_t, false, 1.0},
        {"scheme", ParamType::string_t, false, "strang"},
        {"snap_every", ParamType::number_t, false, 0.1},
        {"allow_aliasing", ParamType::boolean_t, false, false}}},
      {"threshold",
       {{"m", ParamType::integer_t, true, {}},
        {"kappa", ParamType::number_t, true, {}}}},
      {"gibbs-sample",
       {{"potential", ParamType::string_t, true, {}},
        {"max_freq", ParamType::integer_t, true, {}},
        {"modes", ParamType::integer_t, true, {}},
        {"count", ParamType::integer_t, true, {}},
        {"lambda", ParamType::number_t, false, 1.0},
        {"m", ParamType::integer_t, false, 4},
        {"B", ParamType::number_t, false, -1.0}}},  // negative = no cutoff
      {"invariance",
       {{"ensemble", ParamType::string_t, true, {}},
        {"T", ParamType::number_t, false, 1.0},
        {"dt", ParamType::number_t, false, 1e-3},
        {"observables", ParamType::string_t, false, "mass,l4,mode1,h14"},
        {"bootstrap", ParamType::integer_t, false, 1000}}},
      {"regularity",
       {{"field", ParamType::string_t, true, {}},
        {"profile", ParamType::string_t, false, "sharp"},
        {"j_min", ParamType::integer_t, false, 3},
        {"j_max", ParamType::integer_t, false, 8},
        {"band_lo", ParamType::number_t, false, 0.0},
        {"band_hi", ParamType::number_t, false, 0.0}}},
  };
  return table;
}

const char* type_name(ParamType t) {
  switch (t) {
    case ParamType::string_t: return "string";
    case ParamType::number_t: return "number";
    case ParamType::integer_t: return "integer";
    case ParamType::boolean_t: return "boolean";
  }
  return "?";
}

bool type_matches(ParamType t, const ordered_json& v) {
  switch (t) {
    case ParamType::string_t: return v.is_string();
    case ParamType::number_t: return v.is_number();
    case ParamType::integer_t: return v.is_number_integer();
    case ParamType::boolean_t: return v.is_boolean();
  }
  return false;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, specs] : param_table()) v.push_back(name);
    return v;
  }();
  return names;
}

ExperimentConfig ExperimentConfig::from_json(const ordered_json& j) {
  ExperimentConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "experiment" || key == "seed" || key == "threads" || key == "output_dir" ||
        key == "params")
      continue;
    throw ParameterError("config: unknown key '" + key + "'");
  }
  cfg.experiment = j.at("experiment").get<std::string>();
  auto it = param_table().find(cfg.experiment);
  if (it == param_table().end())
    throw ParameterError("config: unknown experiment '" + cfg.experiment + "'");
  cfg.seed = j.value("seed", uint64_t{0});
  cfg.threads = j.value("threads", 1);
  cfg.output_dir = j.value("output_dir", std::string{});
  ordered_json raw = j.value("params", ordered_json::object());

  const auto& specs = it->second;
  for (const auto& [key, value] : raw.items()) {
    bool known = false;
    for (const auto& s : specs)
      if (key == s.key) {
        known = true;
        if (!type_matches(s.type, value))
          throw ParameterError("config: key '" + key + "' must be a " + type_name(s.type));
        break;
      }
    if (!known)
      throw ParameterError("config: unknown key '" + key + "' for experiment '" +
                           cfg.experiment + "'");
  }
  cfg.params = ordered_json::object();
  for (const auto& s : specs) {
    if (raw.contains(s.key))
      cfg.params[s.key] = raw.at(s.key);
    else if (s.required)
      throw ParameterError("config: missing required key '" + std::string(s.key) +
                           "' for experiment '" + cfg.experiment + "'");
    else
      cfg.params[s.key] = s.default_value;
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  return from_json(ordered_json::parse(read_text_file(path)));
}

ordered_json ExperimentConfig::to_json() const {
  ordered_json j;
  j["experiment"] = experiment;
  j["seed"] = seed;
  j["threads"] = threads;
  j["output_dir"] = output_dir;
  j["params"] = params;
  return j;
}

std::string ExperimentConfig::canonical_text() const { return to_json().dump(2) + "\n"; }

std::string ExperimentConfig::str(const std::string& key) const {
  return params.at(key).get<std::string>();
}

double ExperimentConfig::num(const std::string& key) const { return params.at(key).get<double>(); }

int ExperimentConfig::integer(const std::string& key) const { return params.at(key).get<int>(); }

bool ExperimentConfig::boolean(const std::string& key) const {
  return params.at(key).get<bool>();
}

}  // namespace anls
