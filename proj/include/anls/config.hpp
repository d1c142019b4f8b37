#pragma once
// Experiment configuration: one JSON object mirroring the CLI flags, with a
// typed per-experiment key table. Unknown keys are rejected by name, defaults
// are materialized, and canonical serialization is byte-stable under
// parse -> serialize round trips.

#include <filesystem>
#include <string>

#include <json.hpp>

namespace anls {

using ordered_json = nlohmann::ordered_json;

struct ExperimentConfig {
  std::string experiment;
  uint64_t seed = 0;
  int threads = 1;
  std::string output_dir;
  ordered_json params = ordered_json::object();

  static ExperimentConfig from_json(const ordered_json& j);
  static ExperimentConfig load(const std::filesystem::path& path);

  // Canonical form: fixed top-level key order, params in table order with
  // defaults filled in.
  ordered_json to_json() const;
  std::string canonical_text() const;

  bool has(const std::string& key) const { return params.contains(key); }
  std::string str(const std::string& key) const;
  double num(const std::string& key) const;
  int integer(const std::string& key) const;
  bool boolean(const std::string& key) const;
};

// Known experiment names, in a fixed order.
const std::vector<std::string>& experiment_names();

}  // namespace anls
