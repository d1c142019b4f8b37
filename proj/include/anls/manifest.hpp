#pragma once
// Run manifests: configuration hash, code version, timings, and input/output
// file digests. Every populated output directory holds exactly one
// manifest.json; reproduce() re-runs the recorded config and compares output
// digests one by one.

#include <filesystem>
#include <utility>
#include <vector>

#include "anls/config.hpp"

namespace anls {

inline constexpr const char* kCodeVersion = "anls 0.1.0";
inline constexpr const char* kManifestFile = "manifest.json";

struct RunManifest {
  std::string experiment;
  ordered_json config;
  std::string config_sha256;
  std::string code_version = kCodeVersion;
  double wall_clock_sec = 0.0;
  ordered_json stage_timings = ordered_json::object();
  std::vector<std::pair<std::string, std::string>> inputs;   // path -> sha256
  std::vector<std::pair<std::string, std::string>> outputs;  // relative path -> sha256

  ordered_json to_json() const;
  static RunManifest from_json(const ordered_json& j);
  void write(const std::filesystem::path& dir) const;
  static RunManifest load(const std::filesystem::path& file);
};

// Re-hash the manifest's outputs under `dir`; returns true when every digest
// matches, and appends a per-file summary of differences to `diff`.
bool verify_outputs(const RunManifest& m, const std::filesystem::path& dir, std::string* diff);

}  // namespace anls
