#pragma once
// Experiment dispatch: validates the configuration, runs the module
// operations, persists outputs + manifest, and reports the exit status
// (0 pass, 2 acceptance failure, 1 error; reproduce adds 3 for digest
// mismatches).

#include "anls/manifest.hpp"

namespace anls {

struct RunResult {
  int exit_code = 0;
  RunManifest manifest;
  std::string stdout_text;
};

RunResult run_experiment(const ExperimentConfig& cfg);

// Re-run the config recorded in a manifest into a scratch directory and
// compare output digests. Returns 0 on match, 3 on mismatch (report filled
// with the per-file diff), throws on missing inputs or invalid manifests.
int reproduce(const std::filesystem::path& manifest_path, std::string* report = nullptr);

}  // namespace anls
