#include "anls/manifest.hpp"

#include "anls/io.hpp"

namespace anls {

ordered_json RunManifest::to_json() const {
  ordered_json j;
  j["format"] = "anls.manifest";
  j["version"] = 1;
  j["experiment"] = experiment;
  j["config"] = config;
  j["config_sha256"] = config_sha256;
  j["code_version"] = code_version;
  j["wall_clock_sec"] = wall_clock_sec;
  j["stage_timings"] = stage_timings;
  ordered_json in = ordered_json::object();
  for (const auto& [path, sha] : inputs) in[path] = sha;
  j["inputs"] = in;
  ordered_json out = ordered_json::object();
  for (const auto& [path, sha] : outputs) out[path] = sha;
  j["outputs"] = out;
  return j;
}

RunManifest RunManifest::from_json(const ordered_json& j) {
  if (j.value("format", "") != std::string("anls.manifest"))
    throw ParameterError("manifest: wrong format tag");
  RunManifest m;
  m.experiment = j.at("experiment").get<std::string>();
  m.config = j.at("config");
  m.config_sha256 = j.at("config_sha256").get<std::string>();
  m.code_version = j.at("code_version").get<std::string>();
  m.wall_clock_sec = j.at("wall_clock_sec").get<double>();
  m.stage_timings = j.at("stage_timings");
  for (const auto& [path, sha] : j.at("inputs").items())
    m.inputs.emplace_back(path, sha.get<std::string>());
  for (const auto& [path, sha] : j.at("outputs").items())
    m.outputs.emplace_back(path, sha.get<std::string>());
  return m;
}

void RunManifest::write(const std::filesystem::path& dir) const {
  write_text_file(dir / kManifestFile, to_json().dump(2) + "\n");
}

RunManifest RunManifest::load(const std::filesystem::path& file) {
  return from_json(ordered_json::parse(read_text_file(file)));
}

bool verify_outputs(const RunManifest& m, const std::filesystem::path& dir, std::string* diff) {
  bool ok = true;
  for (const auto& [rel, sha] : m.outputs) {
    std::filesystem::path p = dir / rel;
    if (!std::filesystem::exists(p)) {
      ok = false;
      if (diff) *diff += "missing: " + rel + "\n";
      continue;
    }
    std::string actual = sha256_file(p);
    if (actual != sha) {
      ok = false;
      if (diff) *diff += "digest mismatch: " + rel + " (" + sha + " -> " + actual + ")\n";
    }
  }
  return ok;
}

}  // namespace anls
