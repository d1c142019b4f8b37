#pragma once
// Persistence: the self-describing field record (JSON, schema in
// schemas/field.schema.json), potential sidecars, CSV tables, and SHA-256
// digests used by run manifests.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "anls/potential.hpp"

namespace anls {

using ordered_json = nlohmann::ordered_json;

std::string sha256_hex(const void* data, size_t len);
std::string sha256_hex(const std::string& text);
std::string sha256_file(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

ordered_json field_to_json(const FourierField& f);
FourierField field_from_json(const ordered_json& j);
void save_field(const std::filesystem::path& path, const FourierField& f);
FourierField load_field(const std::filesystem::path& path);

// Potential record = field file plus a JSON sidecar {kind, kappa, seed, M}
// at path + ".meta.json".
void save_potential(const std::filesystem::path& path, const Potential& v);
Potential load_potential(const std::filesystem::path& path);

// CSV with %.17g doubles (digest-stable).
std::string format_double(double x);
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace anls
