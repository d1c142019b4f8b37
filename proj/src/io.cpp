#include "anls/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace anls {

namespace detail {
std::string sha256_hex_impl(const void* data, size_t len);
}

std::string sha256_hex(const void* data, size_t len) {
  return detail::sha256_hex_impl(data, len);
}

std::string sha256_hex(const std::string& text) {
  return detail::sha256_hex_impl(text.data(), text.size());
}

std::string sha256_file(const std::filesystem::path& path) {
  return sha256_hex(read_text_file(path));
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ordered_json field_to_json(const FourierField& f) {
  ordered_json j;
  j["format"] = "anls.field";
  j["version"] = 1;
  j["max_freq"] = f.max_freq();
  j["reality"] = f.reality();
  std::vector<double> interleaved;
  interleaved.reserve(2 * f.size());
  for (const auto& c : f.coeffs()) {
    interleaved.push_back(c.real());
    interleaved.push_back(c.imag());
  }
  j["coeffs"] = interleaved;
  return j;
}

FourierField field_from_json(const ordered_json& j) {
  if (j.value("format", "") != std::string("anls.field"))
    throw ParameterError("field record: wrong format tag");
  int m = j.at("max_freq").get<int>();
  bool reality = j.at("reality").get<bool>();
  auto interleaved = j.at("coeffs").get<std::vector<double>>();
  if (interleaved.size() != static_cast<size_t>(2 * (2 * m + 1)))
    throw ParameterError("field record: coefficient count does not match max_freq");
  FourierField f(m, reality);
  for (int i = 0; i < f.size(); ++i)
    f.coeffs()[i] = cplx(interleaved[2 * i], interleaved[2 * i + 1]);
  return f;
}

void save_field(const std::filesystem::path& path, const FourierField& f) {
  write_text_file(path, field_to_json(f).dump(2) + "\n");
}

FourierField load_field(const std::filesystem::path& path) {
  return field_from_json(ordered_json::parse(read_text_file(path)));
}

void save_potential(const std::filesystem::path& path, const Potential& v) {
  save_field(path, v.field);
  ordered_json meta;
  meta["kind"] = potential_kind_name(v.kind);
  meta["kappa"] = v.kappa_nominal;
  meta["seed"] = v.seed;
  meta["max_freq"] = v.field.max_freq();
  write_text_file(path.string() + ".meta.json", meta.dump(2) + "\n");
}

Potential load_potential(const std::filesystem::path& path) {
  FourierField f = load_field(path);
  ordered_json meta = ordered_json::parse(read_text_file(path.string() + ".meta.json"));
  Potential v;
  v.field = std::move(f);
  v.kind = potential_kind_from_name(meta.at("kind").get<std::string>());
  v.kappa_nominal = meta.at("kappa").get<double>();
  v.seed = meta.at("seed").get<uint64_t>();
  return v;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::string text;
  for (size_t i = 0; i < header.size(); ++i) {
    text += header[i];
    text += (i + 1 < header.size()) ? ',' : '\n';
  }
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      text += format_double(row[i]);
      text += (i + 1 < row.size()) ? ',' : '\n';
    }
  }
  write_text_file(path, text);
}

}  // namespace anls
