#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "eh/errors.hpp"
#include "json.hpp"

namespace ehtool {

using nlohmann::json;

#ifndef EHTOOL_VERSION
#define EHTOOL_VERSION "0.0.0"
#endif

// FNV-1a over the canonical dump of the resolved experiment spec; goes into
// every report so artifacts can be traced back to the exact configuration.
inline std::string spec_hash(const json& resolved) {
  std::string s = resolved.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// EHTOOL_OUTPUT_DIR beats the flag; the flag beats the current directory.
inline std::filesystem::path resolve_out_dir(const std::string& flag) {
  const char* env = std::getenv("EHTOOL_OUTPUT_DIR");
  std::filesystem::path dir = (env && *env) ? env : (flag.empty() ? "." : flag);
  std::filesystem::create_directories(dir);
  return dir;
}

// The --spec file overrides flags: any key present replaces the parsed value.
inline json load_spec_file(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw eh::validation_error("cannot open spec file " + path);
  json j;
  in >> j;
  if (!j.is_object()) throw eh::validation_error("spec file must hold a JSON object");
  return j;
}

inline void overlay(const json& spec, const char* key, double& v) {
  if (auto it = spec.find(key); it != spec.end()) v = it->get<double>();
}
inline void overlay(const json& spec, const char* key, int& v) {
  if (auto it = spec.find(key); it != spec.end()) v = it->get<int>();
}
inline void overlay(const json& spec, const char* key, std::string& v) {
  if (auto it = spec.find(key); it != spec.end()) v = it->get<std::string>();
}
inline void overlay(const json& spec, const char* key, bool& v) {
  if (auto it = spec.find(key); it != spec.end()) v = it->get<bool>();
}

// Input c0 is taken verbatim under "additive" (the library's native form,
// energy density a (H + c0)^2) and as the common spontaneous-curvature
// convention under "common", which maps to the native value as c0 = -C0 / 2.
inline double apply_c0_convention(double c0, const std::string& convention) {
  if (convention == "additive") return c0;
  if (convention == "common") return -0.5 * c0;
  throw eh::validation_error("unknown c0 convention '" + convention +
                             "' (choose additive or common)");
}

inline void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw eh::validation_error("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

}  // namespace ehtool
