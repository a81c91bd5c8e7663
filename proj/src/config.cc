#include "hzkv/config.h"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace hzkv {

namespace {
std::string Trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}
}  // namespace

Status ConfigMap::ParseFile(const std::string& path, ConfigMap* out) {
  std::ifstream in(path);
  if (!in) {
    return Status::ConfigError("cannot open config file: " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseString(ss.str(), out, path);
}

Status ConfigMap::ParseString(const std::string& text, ConfigMap* out,
                              const std::string& origin) {
  out->kv_.clear();
  out->lines_.clear();
  out->origin_ = origin;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) {
      return Status::ConfigError(origin + ":" + std::to_string(lineno) +
                                 ": expected 'key = value', got '" + line + "'");
    }
    std::string key = Trim(line.substr(0, eq));
    std::string val = Trim(line.substr(eq + 1));
    if (key.empty()) {
      return Status::ConfigError(origin + ":" + std::to_string(lineno) +
                                 ": empty key");
    }
    out->kv_[key] = val;
    out->lines_[key] = lineno;
  }
  return Status::OK();
}

Status ConfigMap::GetString(const std::string& key, std::string* out) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) {
    return Status::ConfigError(origin_ + ": missing key '" + key + "'");
  }
  *out = it->second;
  return Status::OK();
}

Status ConfigMap::GetU64(const std::string& key, uint64_t* out) const {
  std::string s;
  Status st = GetString(key, &s);
  if (!st.ok()) return st;
  char* end = nullptr;
  unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0') {
    return Status::ConfigError(origin_ + ":" +
                               std::to_string(lines_.at(key)) + ": key '" +
                               key + "' is not an unsigned integer: '" + s + "'");
  }
  *out = v;
  return Status::OK();
}

Status ConfigMap::GetI64(const std::string& key, int64_t* out) const {
  std::string s;
  Status st = GetString(key, &s);
  if (!st.ok()) return st;
  char* end = nullptr;
  long long v = std::strtoll(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0') {
    return Status::ConfigError(origin_ + ":" +
                               std::to_string(lines_.at(key)) + ": key '" +
                               key + "' is not an integer: '" + s + "'");
  }
  *out = v;
  return Status::OK();
}

Status ConfigMap::GetDouble(const std::string& key, double* out) const {
  std::string s;
  Status st = GetString(key, &s);
  if (!st.ok()) return st;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    return Status::ConfigError(origin_ + ":" +
                               std::to_string(lines_.at(key)) + ": key '" +
                               key + "' is not a number: '" + s + "'");
  }
  *out = v;
  return Status::OK();
}

std::string ConfigMap::GetOr(const std::string& key, const std::string& dflt) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? dflt : it->second;
}

uint64_t ConfigMap::GetOr(const std::string& key, uint64_t dflt, Status* err) const {
  if (!Has(key)) return dflt;
  uint64_t v = 0;
  Status st = GetU64(key, &v);
  if (!st.ok() && err && err->ok()) *err = st;
  return st.ok() ? v : dflt;
}

double ConfigMap::GetOr(const std::string& key, double dflt, Status* err) const {
  if (!Has(key)) return dflt;
  double v = 0;
  Status st = GetDouble(key, &v);
  if (!st.ok() && err && err->ok()) *err = st;
  return st.ok() ? v : dflt;
}

}  // namespace hzkv
