#pragma once

// Structured-text config files: one "key = value" pair per line, '#' starts a
// comment. Keys are case-sensitive. Used for device profiles and the harness
// experiment config.

#include <cstdint>
#include <map>
#include <string>

#include "hzkv/status.h"

namespace hzkv {

class ConfigMap {
 public:
  static Status ParseFile(const std::string& path, ConfigMap* out);
  static Status ParseString(const std::string& text, ConfigMap* out,
                            const std::string& origin = "<string>");

  bool Has(const std::string& key) const { return kv_.count(key) > 0; }

  // Getters fail with ConfigError naming the key (and line) on bad values.
  Status GetString(const std::string& key, std::string* out) const;
  Status GetU64(const std::string& key, uint64_t* out) const;
  Status GetI64(const std::string& key, int64_t* out) const;
  Status GetDouble(const std::string& key, double* out) const;

  // Variants with defaults for optional keys.
  std::string GetOr(const std::string& key, const std::string& dflt) const;
  uint64_t GetOr(const std::string& key, uint64_t dflt, Status* err) const;
  double GetOr(const std::string& key, double dflt, Status* err) const;

  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  struct Value {
    std::string text;
    int line;
  };
  std::map<std::string, std::string> kv_;
  std::map<std::string, int> lines_;
  std::string origin_;
};

}  // namespace hzkv
