#ifndef AGGREFEED_CLI_CONFIG_HPP
#define AGGREFEED_CLI_CONFIG_HPP

#include <map>
#include <string>
#include <vector>

namespace aggrefeed::cli {

/// Flattened run configuration: "section.key" -> raw value string. Loaded
/// from a sectioned key-value file (TOML-style subset) or a JSON object;
/// --set overrides are applied on top.
class FlatConfig {
 public:
  static FlatConfig load(const std::string& path);
  static FlatConfig parse_keyvalue(const std::string& text);
  static FlatConfig parse_json(const std::string& text);

  void set(const std::string& path, const std::string& value);
  bool has(const std::string& path) const;

  std::string get_string(const std::string& path, const std::string& fallback) const;
  double get_double(const std::string& path, double fallback) const;
  int get_int(const std::string& path, int fallback) const;
  long long get_int64(const std::string& path, long long fallback) const;
  bool get_bool(const std::string& path, bool fallback) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace aggrefeed::cli

#endif
