#include "aggrefeed_cli/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace aggrefeed::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                        (s.front() == '\'' && s.back() == '\''))) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

void flatten_json(const nlohmann::json& node, const std::string& prefix,
                  std::map<std::string, std::string>& out) {
  if (node.is_object()) {
    for (const auto& [key, value] : node.items()) {
      flatten_json(value, prefix.empty() ? key : prefix + "." + key, out);
    }
  } else if (node.is_string()) {
    out[prefix] = node.get<std::string>();
  } else {
    out[prefix] = node.dump();
  }
}

}  // namespace

FlatConfig FlatConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    return parse_json(text);
  }
  return parse_keyvalue(text);
}

FlatConfig FlatConfig::parse_keyvalue(const std::string& text) {
  FlatConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw std::runtime_error("config line " + std::to_string(lineno) +
                                 ": unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = unquote(trim(line.substr(eq + 1)));
    cfg.entries_[section.empty() ? key : section + "." + key] = value;
  }
  return cfg;
}

FlatConfig FlatConfig::parse_json(const std::string& text) {
  FlatConfig cfg;
  flatten_json(nlohmann::json::parse(text), "", cfg.entries_);
  return cfg;
}

void FlatConfig::set(const std::string& path, const std::string& value) {
  entries_[path] = value;
}

bool FlatConfig::has(const std::string& path) const { return entries_.count(path) > 0; }

std::string FlatConfig::get_string(const std::string& path, const std::string& fallback) const {
  const auto it = entries_.find(path);
  return it == entries_.end() ? fallback : it->second;
}

double FlatConfig::get_double(const std::string& path, double fallback) const {
  const auto it = entries_.find(path);
  if (it == entries_.end()) return fallback;
  std::size_t pos = 0;
  const double v = std::stod(it->second, &pos);
  if (pos != it->second.size()) {
    throw std::runtime_error("config value for " + path + " is not a number: " + it->second);
  }
  return v;
}

int FlatConfig::get_int(const std::string& path, int fallback) const {
  return static_cast<int>(get_int64(path, fallback));
}

long long FlatConfig::get_int64(const std::string& path, long long fallback) const {
  const auto it = entries_.find(path);
  if (it == entries_.end()) return fallback;
  std::size_t pos = 0;
  const long long v = std::stoll(it->second, &pos);
  if (pos != it->second.size()) {
    throw std::runtime_error("config value for " + path + " is not an integer: " + it->second);
  }
  return v;
}

bool FlatConfig::get_bool(const std::string& path, bool fallback) const {
  const auto it = entries_.find(path);
  if (it == entries_.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  throw std::runtime_error("config value for " + path + " is not a boolean: " + it->second);
}

}  // namespace aggrefeed::cli
