#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ihd/cli.hpp"

namespace ihd::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Config parse_config_text(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    cfg[key] = value;
  }
  return cfg;
}

Config parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

void overlay(Config& base, const Config& over) {
  for (const auto& [k, v] : over) base[k] = v;
}

namespace {

double parse_double(const std::string& key, const std::string& value) {
  const char* s = value.c_str();
  char* end = nullptr;
  const double v = std::strtod(s, &end);
  if (end == s || *end != '\0')
    throw ConfigError(key + ": not a number: '" + value + "'");
  return v;
}

}  // namespace

double cfg_double(const Config& c, const std::string& key, double def) {
  const auto it = c.find(key);
  if (it == c.end()) return def;
  return parse_double(key, it->second);
}

long cfg_long(const Config& c, const std::string& key, long def) {
  const auto it = c.find(key);
  if (it == c.end()) return def;
  const char* s = it->second.c_str();
  char* end = nullptr;
  const long v = std::strtol(s, &end, 10);
  if (end == s || *end != '\0')
    throw ConfigError(key + ": not an integer: '" + it->second + "'");
  return v;
}

bool cfg_bool(const Config& c, const std::string& key, bool def) {
  const auto it = c.find(key);
  if (it == c.end()) return def;
  const std::string& v = it->second;
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": not a boolean: '" + v + "'");
}

std::string cfg_string(const Config& c, const std::string& key, const std::string& def) {
  const auto it = c.find(key);
  return it == c.end() ? def : it->second;
}

std::vector<double> cfg_list(const Config& c, const std::string& key) {
  const auto it = c.find(key);
  std::vector<double> out;
  if (it == c.end()) return out;
  std::istringstream in(it->second);
  std::string item;
  while (std::getline(in, item, ',')) {
    const std::string t = trim(item);
    if (t.empty()) throw ConfigError(key + ": empty list item");
    out.push_back(parse_double(key, t));
  }
  return out;
}

}  // namespace ihd::cli
