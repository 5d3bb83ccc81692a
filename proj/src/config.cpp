#include "uhmc/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace uhmc {

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

RunConfig RunConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_string(os.str(), path);
}

RunConfig RunConfig::parse_string(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  cfg.origin_ = origin;
  cfg.hash_ = fnv1a64(text);
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed section header");
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty())
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty section name");
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(t.substr(0, eq));
    if (key.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    if (!section.empty()) key = section + "." + key;
    if (cfg.entries_.count(key))
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key `" + key + "`");
    cfg.entries_[key] = Entry{trim(t.substr(eq + 1)), lineno};
  }
  return cfg;
}

const RunConfig::Entry& RunConfig::require(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end())
    throw ConfigError(origin_ + ": missing required key `" + key + "`");
  return it->second;
}

std::string RunConfig::get_string(const std::string& key) const { return require(key).value; }

double RunConfig::get_double(const std::string& key) const {
  const Entry& e = require(key);
  try {
    std::size_t pos = 0;
    const double v = std::stod(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(origin_ + ":" + std::to_string(e.line) + ": key `" + key +
                      "` is not a number: " + e.value);
  }
}

double RunConfig::get_double_or_inf(const std::string& key) const {
  const Entry& e = require(key);
  if (e.value == "inf" || e.value == "Inf" || e.value == "INF")
    return std::numeric_limits<double>::infinity();
  return get_double(key);
}

long RunConfig::get_int(const std::string& key) const {
  const Entry& e = require(key);
  try {
    std::size_t pos = 0;
    const long v = std::stol(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(origin_ + ":" + std::to_string(e.line) + ": key `" + key +
                      "` is not an integer: " + e.value);
  }
}

std::vector<long> RunConfig::get_int_list(const std::string& key) const {
  const Entry& e = require(key);
  std::vector<long> out;
  std::istringstream in(e.value);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      std::size_t pos = 0;
      out.push_back(std::stol(item, &pos));
      if (pos != item.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw ConfigError(origin_ + ":" + std::to_string(e.line) + ": key `" + key +
                        "` holds a non-integer list item: " + item);
    }
  }
  if (out.empty())
    throw ConfigError(origin_ + ":" + std::to_string(e.line) + ": key `" + key +
                      "` holds an empty list");
  return out;
}

std::string RunConfig::get_string_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double RunConfig::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long RunConfig::get_int_or(const std::string& key, long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

void RunConfig::validate(const std::vector<std::string>& required,
                         const std::vector<std::string>& optional) const {
  for (const auto& key : required) {
    if (!has(key)) throw ConfigError(origin_ + ": missing required key `" + key + "`");
  }
  for (const auto& [key, entry] : entries_) {
    const bool known = std::find(required.begin(), required.end(), key) != required.end() ||
                       std::find(optional.begin(), optional.end(), key) != optional.end();
    if (!known)
      throw ConfigError(origin_ + ":" + std::to_string(entry.line) + ": unknown key `" + key +
                        "`");
  }
}

}  // namespace uhmc
