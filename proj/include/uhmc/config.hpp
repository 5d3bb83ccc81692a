#pragma once
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace uhmc {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key=value file with [section] headers; keys are addressed as
// "section.key". Unknown keys are hard errors during validation.
class RunConfig {
 public:
  struct Entry {
    std::string value;
    int line = 0;
  };

  static RunConfig parse_file(const std::string& path);
  static RunConfig parse_string(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  const std::string& origin() const { return origin_; }
  std::uint64_t content_hash() const { return hash_; }

  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  long get_int(const std::string& key) const;
  // "inf" is accepted where a threshold may be infinite.
  double get_double_or_inf(const std::string& key) const;
  std::vector<long> get_int_list(const std::string& key) const;  // comma separated

  std::string get_string_or(const std::string& key, const std::string& fallback) const;
  double get_double_or(const std::string& key, double fallback) const;
  long get_int_or(const std::string& key, long fallback) const;

  // Rejects unknown keys and missing required keys; messages name the
  // offending key and line.
  void validate(const std::vector<std::string>& required,
                const std::vector<std::string>& optional) const;

 private:
  std::map<std::string, Entry> entries_;
  std::string origin_;
  std::uint64_t hash_ = 0;

  const Entry& require(const std::string& key) const;
};

std::uint64_t fnv1a64(const std::string& data);

}  // namespace uhmc
