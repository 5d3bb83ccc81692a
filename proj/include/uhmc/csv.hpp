#pragma once
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace uhmc {

// CSV emitter with the pinned float format (17 significant digits, so values
// round-trip exactly). Every file starts with a comment header carrying the
// config hash and seed.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::uint64_t config_hash, std::uint64_t seed,
            const std::vector<std::string>& columns);

  void begin_row();
  void field(double v);
  void field(long v);
  void field(int v) { field(static_cast<long>(v)); }
  void end_row();

  static std::string format_double(double v);

 private:
  std::ofstream out_;
  bool first_in_row_ = true;
};

}  // namespace uhmc
