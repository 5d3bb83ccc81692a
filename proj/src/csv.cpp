#include "uhmc/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace uhmc {

std::string CsvWriter::format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, std::uint64_t config_hash, std::uint64_t seed,
                     const std::vector<std::string>& columns)
    : out_(path) {
  if (!out_) throw std::runtime_error("cannot open output file: " + path);
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(config_hash));
  out_ << "# config_hash=" << hash << " seed=" << seed << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out_ << ",";
    out_ << columns[i];
  }
  out_ << "\n";
}

void CsvWriter::begin_row() { first_in_row_ = true; }

void CsvWriter::field(double v) {
  if (!first_in_row_) out_ << ",";
  first_in_row_ = false;
  out_ << format_double(v);
}

void CsvWriter::field(long v) {
  if (!first_in_row_) out_ << ",";
  first_in_row_ = false;
  out_ << v;
}

void CsvWriter::end_row() { out_ << "\n"; }

}  // namespace uhmc
