#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace greenop {

// Comma-separated UTF-8 output with a mandatory header row.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& cells);
  std::size_t columns() const { return columns_; }

 private:
  std::ofstream os_;
  std::size_t columns_;
};

// Shortest round-trip decimal form; inf and nan spelled out.
std::string csv_number(double v);
std::string csv_number(long long v);
std::string csv_bool(bool v);

}  // namespace greenop
