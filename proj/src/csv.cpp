#include "greenop/csv.hpp"

#include <charconv>
#include <cmath>

#include "greenop/error.hpp"

namespace greenop {

namespace {

std::string escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

}  // namespace

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : os_(path), columns_(header.size()) {
  require(os_.good(), ErrorKind::io, "cannot open " + path);
  require(!header.empty(), ErrorKind::invalid_argument, "CSV header is mandatory");
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  require(cells.size() == columns_, ErrorKind::invalid_argument, "CSV row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os_ << ',';
    os_ << escape(cells[i]);
  }
  os_ << '\n';
  require(os_.good(), ErrorKind::io, "CSV write failed");
}

std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_number(long long v) { return std::to_string(v); }

std::string csv_bool(bool v) { return v ? "true" : "false"; }

}  // namespace greenop
