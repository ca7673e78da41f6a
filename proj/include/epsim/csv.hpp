#pragma once

#include <charconv>
#include <initializer_list>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace epsim {

/// Shortest decimal that round-trips to the same double; always uses '.'.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  if (res.ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf, res.ptr);
}

/// Locale-independent parse of a whole token; returns false on junk.
inline bool parse_double(std::string_view text, double& out) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc{} && res.ptr == last;
}

/// Comma-separated writer with a fixed header row.
class CsvWriter {
 public:
  CsvWriter(std::ostream& os, std::initializer_list<std::string_view> columns) : os_(os) {
    write_header(std::vector<std::string_view>(columns));
  }
  CsvWriter(std::ostream& os, const std::vector<std::string>& columns) : os_(os) {
    write_header(std::vector<std::string_view>(columns.begin(), columns.end()));
  }

  void row(std::span<const double> values) {
    if (values.size() != columns_) throw std::invalid_argument("CsvWriter: wrong column count");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) os_ << ',';
      os_ << format_double(values[i]);
    }
    os_ << '\n';
  }
  void row(std::initializer_list<double> values) {
    row(std::span<const double>(values.begin(), values.size()));
  }

 private:
  void write_header(const std::vector<std::string_view>& cols) {
    columns_ = cols.size();
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) os_ << ',';
      os_ << cols[i];
    }
    os_ << '\n';
  }

  std::ostream& os_;
  std::size_t columns_ = 0;
};

}  // namespace epsim
