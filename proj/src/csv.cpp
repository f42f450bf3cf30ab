#include "mdm/csv.hpp"

#include <charconv>
#include <cmath>

namespace mdm {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, result.ptr);
}

void CsvWriter::header(const std::vector<std::string_view>& columns) {
  for (auto column : columns) field(column);
  end_row();
}

void CsvWriter::separator() {
  if (row_started_) out_ << ',';
  row_started_ = true;
}

CsvWriter& CsvWriter::field(double value) {
  separator();
  out_ << format_double(value);
  return *this;
}

CsvWriter& CsvWriter::field(long long value) {
  separator();
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  out_.write(buf, result.ptr - buf);
  return *this;
}

CsvWriter& CsvWriter::field(std::string_view value) {
  separator();
  out_ << value;
  return *this;
}

void CsvWriter::end_row() {
  out_ << '\n';
  row_started_ = false;
}

}  // namespace mdm
