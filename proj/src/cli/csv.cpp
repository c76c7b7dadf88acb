#include <charconv>
#include <cmath>

#include "synthdim/cli.hpp"

namespace synthdim::cli {

std::string format_number(double value) {
  if (value == 0.0) return "0";
  if (!std::isfinite(value)) return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary) {
  if (!out_) throw std::runtime_error("cannot write " + path.string());
  for (const std::string& h : header) cell(h);
  end_row();
}

CsvWriter& CsvWriter::cell(double value) { return cell(format_number(value)); }

CsvWriter& CsvWriter::cell(long value) { return cell(std::to_string(value)); }

CsvWriter& CsvWriter::cell(const std::string& value) {
  if (!first_) out_ << ',';
  out_ << value;
  first_ = false;
  return *this;
}

void CsvWriter::end_row() {
  out_ << '\n';
  first_ = true;
}

}  // namespace synthdim::cli
