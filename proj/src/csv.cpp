#include "gtoci/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace gtoci {

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string> header)
    : path_(path), out_(path, std::ios::binary), columns_(header.size()) {
  if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
  row(std::vector<std::string>(header));
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  if (fields.size() != columns_) throw std::logic_error("CSV row width differs from header in " + path_.string());
  for (std::size_t i = 0; i < fields.size(); ++i) out_ << (i ? "," : "") << fields[i];
  out_ << '\n';
  if (!out_) throw std::runtime_error("write failed for " + path_.string());
}

void CsvWriter::close() {
  out_.close();
  if (out_.fail()) throw std::runtime_error("closing " + path_.string() + " failed");
}

}  // namespace gtoci
