#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

namespace gtoci {

/// 12 significant digits, "%.12g".
std::string format_number(double x);

/// Header row on open; each row is written as given.  Throws on I/O failure.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string> header);
  void row(const std::vector<std::string>& fields);
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_ = 0;
};

}  // namespace gtoci
