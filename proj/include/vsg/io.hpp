#pragma once

// Plain CSV emission with lossless, locale-independent number formatting.

#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace vsg::io {

/// Shortest fixed-notation text that parses back to the identical double.
std::string format_fixed(double value);

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);

  CsvWriter& cell(double value);
  CsvWriter& cell(long long value);
  CsvWriter& cell(std::string_view text);
  void end_row();

 private:
  void separator();

  std::ofstream out_;
  std::string path_;
  bool row_started_ = false;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(std::string_view name) const;  // -1 when absent
  std::vector<double> numeric_column(std::string_view name) const;
};

CsvTable read_csv(const std::string& path);
double parse_double(std::string_view text);

void ensure_directory(const std::string& path);
std::string join_path(const std::string& dir, const std::string& file);

}  // namespace vsg::io
