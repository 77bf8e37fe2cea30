#include "vsg/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <system_error>

#include "vsg/error.hpp"

namespace vsg::io {

std::string format_fixed(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[512];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed);
  if (ec != std::errc()) {
    auto [end2, ec2] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, end2);
  }
  return std::string(buf, end);
}

double parse_double(std::string_view text) {
  if (text == "nan") return std::nan("");
  if (text == "inf") return INFINITY;
  if (text == "-inf") return -INFINITY;
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw Error(ErrorCode::Io, "cannot parse number '" + std::string(text) + "'");
  return v;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path), path_(path) {
  if (!out_) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
  for (const auto& h : header) cell(std::string_view(h));
  end_row();
}

void CsvWriter::separator() {
  if (row_started_) out_ << ',';
  row_started_ = true;
}

CsvWriter& CsvWriter::cell(double value) {
  separator();
  out_ << format_fixed(value);
  return *this;
}

CsvWriter& CsvWriter::cell(long long value) {
  separator();
  out_ << value;
  return *this;
}

CsvWriter& CsvWriter::cell(std::string_view text) {
  separator();
  out_ << text;
  return *this;
}

void CsvWriter::end_row() {
  out_ << '\n';
  row_started_ = false;
  if (!out_) throw Error(ErrorCode::Io, "write failed for " + path_);
}

int CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return int(i);
  return -1;
}

std::vector<double> CsvTable::numeric_column(std::string_view name) const {
  const int c = column(name);
  if (c < 0) throw Error(ErrorCode::Io, "missing column '" + std::string(name) + "'");
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(parse_double(r.at(std::size_t(c))));
  return out;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  CsvTable t;
  std::string line;
  auto split = [](const std::string& l) {
    std::vector<std::string> cells;
    std::stringstream ss(l);
    std::string c;
    while (std::getline(ss, c, ',')) cells.push_back(c);
    if (!l.empty() && l.back() == ',') cells.emplace_back();
    return cells;
  };
  if (!std::getline(in, line)) throw Error(ErrorCode::Io, path + " is empty");
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != t.header.size())
      throw Error(ErrorCode::Io, path + ": row width does not match header");
    t.rows.push_back(std::move(cells));
  }
  return t;
}

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create directory " + path + ": " + ec.message());
}

std::string join_path(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

}  // namespace vsg::io
