#include "slrgdp/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "slrgdp/error.hpp"

namespace slrgdp::csv {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.emplace_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_double(std::string_view field, std::size_t line, std::string_view what) {
  field = trim(field);
  double value = 0.0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw ParseError("invalid " + std::string(what) + " '" + std::string(field) + "'", line);
  }
  return value;
}

long long to_integer(std::string_view field, std::size_t line, std::string_view what) {
  field = trim(field);
  long long value = 0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc{} || ptr != end) {
    throw ParseError("invalid " + std::string(what) + " '" + std::string(field) + "'", line);
  }
  return value;
}

Table Table::parse(std::string_view content) {
  Table t;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool have_header = false;
  while (pos <= content.size()) {
    const auto nl = content.find('\n', pos);
    const auto raw = content.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    pos = nl == std::string_view::npos ? content.size() + 1 : nl + 1;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto fields = split(line);
    if (!have_header) {
      t.header_ = fields;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (!t.index_.emplace(fields[i], i).second) {
          throw ParseError("duplicate column '" + fields[i] + "'", line_no);
        }
      }
      have_header = true;
      continue;
    }
    if (fields.size() != t.header_.size()) {
      throw ParseError("expected " + std::to_string(t.header_.size()) + " fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    }
    t.rows_.push_back(std::move(fields));
    t.lines_.push_back(line_no);
  }
  if (!have_header) throw ParseError("missing CSV header");
  return t;
}

void Table::require(const std::vector<std::string>& columns) const {
  for (const auto& c : columns) {
    if (!index_.count(c)) throw ParseError("missing column '" + c + "'", 1);
  }
}

const std::string& Table::at(std::size_t row, const std::string& column) const {
  const auto it = index_.find(column);
  if (it == index_.end()) throw ParseError("missing column '" + column + "'");
  return rows_.at(row)[it->second];
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << content;
}

}  // namespace slrgdp::csv
