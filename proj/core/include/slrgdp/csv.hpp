#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace slrgdp::csv {

std::string_view trim(std::string_view s);

// Splits one line on `sep`; fields are trimmed. No quoting support: none of the
// formats handled here quote fields.
std::vector<std::string> split(std::string_view line, char sep = ',');

double to_double(std::string_view field, std::size_t line, std::string_view what);
long long to_integer(std::string_view field, std::size_t line, std::string_view what);

// Header-addressed CSV table. Lines starting with '#' and blank lines are skipped.
class Table {
 public:
  static Table parse(std::string_view content);

  // Throws ParseError if any of `columns` is missing from the header.
  void require(const std::vector<std::string>& columns) const;

  std::size_t size() const { return rows_.size(); }
  const std::string& at(std::size_t row, const std::string& column) const;
  // Source line of a data row, for diagnostics.
  std::size_t line_of(std::size_t row) const { return lines_[row]; }
  const std::vector<std::string>& header() const { return header_; }

 private:
  std::vector<std::string> header_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::size_t> lines_;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace slrgdp::csv
