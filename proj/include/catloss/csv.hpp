#pragma once

// Minimal CSV table: header row, LF line endings, numbers in shortest
// round-trip decimal form so identical inputs give identical bytes.

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace catloss::csv {

/// Shortest decimal string that parses back to exactly x ("nan", "inf", "-inf" otherwise).
std::string format_number(double x);

class Table {
 public:
  explicit Table(std::vector<std::string> header);

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

  /// Throws std::invalid_argument when the cell count differs from the header.
  void add_row(std::vector<std::string> cells);
  void add_row(const std::vector<double>& values);

  void write(std::ostream& out) const;
  /// Throws std::runtime_error when the file cannot be written.
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace catloss::csv
