#pragma once

#include <string>
#include <vector>

namespace specbound {

/// In-memory CSV table with a fixed header. Numbers are written with 17
/// significant digits so values round-trip exactly.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  const std::vector<std::string>& header() const noexcept { return header_; }
  const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }

  CsvTable& add_row(std::vector<std::string> cells);
  std::string str() const;
  void write(const std::string& path) const;

  /// Column index by name; throws std::out_of_range if absent.
  std::size_t column(const std::string& name) const;

  static CsvTable parse(const std::string& text);
  static CsvTable read(const std::string& path);

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string csv_num(double x);
std::string csv_int(long long x);

}  // namespace specbound
