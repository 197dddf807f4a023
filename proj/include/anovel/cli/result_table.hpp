#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "anovel/cli/config.hpp"

namespace anovel::cli {

struct Column {
  std::string name;
  std::string unit;  // empty for dimensionless

  bool operator==(const Column&) const = default;
};

/// Rectangular numeric table plus free-form metadata. NaN marks a missing value.
class ResultTable {
 public:
  ResultTable() : metadata_(nlohmann::ordered_json::object()) {}
  explicit ResultTable(std::vector<Column> columns);

  [[nodiscard]] const std::vector<Column>& columns() const noexcept { return columns_; }
  [[nodiscard]] const std::vector<std::vector<double>>& rows() const noexcept { return rows_; }
  [[nodiscard]] nlohmann::ordered_json& metadata() noexcept { return metadata_; }
  [[nodiscard]] const nlohmann::ordered_json& metadata() const noexcept { return metadata_; }

  /// Throws std::invalid_argument when the row width does not match.
  void add_row(std::vector<double> row);

  [[nodiscard]] std::size_t column_index(const std::string& name) const;
  [[nodiscard]] std::vector<double> column(const std::string& name) const;

  /// Exact comparison; NaN equals NaN.
  [[nodiscard]] bool same_as(const ResultTable& other) const;

  [[nodiscard]] std::string to_csv() const;
  [[nodiscard]] std::string to_json() const;
  static ResultTable from_csv(const std::string& text);
  static ResultTable from_json(const std::string& text);

 private:
  std::vector<Column> columns_;
  std::vector<std::vector<double>> rows_;
  nlohmann::ordered_json metadata_;
};

void write_table(const ResultTable& table, OutputFormat format, std::ostream& out);

/// Shortest decimal form that parses back to the same double.
std::string format_number(double value);
double parse_number(const std::string& text);

}  // namespace anovel::cli
