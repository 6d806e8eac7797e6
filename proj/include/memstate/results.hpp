#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "memstate/config.hpp"

namespace memstate {

using Cell = std::variant<double, std::string>;

/// Rectangular result table plus self-describing metadata.
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();
  /// Column used as x in the long-form plot file.
  std::string plot_x;
  /// Label columns whose values prefix the series names in the plot file.
  std::vector<std::string> plot_keys;

  /// Throws std::invalid_argument if the row width differs from the header.
  void add_row(std::vector<Cell> row);
  std::size_t column_index(const std::string& name) const;
  double number(std::size_t row, const std::string& column) const;
  const std::string& text(std::size_t row, const std::string& column) const;

  friend bool operator==(const ResultTable&, const ResultTable&) = default;
};

/// Shortest-general formatting with 6 significant digits and a '.' decimal
/// separator regardless of locale.
std::string format_number(double value);

/// `out.csv` -> `out.plot.csv`.
std::filesystem::path plot_path_for(const std::filesystem::path& path);

void write_csv(std::ostream& out, const ResultTable& table);
void write_json(std::ostream& out, const ResultTable& table);
/// Long form (x, series, y): one line per numeric non-x cell.
void write_plot_csv(std::ostream& out, const ResultTable& table);

/// Writes `path` in the chosen format plus the adjacent plot file. Throws
/// IoError naming the path on failure.
void write_results(const ResultTable& table, const std::filesystem::path& path,
                   OutputFormat format);

ResultTable read_results_json(std::istream& in);
ResultTable read_results_json(const std::filesystem::path& path);

}  // namespace memstate
