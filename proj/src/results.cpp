#include "memstate/results.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "memstate/errors.hpp"

namespace memstate {

namespace {

std::string csv_field(const std::string& text) {
  const bool needs_quotes = text.find_first_of(",\"\r\n") != std::string::npos ||
                            (!text.empty() && (text.front() == ' ' || text.back() == ' '));
  if (!needs_quotes) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_cell(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return format_number(*d);
  return csv_field(std::get<std::string>(cell));
}

std::string series_prefix(const ResultTable& table, const std::vector<Cell>& row) {
  std::string prefix;
  for (const auto& key : table.plot_keys) {
    const auto& cell = row[table.column_index(key)];
    prefix += key + "=" +
              (std::holds_alternative<double>(cell) ? format_number(std::get<double>(cell))
                                                    : std::get<std::string>(cell)) +
              ":";
  }
  return prefix;
}

}  // namespace

void ResultTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw std::invalid_argument("row has " + std::to_string(row.size()) + " cells, table has " +
                                std::to_string(columns.size()) + " columns");
  rows.push_back(std::move(row));
}

std::size_t ResultTable::column_index(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range("no column '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

double ResultTable::number(std::size_t row, const std::string& column) const {
  return std::get<double>(rows.at(row).at(column_index(column)));
}

const std::string& ResultTable::text(std::size_t row, const std::string& column) const {
  return std::get<std::string>(rows.at(row).at(column_index(column)));
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (value == 0.0) return "0";  // folds -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 6);
  return std::string(buf, res.ptr);
}

std::filesystem::path plot_path_for(const std::filesystem::path& path) {
  auto out = path;
  out.replace_extension(".plot.csv");
  return out;
}

void write_csv(std::ostream& out, const ResultTable& table) {
  for (const auto& [key, value] : table.metadata.items())
    out << "# " << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump())
        << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    out << (i ? "," : "") << csv_field(table.columns[i]);
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
    out << '\n';
  }
}

void write_json(std::ostream& out, const ResultTable& table) {
  nlohmann::ordered_json j;
  j["metadata"] = table.metadata;
  j["columns"] = table.columns;
  j["plot"] = {{"x", table.plot_x}, {"keys", table.plot_keys}};
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    auto r = nlohmann::ordered_json::array();
    for (const auto& cell : row) {
      if (const auto* d = std::get_if<double>(&cell))
        r.push_back(*d);
      else
        r.push_back(std::get<std::string>(cell));
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  out << j.dump(2) << '\n';
}

void write_plot_csv(std::ostream& out, const ResultTable& table) {
  out << "x,series,y\n";
  if (table.plot_x.empty()) return;
  const std::size_t x_index = table.column_index(table.plot_x);
  for (const auto& row : table.rows) {
    const std::string x = csv_cell(row[x_index]);
    const std::string prefix = series_prefix(table, row);
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i == x_index || !std::holds_alternative<double>(row[i])) continue;
      if (std::find(table.plot_keys.begin(), table.plot_keys.end(), table.columns[i]) !=
          table.plot_keys.end())
        continue;
      out << x << ',' << csv_field(prefix + table.columns[i]) << ','
          << format_number(std::get<double>(row[i])) << '\n';
    }
  }
}

void write_results(const ResultTable& table, const std::filesystem::path& path,
                   OutputFormat format) {
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    if (format == OutputFormat::csv)
      write_csv(out, table);
    else
      write_json(out, table);
    if (!out) throw IoError("write failed for '" + path.string() + "'");
  }
  const auto plot = plot_path_for(path);
  std::ofstream out(plot, std::ios::binary);
  if (!out) throw IoError("cannot open '" + plot.string() + "' for writing");
  write_plot_csv(out, table);
  if (!out) throw IoError("write failed for '" + plot.string() + "'");
}

ResultTable read_results_json(std::istream& in) {
  nlohmann::ordered_json j;
  try {
    in >> j;
    ResultTable table;
    table.metadata = j.at("metadata");
    table.columns = j.at("columns").get<std::vector<std::string>>();
    if (j.contains("plot")) {
      table.plot_x = j["plot"].at("x").get<std::string>();
      table.plot_keys = j["plot"].at("keys").get<std::vector<std::string>>();
    }
    for (const auto& r : j.at("rows")) {
      std::vector<Cell> row;
      for (const auto& cell : r) {
        if (cell.is_number())
          row.emplace_back(cell.get<double>());
        else
          row.emplace_back(cell.get<std::string>());
      }
      table.add_row(std::move(row));
    }
    return table;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed result JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("malformed result JSON: ") + e.what());
  }
}

ResultTable read_results_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return read_results_json(in);
}

}  // namespace memstate
