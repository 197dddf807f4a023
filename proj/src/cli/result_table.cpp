#include "anovel/cli/result_table.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace anovel::cli {

using nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string header_text(const Column& c) { return c.unit.empty() ? c.name : c.name + " [" + c.unit + "]"; }

Column parse_header(const std::string& text) {
  const auto open = text.rfind(" [");
  if (open != std::string::npos && !text.empty() && text.back() == ']') {
    return Column{text.substr(0, open), text.substr(open + 2, text.size() - open - 3)};
  }
  return Column{text, ""};
}

std::string quote_csv(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Splits one CSV record starting at `pos`; advances `pos` past the line break.
std::vector<std::string> read_record(const std::string& text, std::size_t& pos) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  while (pos < text.size()) {
    const char c = text[pos];
    if (quoted) {
      if (c == '"') {
        if (pos + 1 < text.size() && text[pos + 1] == '"') {
          field += '"';
          ++pos;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      ++pos;
      continue;
    }
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && pos + 1 < text.size() && text[pos + 1] == '\n') ++pos;
      ++pos;
      fields.push_back(std::move(field));
      return fields;
    } else {
      field += c;
    }
    ++pos;
  }
  if (quoted) throw std::invalid_argument("csv: unterminated quoted field");
  fields.push_back(std::move(field));
  return fields;
}

ordered_json json_value(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double from_json_value(const ordered_json& v) {
  if (v.is_null()) return kNaN;
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_number(v.get<std::string>());
  throw std::invalid_argument("json: row entries must be numbers, null or inf strings");
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

double parse_number(const std::string& text) {
  if (text.empty() || text == "nan") return kNaN;
  if (text == "inf") return kInf;
  if (text == "-inf") return -kInf;
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw std::invalid_argument("not a number: '" + text + "'");
  }
  return value;
}

ResultTable::ResultTable(std::vector<Column> columns)
    : columns_(std::move(columns)), metadata_(ordered_json::object()) {}

void ResultTable::add_row(std::vector<double> row) {
  if (row.size() != columns_.size()) {
    throw std::invalid_argument("row has " + std::to_string(row.size()) + " values, table has " +
                                std::to_string(columns_.size()) + " columns");
  }
  rows_.push_back(std::move(row));
}

std::size_t ResultTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == name) return i;
  }
  throw std::out_of_range("no column named '" + name + "'");
}

std::vector<double> ResultTable::column(const std::string& name) const {
  const std::size_t idx = column_index(name);
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) out.push_back(r[idx]);
  return out;
}

bool ResultTable::same_as(const ResultTable& other) const {
  if (columns_ != other.columns_ || rows_.size() != other.rows_.size()) return false;
  if (metadata_ != other.metadata_) return false;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    for (std::size_t j = 0; j < columns_.size(); ++j) {
      const double a = rows_[i][j];
      const double b = other.rows_[i][j];
      if (std::isnan(a) && std::isnan(b)) continue;
      if (a != b || std::signbit(a) != std::signbit(b)) return false;
    }
  }
  return true;
}

std::string ResultTable::to_csv() const {
  std::ostringstream out;
  for (const auto& [key, value] : metadata_.items()) out << "# " << key << ": " << value.dump() << "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    out << (i ? "," : "") << quote_csv(header_text(columns_[i]));
  }
  out << "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << "\n";
  }
  return out.str();
}

std::string ResultTable::to_json() const {
  ordered_json doc;
  ordered_json meta = metadata_;
  ordered_json cols = ordered_json::array();
  for (const auto& c : columns_) cols.push_back({{"name", c.name}, {"unit", c.unit}});
  meta["columns"] = std::move(cols);
  doc["metadata"] = std::move(meta);
  ordered_json rows = ordered_json::array();
  for (const auto& r : rows_) {
    ordered_json row = ordered_json::array();
    for (double v : r) row.push_back(json_value(v));
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

ResultTable ResultTable::from_csv(const std::string& text) {
  ResultTable table;
  std::size_t pos = 0;
  while (pos < text.size() && text[pos] == '#') {
    const auto end = text.find('\n', pos);
    const std::string line = text.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
    pos = end == std::string::npos ? text.size() : end + 1;
    const auto sep = line.find(": ");
    if (line.size() < 2 || line[1] != ' ' || sep == std::string::npos) {
      throw std::invalid_argument("csv: malformed metadata line '" + line + "'");
    }
    table.metadata_[line.substr(2, sep - 2)] = ordered_json::parse(line.substr(sep + 2));
  }
  if (pos >= text.size()) throw std::invalid_argument("csv: missing header row");
  for (const auto& h : read_record(text, pos)) table.columns_.push_back(parse_header(h));
  while (pos < text.size()) {
    const auto fields = read_record(text, pos);
    if (fields.size() == 1 && fields[0].empty() && table.columns_.size() != 1) continue;
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_number(f));
    table.add_row(std::move(row));
  }
  return table;
}

ResultTable ResultTable::from_json(const std::string& text) {
  const ordered_json doc = ordered_json::parse(text);
  if (!doc.contains("metadata") || !doc.contains("rows")) {
    throw std::invalid_argument("json: expected metadata and rows members");
  }
  ResultTable table;
  table.metadata_ = doc.at("metadata");
  for (const auto& c : table.metadata_.at("columns")) {
    table.columns_.push_back(Column{c.at("name").get<std::string>(), c.at("unit").get<std::string>()});
  }
  table.metadata_.erase("columns");
  for (const auto& r : doc.at("rows")) {
    std::vector<double> row;
    for (const auto& v : r) row.push_back(from_json_value(v));
    table.add_row(std::move(row));
  }
  return table;
}

void write_table(const ResultTable& table, OutputFormat format, std::ostream& out) {
  out << (format == OutputFormat::Csv ? table.to_csv() : table.to_json());
}

}  // namespace anovel::cli
