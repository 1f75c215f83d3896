#include "geocache/cli/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace geocache::cli {
namespace {

using nlohmann::json;

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::string render(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(const std::string& v) const { return csv_field(v); }
  };
  return std::visit(Visitor{}, cell);
}

json cell_json(const Cell& cell) {
  struct Visitor {
    json operator()(std::monostate) const { return nullptr; }
    json operator()(double v) const { return std::isfinite(v) ? json(v) : json(nullptr); }
    json operator()(std::int64_t v) const { return v; }
    json operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, cell);
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return buffer;
}

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out << (c ? "," : "") << csv_field(table.columns[c]);
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << render(row[c]);
    out << '\n';
  }
}

json to_json(const Report& report) {
  json rows = json::array();
  for (const auto& row : report.table.rows) {
    json object = json::object();
    for (std::size_t c = 0; c < row.size() && c < report.table.columns.size(); ++c) {
      object[report.table.columns[c]] = cell_json(row[c]);
    }
    rows.push_back(std::move(object));
  }
  return {{"command", report.command},
          {"columns", report.table.columns},
          {"rows", std::move(rows)},
          {"metadata", report.metadata}};
}

void write_report(std::ostream& out, const Report& report, Format format) {
  if (format == Format::csv) {
    write_csv(out, report.table);
  } else {
    // Fixed key order comes from nlohmann's sorted object map.
    out << to_json(report).dump(2) << '\n';
  }
}

json error_object(Errc code, const std::string& message) {
  return {{"error", {{"kind", std::string(errc_name(code))}, {"message", message}}}};
}

}  // namespace geocache::cli
