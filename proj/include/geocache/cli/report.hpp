#pragma once

#include "json.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "geocache/error.hpp"

namespace geocache::cli {

/// One table cell. monostate renders as an empty CSV field / JSON null.
using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Output of one command: a table plus free-form metadata. CSV carries the
/// table only; JSON carries both.
struct Report {
  std::string command;
  Table table;
  nlohmann::json metadata = nlohmann::json::object();
};

enum class Format { csv, json };

/// %.12g; non-finite values print as nan/inf (CSV) or null (JSON).
std::string format_number(double value);

void write_csv(std::ostream& out, const Table& table);
nlohmann::json to_json(const Report& report);
void write_report(std::ostream& out, const Report& report, Format format);

nlohmann::json error_object(Errc code, const std::string& message);

}  // namespace geocache::cli
