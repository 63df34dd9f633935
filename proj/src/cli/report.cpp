#include "hardy/report.hpp"

#include <fmt/format.h>

#include <cmath>
#include <cstdlib>
#include <json.hpp>

#include "hardy/errors.hpp"

namespace hardy {

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::ordered_json to_json(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<V, double>) {
          if (!std::isfinite(v)) return fmt::format("{}", v);
          return v;
        } else {
          return v;
        }
      },
      cell);
}

}  // namespace

const char* to_string(CellType type) {
  switch (type) {
    case CellType::Real: return "real";
    case CellType::Integer: return "integer";
    case CellType::Boolean: return "boolean";
    case CellType::Text: return "text";
  }
  return "?";
}

std::string format_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<V, double>) {
          return fmt::format("{}", v);
        } else if constexpr (std::is_same_v<V, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<V, long long>) {
          return fmt::format("{}", v);
        } else {
          return v;
        }
      },
      cell);
}

void Report::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw Error(ErrorKind::ConfigError, fmt::format("row has {} cells for {} columns", row.size(), columns.size()));
  }
  rows.push_back(std::move(row));
}

void write_csv(const Report& report, std::ostream& os) {
  os << "# hardy " << report.tool_version << '\n';
  os << "# command: " << report.command << '\n';
  for (const auto& [key, value] : report.config) os << "# config: " << key << '=' << value << '\n';
  os << "# schema:";
  for (std::size_t i = 0; i < report.columns.size(); ++i) {
    const auto& c = report.columns[i];
    os << (i ? ", " : " ") << c.name << ':' << to_string(c.type);
    if (!c.unit.empty()) os << " (" << c.unit << ')';
  }
  os << '\n';
  for (std::size_t i = 0; i < report.columns.size(); ++i) os << (i ? "," : "") << report.columns[i].name;
  os << '\n';
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_escape(format_cell(row[i]));
    os << '\n';
  }
  for (const auto& [key, value] : report.footer) os << "# result: " << key << '=' << format_cell(value) << '\n';
  for (const auto& m : report.messages) os << "# message: " << m << '\n';
  os << "# status: " << report.status << '\n';
}

void write_json(const Report& report, std::ostream& os) {
  nlohmann::ordered_json j;
  j["tool"] = "hardy";
  j["version"] = report.tool_version;
  j["command"] = report.command;
  auto& config = j["config"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : report.config) config[key] = value;
  auto& schema = j["columns"] = nlohmann::ordered_json::array();
  for (const auto& c : report.columns) schema.push_back({{"name", c.name}, {"type", to_string(c.type)}, {"unit", c.unit}});
  auto& rows = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    auto r = nlohmann::ordered_json::array();
    for (const auto& cell : row) r.push_back(to_json(cell));
    rows.push_back(std::move(r));
  }
  auto& footer = j["results"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : report.footer) footer[key] = to_json(value);
  j["messages"] = report.messages;
  j["status"] = report.status;
  os << j.dump(2) << '\n';
}

int worker_count() {
  const char* env = std::getenv("HARDY_WORKERS");
  if (env == nullptr || *env == '\0') {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
  }
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1 || n > 1024) {
    throw Error(ErrorKind::ConfigError, fmt::format("HARDY_WORKERS must be an integer in [1, 1024], got '{}'", env));
  }
  return static_cast<int>(n);
}

}  // namespace hardy
