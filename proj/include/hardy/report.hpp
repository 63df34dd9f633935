#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

namespace hardy {

/// Empty cells print as "" in CSV and null in JSON.
using Cell = std::variant<std::monostate, double, long long, bool, std::string>;

enum class CellType { Real, Integer, Boolean, Text };

struct Column {
  std::string name;
  CellType type = CellType::Real;
  std::string unit;  // free-form description for the schema line
};

/// One self-describing output table: resolved config, column schema, rows and
/// a key-value footer. Doubles are written with 17 significant digits.
struct Report {
  std::string tool_version;
  std::string command;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, Cell>> footer;
  std::string status = "pass";
  std::vector<std::string> messages;

  void add_row(std::vector<Cell> row);
  void note(std::string key, Cell value) { footer.emplace_back(std::move(key), std::move(value)); }
};

void write_csv(const Report& report, std::ostream& os);
void write_json(const Report& report, std::ostream& os);

std::string format_cell(const Cell& cell);
const char* to_string(CellType type);

/// Worker count from HARDY_WORKERS, else the hardware concurrency. Throws
/// ConfigError on a malformed value.
int worker_count();

/// fn(0), ..., fn(n-1) on up to `workers` threads. Results come back in index
/// order; the first exception by index is rethrown after all workers finish.
template <typename F>
auto ordered_map(std::size_t n, int workers, F fn) -> std::vector<decltype(fn(std::size_t{}))> {
  using T = decltype(fn(std::size_t{}));
  std::vector<std::optional<T>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t count = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
  if (count <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < count; ++t) pool.emplace_back(work);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace hardy
