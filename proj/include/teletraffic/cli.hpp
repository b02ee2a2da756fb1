#pragma once

#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace teletraffic {

// Runs the ttk front end. args excludes the program name. Returns the exit
// code (0 ok, 2 validation, 3 instability or infeasibility, 4 convergence,
// 1 for a failed selfcheck).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string format_cell(const Cell& c, int digits);
void write_table(const Table& t, std::ostream& out, int digits);
void write_csv(const Table& t, std::ostream& out, int digits);
// Inverse of write_csv for numeric and plain-text cells.
Table read_csv(const std::string& text);

}  // namespace teletraffic
