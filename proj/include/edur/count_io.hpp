#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "edur/polarimeter.hpp"

namespace edur {

// Locale-independent decimal with 17 significant digits; parses back to the
// same double.
std::string format_double(double value);
// FormatError on anything that is not a complete decimal number.
double parse_double(const std::string& text);

struct NamedTable {
  std::string state;
  CountTable table;
};

// CSV with header `state,m,b,intensity`, one row per intensity in
// CountTable storage order.
void write_count_tables_csv(std::ostream& out, const std::vector<NamedTable>& tables);
// Reads tables written by write_count_tables_csv. Every state must carry
// all four (m, b) rows. Tables are tagged with `mode`; their mean count is
// the observed total.
std::vector<NamedTable> read_count_tables_csv(std::istream& in, CountMode mode = CountMode::poisson);

// JSON array of {"state", "m", "b", "intensity"} objects.
std::string count_tables_to_json(const std::vector<NamedTable>& tables);
std::vector<NamedTable> count_tables_from_json(const std::string& text, CountMode mode = CountMode::poisson);

// The five distinct tables of a run under the names rho, a_reflected,
// a_conditioned, b_reflected, b_conditioned.
std::vector<NamedTable> named_tables(const ThreeStateRun& run);

}  // namespace edur
