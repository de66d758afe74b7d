#include "edur/count_io.hpp"

#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "edur/errors.hpp"

namespace edur {

namespace {

constexpr const char* kHeader = "state,m,b,intensity";

int parse_label(const std::string& text) {
  if (text == "1" || text == "+1") return 1;
  if (text == "-1") return -1;
  throw FormatError("count table: outcome label '" + text + "' is not +1 or -1");
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream stream(line);
  while (std::getline(stream, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

struct PartialTable {
  std::array<double, 4> entries{};
  std::array<bool, 4> seen{};
};

class TableAssembler {
 public:
  void add(const std::string& state, int m, int b, double intensity) {
    if (state.empty()) throw FormatError("count table: empty state name");
    auto [it, inserted] = tables_.try_emplace(state);
    if (inserted) order_.push_back(state);
    const std::size_t k = CountTable::index(m, b);
    if (it->second.seen[k]) throw FormatError("count table: duplicate row for state '" + state + "'");
    it->second.seen[k] = true;
    it->second.entries[k] = intensity;
  }

  std::vector<NamedTable> finish(CountMode mode) const {
    std::vector<NamedTable> out;
    for (const auto& name : order_) {
      const PartialTable& t = tables_.at(name);
      for (bool s : t.seen) {
        if (!s) throw FormatError("count table: state '" + name + "' lacks one of the four intensities");
      }
      const double total = t.entries[0] + t.entries[1] + t.entries[2] + t.entries[3];
      out.push_back({name, CountTable(t.entries, mode, total)});
    }
    return out;
  }

 private:
  std::map<std::string, PartialTable> tables_;
  std::vector<std::string> order_;
};

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last || first == last) {
    throw FormatError("'" + text + "' is not a number");
  }
  return value;
}

void write_count_tables_csv(std::ostream& out, const std::vector<NamedTable>& tables) {
  out << kHeader << '\n';
  for (const auto& named : tables) {
    for (std::size_t k = 0; k < 4; ++k) {
      const auto [m, b] = CountTable::kLabels[k];
      out << named.state << ',' << m << ',' << b << ',' << format_double(named.table.entries()[k]) << '\n';
    }
  }
}

std::vector<NamedTable> read_count_tables_csv(std::istream& in, CountMode mode) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("count table: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) throw FormatError("count table: unexpected header '" + line + "'");

  TableAssembler assembler;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 4) {
      throw FormatError("count table: line " + std::to_string(line_no) + " does not have four fields");
    }
    assembler.add(cells[0], parse_label(cells[1]), parse_label(cells[2]), parse_double(cells[3]));
  }
  return assembler.finish(mode);
}

std::string count_tables_to_json(const std::vector<NamedTable>& tables) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& named : tables) {
    for (std::size_t k = 0; k < 4; ++k) {
      const auto [m, b] = CountTable::kLabels[k];
      rows.push_back({{"state", named.state}, {"m", m}, {"b", b}, {"intensity", named.table.entries()[k]}});
    }
  }
  return rows.dump(2);
}

std::vector<NamedTable> count_tables_from_json(const std::string& text, CountMode mode) {
  nlohmann::json rows;
  try {
    rows = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("count table: invalid JSON: ") + e.what());
  }
  if (!rows.is_array()) throw FormatError("count table: JSON document must be an array");
  TableAssembler assembler;
  for (const auto& row : rows) {
    try {
      assembler.add(row.at("state").get<std::string>(), row.at("m").get<int>(), row.at("b").get<int>(),
                    row.at("intensity").get<double>());
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("count table: malformed row: ") + e.what());
    } catch (const PreconditionError& e) {
      throw FormatError(e.what());
    }
  }
  return assembler.finish(mode);
}

std::vector<NamedTable> named_tables(const ThreeStateRun& run) {
  std::vector<NamedTable> out;
  const auto add = [&](const char* name, const std::optional<CountTable>& table) {
    if (!table) throw ProtocolIncompleteError(std::string("three-state run lacks table ") + name);
    out.push_back({name, *table});
  };
  add("rho", run.error_set.plain);
  add("a_reflected", run.error_set.reflected);
  add("a_conditioned", run.error_set.conditioned);
  add("b_reflected", run.disturbance_set.reflected);
  add("b_conditioned", run.disturbance_set.conditioned);
  return out;
}

}  // namespace edur
