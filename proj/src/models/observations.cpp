#include "ers/models/observations.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace ers {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<double> read_observations(std::istream& in, const std::string& source) {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ObservationParseError(source + ": missing header line");
  ++line_no;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string row = trim(line);
    if (row.empty()) continue;
    const auto comma = row.find(',');
    if (comma == std::string::npos) {
      throw ObservationParseError(source + ":" + std::to_string(line_no) + ": expected `index,value`");
    }
    const std::string field = trim(row.substr(comma + 1));
    double value = 0.0;
    const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || end != field.data() + field.size() || !std::isfinite(value)) {
      throw ObservationParseError(source + ":" + std::to_string(line_no) + ": value `" + field +
                                  "` is not a finite decimal number");
    }
    values.push_back(value);
  }
  return values;
}

std::vector<double> read_observations(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ObservationParseError("cannot open observation file " + path.string());
  return read_observations(in, path.string());
}

void write_observations(std::ostream& out, const std::vector<double>& values) {
  out << "index,value\n";
  std::ostringstream row;
  row << std::setprecision(17);
  for (std::size_t t = 0; t < values.size(); ++t) {
    row.str({});
    row << t + 1 << ',' << values[t] << '\n';
    out << row.str();
  }
}

}  // namespace ers
