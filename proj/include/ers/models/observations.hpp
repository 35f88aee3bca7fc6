#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace ers {

class ObservationParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Observation CSV: one header line, then `index,value` rows. Values are
/// decimal floating point. Errors name the offending line.
std::vector<double> read_observations(std::istream& in, const std::string& source = "<stream>");
std::vector<double> read_observations(const std::filesystem::path& path);

void write_observations(std::ostream& out, const std::vector<double>& values);

}  // namespace ers
