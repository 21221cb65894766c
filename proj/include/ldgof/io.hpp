#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "ldgof/numeric.hpp"
#include "ldgof/statistics.hpp"

namespace ldgof {

/// Non-empty lines of a value file with `#` comments and surrounding
/// whitespace stripped.
std::vector<std::string> read_value_lines(std::istream& in);
std::vector<std::string> read_value_file(const std::string& path);

CountsVector parse_counts(const std::vector<std::string>& lines);

/// Rational entries ("a/b") or `force_exact` keep exact values; otherwise
/// entries are parsed as doubles.
ProbabilityVector parse_probabilities(const std::vector<std::string>& lines, bool force_exact = false);

/// A JSON array of numbers, or one number per line.
std::vector<double> parse_real_vector(const std::string& text);
std::vector<Rational> parse_rational_vector(const std::string& text);

/// Comma-separated reals, e.g. "1,1.5,2".
std::vector<double> parse_real_list(const std::string& text);

}  // namespace ldgof
