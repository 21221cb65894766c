#include "ldgof/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ldgof/error.hpp"

namespace ldgof {

namespace {

std::string trimmed(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& token) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  if (!token.empty() && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) throw ParseError("not a number: '" + token + "'");
  return value;
}

std::uint64_t parse_count(const std::string& token) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError("not a non-negative integer count: '" + token + "'");
  }
  return value;
}

}  // namespace

std::vector<std::string> read_value_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trimmed(std::move(line));
    if (!line.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

std::vector<std::string> read_value_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return read_value_lines(in);
}

CountsVector parse_counts(const std::vector<std::string>& lines) {
  std::vector<std::uint64_t> counts;
  counts.reserve(lines.size());
  for (const auto& l : lines) counts.push_back(parse_count(l));
  return CountsVector(std::move(counts));
}

ProbabilityVector parse_probabilities(const std::vector<std::string>& lines, bool force_exact) {
  bool exact = force_exact;
  for (const auto& l : lines) exact = exact || l.find('/') != std::string::npos;
  if (exact) {
    std::vector<Rational> values;
    values.reserve(lines.size());
    for (const auto& l : lines) values.push_back(parse_rational(l));
    return ProbabilityVector::from_rationals(std::move(values));
  }
  std::vector<double> values;
  values.reserve(lines.size());
  for (const auto& l : lines) values.push_back(parse_double(l));
  return ProbabilityVector::from_doubles(std::move(values));
}

namespace {

std::vector<std::string> vector_tokens(const std::string& text) {
  const std::string body = trimmed(text);
  if (!body.empty() && body.front() == '[') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("malformed JSON array: ") + e.what());
    }
    std::vector<std::string> out;
    for (const auto& v : j) {
      if (v.is_string()) {
        out.push_back(v.get<std::string>());
      } else if (v.is_number()) {
        out.push_back(v.dump());
      } else {
        throw ParseError("JSON array entries must be numbers");
      }
    }
    return out;
  }
  std::istringstream in(body);
  return read_value_lines(in);
}

}  // namespace

std::vector<double> parse_real_vector(const std::string& text) {
  std::vector<double> out;
  for (const auto& t : vector_tokens(text)) {
    out.push_back(t.find('/') != std::string::npos ? to_double(parse_rational(t)) : parse_double(t));
  }
  return out;
}

std::vector<Rational> parse_rational_vector(const std::string& text) {
  std::vector<Rational> out;
  for (const auto& t : vector_tokens(text)) out.push_back(parse_rational(t));
  return out;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trimmed(item);
    if (item.empty()) throw ParseError("empty entry in list '" + text + "'");
    out.push_back(parse_double(item));
  }
  if (out.empty()) throw ParseError("empty list");
  return out;
}

}  // namespace ldgof
