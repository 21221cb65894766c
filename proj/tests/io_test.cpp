#include "ldgof/io.hpp"

#include <sstream>

#include "gtest/gtest.h"
#include "ldgof/error.hpp"

namespace ldgof {
namespace {

TEST(ReadValueLines, StripsCommentsAndBlanks) {
  std::istringstream in("# header\n3\n\n  1  # trailing\n\t\n");
  EXPECT_EQ(read_value_lines(in), (std::vector<std::string>{"3", "1"}));
  EXPECT_THROW(read_value_file("/nonexistent/path.txt"), ParseError);
}

TEST(ParseCounts, Examples) {
  const auto counts = parse_counts({"3", "1"});
  EXPECT_EQ(counts.sample_size(), 4u);
  EXPECT_THROW(parse_counts({"3", "-1"}), ParseError);
  EXPECT_THROW(parse_counts({"2.5"}), ParseError);
  EXPECT_THROW(parse_counts({"x"}), ParseError);
}

TEST(ParseProbabilities, DecimalAndRational) {
  const auto decimal = parse_probabilities({"0.5", "0.5"});
  EXPECT_FALSE(decimal.exact().has_value());
  const auto rational = parse_probabilities({"1/3", "2/3"});
  ASSERT_TRUE(rational.exact().has_value());
  EXPECT_EQ((*rational.exact())[1], Rational(2, 3));
  const auto forced = parse_probabilities({"0.25", "0.75"}, true);
  ASSERT_TRUE(forced.exact().has_value());
  EXPECT_EQ((*forced.exact())[0], Rational(1, 4));
  EXPECT_THROW(parse_probabilities({"0.5", "0.6"}), RangeError);
  EXPECT_THROW(parse_probabilities({"1/0"}), ParseError);
}

TEST(ParseVectors, JsonAndLines) {
  EXPECT_EQ(parse_real_vector("[0, 2, 2.5]"), (std::vector<double>{0, 2, 2.5}));
  EXPECT_EQ(parse_real_vector("0\n2\n# c\n2.5\n"), (std::vector<double>{0, 2, 2.5}));
  EXPECT_THROW(parse_real_vector("[1, \"a\"]"), ParseError);
  EXPECT_THROW(parse_real_vector("[1, 2"), ParseError);
  const auto q = parse_rational_vector("1/2\n3\n");
  EXPECT_EQ(q, (std::vector<Rational>{Rational(1, 2), Rational(3)}));
}

TEST(ParseRealList, CommaSeparated) {
  EXPECT_EQ(parse_real_list("1,1.5,2"), (std::vector<double>{1, 1.5, 2}));
  EXPECT_EQ(parse_real_list(" 0 , 3 "), (std::vector<double>{0, 3}));
  EXPECT_THROW(parse_real_list(""), ParseError);
  EXPECT_THROW(parse_real_list("1,,2"), ParseError);
  EXPECT_THROW(parse_real_list("1,a"), ParseError);
}

TEST(ParseRational, Forms) {
  EXPECT_EQ(parse_rational("3/4"), Rational(3, 4));
  EXPECT_EQ(parse_rational("-0.125"), Rational(-1, 8));
  EXPECT_EQ(parse_rational("2.5e-1"), Rational(1, 4));
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_THROW(parse_rational("abc"), ParseError);
  EXPECT_THROW(parse_rational(""), ParseError);
}

}  // namespace
}  // namespace ldgof
