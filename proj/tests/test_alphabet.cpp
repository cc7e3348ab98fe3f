#include <gtest/gtest.h>

#include <set>

#include "dfun/alphabet.hpp"
#include "dfun/error.hpp"
#include "oracle.hpp"

using namespace dfun;

TEST(Alphabet, ThreeSymbolLabelsAndResidues) {
  const auto a = Alphabet::standard(3);
  EXPECT_EQ(a.size(), 3u);
  EXPECT_EQ(a.label(0), "0");
  EXPECT_EQ(a.label(1), "1");
  EXPECT_EQ(a.label(2), "-1");
  EXPECT_EQ(*a.find("-1"), 2);
  EXPECT_FALSE(a.find("2").has_value());
  EXPECT_EQ(std::vector<Residue>(a.display_order().begin(), a.display_order().end()), (std::vector<Residue>{2, 0, 1}));
  EXPECT_EQ(a.minus_one(), 2);
}

TEST(Alphabet, CyclicAdditionMatchesIntegerLabels) {
  const auto a = Alphabet::standard(3);
  for (int x = -1; x <= 1; ++x) {
    for (int y = -1; y <= 1; ++y) {
      int s = x + y;
      if (s == 2) s = -1;
      if (s == -2) s = 1;
      EXPECT_EQ(a.add(oracle::residue_of(x, 3), oracle::residue_of(y, 3)), oracle::residue_of(s, 3));
    }
  }
  // 1 + 1 = -1 in the three-symbol alphabet
  EXPECT_EQ(a.label(a.add(1, 1)), "-1");
}

TEST(Alphabet, GeneralSizes) {
  for (std::size_t n : {2u, 4u, 5u, 32u}) {
    const auto a = Alphabet::standard(n);
    EXPECT_EQ(a.size(), n);
    EXPECT_EQ(a.label(0), "0");
    EXPECT_EQ(a.add(static_cast<Residue>(n - 1), 1), 0);
  }
  EXPECT_THROW(Alphabet::standard(33), usage_error);
  EXPECT_THROW(Alphabet::standard(1), usage_error);
  EXPECT_THROW(Alphabet::from_labels({"a", "a"}, {0, 1}), usage_error);
  EXPECT_THROW(Alphabet::from_labels({"a", "b"}, {0, 0}), usage_error);
}

TEST(Alphabet, OperatorLabelsShareResidues) {
  const auto ops = Alphabet::operators();
  EXPECT_EQ(ops.label(2), "-e");
  EXPECT_EQ(ops.label(0), "o");
  EXPECT_EQ(ops.label(1), "e");
  EXPECT_FALSE(ops == Alphabet::standard(3));
}

TEST(MultiValue, SetBasics) {
  const auto v = MultiValue::single(0).with(2);
  EXPECT_EQ(v.size(), 2u);
  EXPECT_TRUE(v.contains(2));
  EXPECT_FALSE(v.is_singleton());
  EXPECT_TRUE(MultiValue::single(1).is_singleton());
  EXPECT_TRUE(MultiValue::empty().is_empty());
  EXPECT_TRUE(MultiValue::single(0).subset_of(v));
  EXPECT_EQ(MultiValue::full(3).bits(), 7u);
}

TEST(MultiValue, SumIsMinkowskiWithEmptyAbsorbing) {
  const auto a = Alphabet::standard(3);
  for (std::uint32_t x = 0; x < 8; ++x) {
    for (std::uint32_t y = 0; y < 8; ++y) {
      std::set<int> expect;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          if (((x >> i) & 1) && ((y >> j) & 1)) expect.insert((i + j) % 3);
        }
      }
      std::uint32_t bits = 0;
      for (int r : expect) bits |= 1u << r;
      EXPECT_EQ(mv_sum(MultiValue::from_bits(x), MultiValue::from_bits(y), a).bits(), bits) << x << ' ' << y;
    }
  }
  EXPECT_TRUE(mv_sum(MultiValue::empty(), MultiValue::full(3), a).is_empty());
  // empty fold is zero
  EXPECT_EQ(mv_sum(std::span<const MultiValue>{}, a), MultiValue::single(0));
  EXPECT_THROW(mv_sum(MultiValue::single(3), MultiValue::single(0), a), usage_error);
}

TEST(MultiValue, SumOverLargerAlphabet) {
  const auto a = Alphabet::standard(5);
  const auto v = mv_sum(MultiValue::single(4).with(1), MultiValue::single(3), a);
  EXPECT_EQ(v, MultiValue::single(2).with(4));
}

TEST(MultiValue, FormatParseRoundTrip) {
  for (const auto& alpha : {Alphabet::standard(3), Alphabet::operators(), Alphabet::standard(5)}) {
    for (std::uint32_t bits = 0; bits < (1u << alpha.size()); ++bits) {
      const auto v = MultiValue::from_bits(bits);
      const auto text = format_value(v, alpha);
      EXPECT_EQ(parse_value(text, alpha), v) << text;
    }
  }
  const auto a = Alphabet::standard(3);
  EXPECT_EQ(format_value(MultiValue::empty(), a), "N");
  EXPECT_EQ(format_value(MultiValue::full(3), a), "-1*0*1");
  EXPECT_EQ(format_value(MultiValue::single(1).with(2), a), "-1*1");
  EXPECT_EQ(parse_value("1*-1", a), MultiValue::single(1).with(2));
  EXPECT_FALSE(parse_value("1*1", a).has_value());
  EXPECT_FALSE(parse_value("2", a).has_value());
  EXPECT_FALSE(parse_value("", a).has_value());
}
