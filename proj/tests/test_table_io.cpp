#include <gtest/gtest.h>

#include <string>

#include "dfun/error.hpp"
#include "dfun/random.hpp"
#include "dfun/table_io.hpp"
#include "oracle.hpp"

using namespace dfun;

TEST(TableIo, PrintsBinaryTable) {
  const auto f = oracle::table("-1 0 1 / -1*0 -1*1 0*1 / N -1*0*1 N").named("mixed");
  EXPECT_EQ(print_table(f),
            "dfun N=3 M=2 name=mixed\n"
            "-1: -1 0 1\n"
            "0: -1*0 -1*1 0*1\n"
            "1: N -1*0*1 N\n");
}

TEST(TableIo, PrintsBlocksOverThirdVariable) {
  const auto f = oracle::table3("-1 0 1 / 0 1 -1 / 1 -1 0 | 1 -1 0 / 1 -1 0 / 1 -1 0 | 0 1 -1 / 0 1 -1 / 0 1 -1");
  const auto text = print_table(f);
  EXPECT_EQ(text.substr(0, text.find('\n', text.find('\n') + 1) + 1), "dfun N=3 M=3\n# var3 = -1\n");
  EXPECT_NE(text.find("# var3 = 0\n-1: 1 -1 0\n"), std::string::npos);
  EXPECT_EQ(parse_table(text), f);

  std::string long_form = text;
  for (auto p = long_form.find("# var3 ="); p != std::string::npos; p = long_form.find("# var3 =", p)) {
    long_form.replace(p, 8, "# var3..var3 =");
  }
  EXPECT_EQ(parse_table(long_form), f);
  EXPECT_THROW(parse_table("dfun N=3 M=3\n# var4 = -1\n-1: 0 0 0\n0: 0 0 0\n1: 0 0 0\n"), parse_error);
}

TEST(TableIo, ParsesCommentsAndBlankLines) {
  const auto f = parse_table("# identity shifted\n\ndfun N=3 M=1\n-1: 0\n\n0: 1\n1: -1\n");
  EXPECT_EQ(f, oracle::unary({"0", "1", "-1"}));
  EXPECT_EQ(f.arity(), 1u);
}

TEST(TableIo, RoundTripsRandomTables) {
  Sampler rng(5);
  std::size_t checked = 0;
  for (std::size_t n : {3u, 2u, 4u, 5u}) {
    for (std::size_t m : {1u, 2u, 3u, 4u}) {
      for (const auto kind : {CellKind::single, CellKind::partial, CellKind::multi}) {
        for (int i = 0; i < 21; ++i, ++checked) {
          const auto f = rng.function(Alphabet::standard(n), m, kind).named("t" + std::to_string(i));
          const auto back = parse_table(print_table(f));
          EXPECT_EQ(back, f);
          EXPECT_EQ(back.name(), f.name());
        }
      }
    }
  }
  EXPECT_GE(checked, 1000u);
}

TEST(TableIo, OperatorLabelsAreDetected) {
  const auto f = parse_table("dfun N=3 M=2\n-e: -e e o\no: o -e e\ne: e o -e\n");
  EXPECT_EQ(f.alphabet(), Alphabet::operators());
  EXPECT_EQ(print_table(f), "dfun N=3 M=2\n-e: -e e o\no: o -e e\ne: e o -e\n");
  EXPECT_THROW(parse_table("dfun N=3 M=1\n-e: o\no: o\ne: o\n", Alphabet::standard(3)), parse_error);
}

TEST(TableIo, ErrorsCarryLineAndColumn) {
  try {
    parse_table("dfun N=3 M=2\n-1: 0 0 0\n0: 0 7 0\n1: 0 0 0\n");
    FAIL() << "expected a parse error";
  } catch (const parse_error& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.column(), 6u);
    EXPECT_NE(std::string(e.what()).find("bad cell '7'"), std::string::npos);
  }
  EXPECT_THROW(parse_table(""), parse_error);
  EXPECT_THROW(parse_table("table N=3 M=2\n"), parse_error);
  EXPECT_THROW(parse_table("dfun N=3\n"), parse_error);
  EXPECT_THROW(parse_table("dfun N=3 M=2 bogus\n"), parse_error);
  EXPECT_THROW(parse_table("dfun N=3 M=2\n-1: 0 0 0\n0: 0 0\n1: 0 0 0\n"), parse_error);
  EXPECT_THROW(parse_table("dfun N=3 M=2\n0: 0 0 0\n-1: 0 0 0\n1: 0 0 0\n"), parse_error);
  EXPECT_THROW(parse_table("dfun N=3 M=2\n-1: 0 0 0\n0: 0 0 0\n1: 0 0 0\nextra\n"), parse_error);
  EXPECT_THROW(parse_table("dfun N=3 M=3\n-1: 0 0 0\n"), parse_error);
  EXPECT_THROW(parse_table("dfun N=40 M=2\n"), parse_error);
}

TEST(TableIo, RejectsUnprintableNames) {
  const auto f = zero_function(Alphabet::standard(3), 2).named("has space");
  EXPECT_THROW(print_table(f), usage_error);
}

TEST(TableIo, ShowLaysOutBlocksSideBySide) {
  const auto f = oracle::table("1 1 1 / 0 0 0 / -1 -1 -1").named("const_rows");
  const auto shown = show_table(f);
  EXPECT_EQ(shown.substr(0, shown.find('\n')), "const_rows");
  EXPECT_NE(shown.find("-1 |  1 |  1 |  1"), std::string::npos) << shown;
  const auto ternary = show_table(zero_function(Alphabet::standard(3), 3));
  EXPECT_NE(ternary.find("x3..=-1"), std::string::npos) << ternary;
  EXPECT_NE(ternary.find("x3..=1"), std::string::npos);
}
