#include <gtest/gtest.h>

#include "dfun/decomposition.hpp"
#include "dfun/error.hpp"
#include "dfun/formula.hpp"
#include "dfun/random.hpp"
#include "oracle.hpp"

using namespace dfun;

TEST(Formula, BuildsAndPrintsExpressions) {
  const auto a = Alphabet::standard(3);
  const auto x_plus_y = FormulaExpression::sum({FormulaExpression::apply(identity_function(a), FormulaExpression::var(1)),
                                                FormulaExpression::apply(identity_function(a), FormulaExpression::var(2))});
  // a top-level sum prints bare
  EXPECT_EQ(print_expression(x_plus_y), "(-1,0,1)@1 + (-1,0,1)@2");
  const Formula f{a, 2, x_plus_y};
  EXPECT_EQ(tabulate_formula(f), oracle::table("1 -1 0 / -1 0 1 / 0 1 -1"));
  EXPECT_EQ(count_terms(f), 2u);
  const auto nested = FormulaExpression::sum({FormulaExpression::apply(level_indicator(a), x_plus_y),
                                              FormulaExpression::var(3)});
  EXPECT_EQ(print_expression(nested), "(0,0,1)[(-1,0,1)@1 + (-1,0,1)@2] + @3");
  EXPECT_EQ(print_expression(FormulaExpression::apply(level_indicator(a), nested)),
            "(0,0,1){(0,0,1)[(-1,0,1)@1 + (-1,0,1)@2] + @3}");
}

TEST(Formula, ParsesOperatorLevelTerm) {
  const auto text = "formula N=3 M=3\n(o,o,-e){(o,o,e)[(e,o,o)@1+(o,-e,-e)@2]+(o,-e,-e)@3}\n";
  const auto f = parse_formula(text);
  EXPECT_EQ(f.alphabet, Alphabet::operators());
  EXPECT_EQ(print_formula(f), "formula N=3 M=3\n(o,o,-e){(o,o,e)[(e,o,o)@1 + (o,-e,-e)@2] + (o,-e,-e)@3}\n");
  EXPECT_EQ(count_terms(f), 1u);
}

TEST(Formula, ParsesMultiValuedLiterals) {
  const auto f = parse_formula("formula N=3 M=1\n(-1*0,N,-1*0*1)@1\n+ (0,0,1)@1\n");
  EXPECT_EQ(count_terms(f), 2u);
  const auto t = tabulate_formula(f);
  // -1 -> {-1,0}+0, 0 -> N, 1 -> {-1,0,1}+1
  EXPECT_EQ(t, oracle::unary({"-1*0", "N", "-1*0*1"}));
}

TEST(Formula, EmptySumIsZero) {
  const Formula f{Alphabet::standard(3), 2, FormulaExpression::sum({})};
  EXPECT_EQ(print_formula(f), "formula N=3 M=2\n0\n");
  const auto back = parse_formula(print_formula(f));
  EXPECT_EQ(count_terms(back), 0u);
  EXPECT_EQ(tabulate_formula(back), zero_function(Alphabet::standard(3), 2));
}

TEST(Formula, RoundTripsDecompositions) {
  Sampler rng(31);
  for (const auto& [alpha, m] : {std::pair{Alphabet::standard(3), 2u}, {Alphabet::standard(3), 3u},
                                 {Alphabet::operators(), 2u}, {Alphabet::standard(4), 3u}}) {
    for (int i = 0; i < 100; ++i) {
      const auto f = rng.function(alpha, m, CellKind::multi);
      const auto formula = render(trivial_decompose(f));
      const auto back = parse_formula(print_formula(formula));
      EXPECT_EQ(back.expr, formula.expr);
      EXPECT_EQ(back.arity, formula.arity);
      EXPECT_EQ(back.alphabet, alpha);
      EXPECT_EQ(print_formula(back), print_formula(formula));
    }
  }
}

TEST(Formula, EvaluationMatchesTreeWalk) {
  Sampler rng(32);
  const auto a = Alphabet::standard(3);
  for (int i = 0; i < 200; ++i) {
    const auto f = rng.function(a, 2, CellKind::multi);
    // rebuild with random unaries so the formula is not a plain decomposition
    std::vector<FormulaExpression> parts;
    for (int k = 0; k < 3; ++k) {
      const auto inner = FormulaExpression::sum(
          {FormulaExpression::apply(rng.function(a, 1, CellKind::multi), FormulaExpression::var(1)),
           FormulaExpression::apply(rng.function(a, 1, CellKind::multi), FormulaExpression::var(2))});
      parts.push_back(FormulaExpression::apply(rng.function(a, 1, CellKind::multi), inner));
    }
    const Formula formula{a, 2, FormulaExpression::sum(std::move(parts))};
    EXPECT_TRUE(oracle::formula_matches(formula, tabulate_formula(formula)));
  }
}

TEST(Formula, SetArgumentsEvaluateAsUnion) {
  const auto a = Alphabet::standard(3);
  const Formula f{a, 1, FormulaExpression::apply(oracle::unary({"1", "0", "0"}), FormulaExpression::var(1))};
  const std::vector<MultiValue> args{MultiValue::single(2).with(0)};
  EXPECT_EQ(eval_formula(f, args), MultiValue::single(1).with(0));
  EXPECT_THROW(eval_formula(f, std::vector<MultiValue>{}), usage_error);
}

TEST(Formula, ParseErrors) {
  EXPECT_THROW(parse_formula(""), parse_error);
  EXPECT_THROW(parse_formula("formula N=3\n(0,0,1)@1\n"), parse_error);
  EXPECT_THROW(parse_formula("formula N=3 M=1\n"), parse_error);
  EXPECT_THROW(parse_formula("formula N=3 M=1\n(0,0,1)@2\n"), parse_error);
  EXPECT_THROW(parse_formula("formula N=3 M=1\n(0,0,1)@1\n(0,0,1)@1\n"), parse_error);
  EXPECT_THROW(parse_formula("formula N=3 M=2\n(0,0,1)[(0,0,1)@1 + (0,0,1)@2\n"), parse_error);
  EXPECT_THROW(parse_formula("formula N=3 M=1\n(0,0)@1\n"), parse_error);
  try {
    parse_formula("formula N=3 M=2\n(0,0,1)[(0,0,1)@1 + (0,0,1)@2]\n+ (0,0,1)[(0,0,1)@1 + (0,7,1)@2]\n");
    FAIL() << "expected a parse error";
  } catch (const parse_error& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Formula, ValiditySeesVariablesAndAlphabet) {
  const auto a = Alphabet::standard(3);
  EXPECT_TRUE(is_valid_superposition(Formula{a, 2, FormulaExpression::var(2)}));
  EXPECT_FALSE(is_valid_superposition(Formula{a, 2, FormulaExpression::var(3)}));
  EXPECT_FALSE(is_valid_superposition(
      Formula{a, 1, FormulaExpression::apply(identity_function(Alphabet::standard(4)), FormulaExpression::var(1))}));
}
