#include <gtest/gtest.h>

#include <map>

#include "dfun/laws.hpp"
#include "oracle.hpp"

using namespace dfun;

namespace {

std::vector<int> roles_of(const std::string& text) {
  std::vector<int> out;
  for (char c : text) {
    if (c >= '0' && c <= '9') out.push_back(c - '0');
  }
  return out;
}

const char* const headers[6] = {"C(1,2,0)", "C(1,0,2)", "C(0,2,1)", "C(2,1,0)", "C(2,0,1)", "C(0,1,2)"};

std::map<std::string, std::size_t> count_by_id(const LawReport& r) {
  std::map<std::string, std::size_t> out;
  for (const auto& o : r.outcomes) ++out[o.id];
  return out;
}

}  // namespace

TEST(Laws, CommutationTableHoldsOnRelations) {
  // every entry re-derived with the relational oracle on the worked table and random ones
  Sampler rng(51);
  std::vector<DiscreteFunction> samples{oracle::table("-1 1 0 / 0 -1 1 / 1 0 -1")};
  for (int i = 0; i < 20; ++i) samples.push_back(rng.function(Alphabet::standard(3), 2, CellKind::multi));
  const auto& table = detail::commutation_table();
  for (std::size_t r = 0; r < 6; ++r) {
    for (std::size_t c = 0; c < 6; ++c) {
      for (const auto& f : samples) {
        const auto two_steps = oracle::commute(oracle::commute(f, roles_of(headers[r])), roles_of(headers[c]));
        EXPECT_EQ(two_steps, oracle::commute(f, roles_of(table[r][c]))) << headers[r] << " then " << headers[c];
      }
    }
  }
}

TEST(Laws, TensionCommutationTableHoldsOnRelations) {
  Sampler rng(52);
  const auto a = Alphabet::standard(3);
  const auto& slots = detail::tension_commutation_table();
  auto tension = [](const DiscreteFunction& f, int slot, const DiscreteFunction& b) {
    return slot == 0 ? oracle::tension_result(f, b) : oracle::tension_arg(f, static_cast<std::size_t>(slot), b);
  };
  const int row_slot[3] = {1, 2, 0};
  for (int i = 0; i < 20; ++i) {
    const auto f = rng.function(a, 2, CellKind::multi);
    const auto b = rng.function(a, 1, CellKind::multi);
    for (std::size_t r = 0; r < 3; ++r) {
      for (std::size_t c = 0; c < 6; ++c) {
        const auto roles = roles_of(headers[c]);
        EXPECT_EQ(oracle::commute(tension(f, row_slot[r], b), roles),
                  tension(oracle::commute(f, roles), slots[r][c], b))
            << "T" << row_slot[r] << " then " << headers[c];
      }
    }
  }
}

TEST(Laws, AllFamiliesPassAtReducedSize) {
  LawOptions opt;
  opt.samples = 40;
  opt.pair_binaries = 2;
  const auto report = run_laws(all_law_families(), opt);
  EXPECT_TRUE(report.all_passed()) << report.text();
  const auto counts = count_by_id(report);
  EXPECT_EQ(counts.at("commute-commute"), 36u);
  EXPECT_EQ(counts.at("tension-commute"), 18u);
  EXPECT_EQ(counts.at("tension-tension"), 9u);
  EXPECT_EQ(counts.at("commute-group"), 4u);
  for (const char* id : {"transpose-superpose", "tension-superpose", "superpose-superpose", "decompose-transpose",
                         "decompose-tension-arg", "decompose-tension-result", "decompose-superpose"}) {
    EXPECT_GE(counts.count(id), 1u) << id;
  }
  for (const auto& o : report.outcomes) {
    EXPECT_GT(o.cases, 0u) << o.id << ' ' << o.entry;
    EXPECT_TRUE(o.counterexample.empty());
  }
}

TEST(Laws, TensionTensionCoversEveryUnaryPair) {
  LawOptions opt;
  opt.pair_binaries = 1;
  const auto outcomes = check_tension_tension(opt);
  ASSERT_EQ(outcomes.size(), 9u);
  for (const auto& o : outcomes) {
    EXPECT_TRUE(o.passed) << o.entry;
    EXPECT_EQ(o.cases, 512u * 512u);
  }
}

TEST(Laws, ReportIsDeterministic) {
  LawOptions opt;
  opt.samples = 10;
  opt.pair_binaries = 1;
  opt.seed = 99;
  const auto a = run_laws({LawFamily::distribution, LawFamily::commutation_group}, opt).text();
  const auto b = run_laws({LawFamily::commutation_group, LawFamily::distribution}, opt).text();
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("LAW commute-commute C(1,0,2);C(0,2,1)=C(2,0,1) PASS n=10 seed=99\n"), std::string::npos) << a;
}

TEST(Laws, EntryCheckKeepsFirstCounterexample) {
  const auto a = Alphabet::standard(3);
  const auto id = identity_function(a);
  detail::EntryCheck check("demo", "entry", 1);
  EXPECT_TRUE(check.equal(zero_function(a), zero_function(a)));
  EXPECT_FALSE(check.equal(zero_function(a), identity_function(a), {id}, "first"));
  EXPECT_FALSE(check.equal(identity_function(a), zero_function(a), {}, "second"));
  EXPECT_FALSE(check.passing());
  const auto out = std::move(check).finish();
  EXPECT_FALSE(out.passed);
  EXPECT_EQ(out.cases, 3u);
  EXPECT_EQ(out.note, "first");
  ASSERT_EQ(out.counterexample.size(), 3u);
  EXPECT_EQ(out.counterexample[1].name(), "lhs");
}

TEST(Laws, MultiValuedPrecompositionBreaksDistribution) {
  // Tension on an argument distributes over sums only for functional unaries:
  // with beta(-1) = {-1, 0}, f = g = x1 gives {1, 0} on the left and
  // {-1, 0} + {-1, 0} = {-1, 0, 1} on the right.
  const auto a = Alphabet::standard(3);
  const auto x1 = add_false_variable(identity_function(a), 2);
  const auto beta = oracle::unary({"-1*0", "0", "1"});
  const auto lhs = tension_arg(superpose({x1, x1}), 1, beta);
  const auto rhs = superpose({tension_arg(x1, 1, beta), tension_arg(x1, 1, beta)});
  EXPECT_EQ(lhs, oracle::tension_arg(oracle::superpose({x1, x1}), 1, beta));
  EXPECT_EQ(format_value(lhs({2, 0}), a), "0*1");
  EXPECT_EQ(format_value(rhs({2, 0}), a), "-1*0*1");
  EXPECT_FALSE(lhs == rhs);

  // the same beta breaks pushing tension through a rendered decomposition
  const auto f = oracle::table("1 -1 0 / 0 1 -1 / -1 0 1");
  const auto precomposed = detail::precompose_slot(render(trivial_decompose(f), Pruning::unpruned).expr, 1, beta);
  EXPECT_FALSE(tabulate_formula(Formula{a, 2, precomposed}) == tension_arg(f, 1, beta));

  // and every functional beta keeps both laws
  for (const auto& b : all_unary(a, CellKind::partial)) {
    EXPECT_EQ(tension_arg(superpose({x1, f}), 1, b), superpose({tension_arg(x1, 1, b), tension_arg(f, 1, b)}));
    const auto e = detail::precompose_slot(render(trivial_decompose(f), Pruning::unpruned).expr, 1, b);
    EXPECT_EQ(tabulate_formula(Formula{a, 2, e}), tension_arg(f, 1, b)) << format_unary(b);
  }
}
