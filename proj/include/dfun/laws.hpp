#pragma once

// Executable composition laws for the special operators on binary functions.
// Every entry is decided by comparing tables built two ways; the expected
// shapes are the published composition tables, hard-coded below.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iterator>
#include <optional>
#include <string_view>
#include <future>
#include <string>
#include <utility>
#include <vector>

#include "dfun/alphabet.hpp"
#include "dfun/decomposition.hpp"
#include "dfun/formula.hpp"
#include "dfun/function.hpp"
#include "dfun/ops.hpp"
#include "dfun/random.hpp"
#include "dfun/table_io.hpp"

namespace dfun {

struct LawOutcome {
  std::string id;
  std::string entry;
  bool passed = true;
  std::size_t cases = 0;
  std::uint64_t seed = 0;
  std::string note;
  /// First counterexample: inputs, then the two sides that differ.
  std::vector<DiscreteFunction> counterexample;
};

struct LawOptions {
  std::size_t samples = 500;      // functions per entry
  std::size_t pair_binaries = 20;  // binaries per entry for the exhaustive unary-pair table
  std::uint64_t seed = 7;
};

enum class LawFamily { commutation_group, tension_commutation, tension_tension, distribution };

struct LawReport {
  std::vector<LawOutcome> outcomes;

  bool all_passed() const {
    return std::all_of(outcomes.begin(), outcomes.end(), [](const LawOutcome& o) { return o.passed; });
  }

  /// One line per entry: `LAW <id> <entry> PASS|FAIL n=<cases> seed=<seed>`.
  std::string text() const {
    std::string out;
    for (const auto& o : outcomes) {
      out += "LAW " + o.id + ' ' + o.entry + (o.passed ? " PASS" : " FAIL") + " n=" + std::to_string(o.cases) +
             " seed=" + std::to_string(o.seed) + '\n';
    }
    return out;
  }
};

namespace detail {

class EntryCheck {
 public:
  EntryCheck(std::string id, std::string entry, std::uint64_t seed) {
    out_.id = std::move(id);
    out_.entry = std::move(entry);
    out_.seed = seed;
  }

  /// Records one case. `inputs` are only copied on the first failure.
  bool equal(const DiscreteFunction& lhs, const DiscreteFunction& rhs,
             std::initializer_list<std::reference_wrapper<const DiscreteFunction>> inputs = {},
             std::string_view note = {}) {
    ++out_.cases;
    if (lhs == rhs) return true;
    fail(note);
    if (out_.counterexample.empty()) {
      std::size_t k = 0;
      for (const auto& in : inputs) out_.counterexample.push_back(in.get().named("input" + std::to_string(++k)));
      out_.counterexample.push_back(lhs.named("lhs"));
      out_.counterexample.push_back(rhs.named("rhs"));
    }
    return false;
  }

  bool holds(bool ok, std::string_view note) {
    ++out_.cases;
    if (!ok) fail(note);
    return ok;
  }

  bool passing() const noexcept { return out_.passed; }

  LawOutcome finish() && { return std::move(out_); }

 private:
  void fail(std::string_view note) {
    if (out_.passed && !note.empty()) out_.note = std::string(note);
    out_.passed = false;
  }

  LawOutcome out_;
};

inline std::uint64_t entry_seed(std::uint64_t seed, std::size_t family, std::size_t entry) {
  return seed * 0x9E3779B97F4A7C15ull + family * 1000 + entry;
}

inline const std::array<const char*, 6>& commutation_headers() {
  static const std::array<const char*, 6> h = {"C(1,2,0)", "C(1,0,2)", "C(0,2,1)", "C(2,1,0)", "C(2,0,1)", "C(0,1,2)"};
  return h;
}

/// Row applied first, then column.
inline const std::array<std::array<const char*, 6>, 6>& commutation_table() {
  static const std::array<std::array<const char*, 6>, 6> t = {{
      {"C(1,2,0)", "C(1,0,2)", "C(0,2,1)", "C(2,1,0)", "C(2,0,1)", "C(0,1,2)"},
      {"C(1,0,2)", "C(1,2,0)", "C(2,0,1)", "C(0,1,2)", "C(0,2,1)", "C(2,1,0)"},
      {"C(0,2,1)", "C(0,1,2)", "C(1,2,0)", "C(2,0,1)", "C(2,1,0)", "C(1,0,2)"},
      {"C(2,1,0)", "C(2,0,1)", "C(0,1,2)", "C(1,2,0)", "C(1,0,2)", "C(0,2,1)"},
      {"C(2,0,1)", "C(2,1,0)", "C(1,0,2)", "C(0,2,1)", "C(0,1,2)", "C(1,2,0)"},
      {"C(0,1,2)", "C(0,2,1)", "C(2,1,0)", "C(1,0,2)", "C(1,2,0)", "C(2,0,1)"},
  }};
  return t;
}

/// Tension slot after commuting: row T1/T2/T0, column as in `commutation_headers`.
inline const std::array<std::array<int, 6>, 3>& tension_commutation_table() {
  static const std::array<std::array<int, 6>, 3> t = {{
      {1, 1, 0, 2, 0, 2},
      {2, 0, 2, 1, 1, 0},
      {0, 2, 1, 0, 2, 1},
  }};
  return t;
}

inline DiscreteFunction tension(const DiscreteFunction& f, int slot, const DiscreteFunction& b) {
  return slot == 0 ? tension_result(f, b) : tension_arg(f, static_cast<std::size_t>(slot), b);
}

inline std::string slot_name(int slot) { return "T" + std::to_string(slot); }

inline std::size_t header_index(const RolePermutation& p) {
  const auto& h = commutation_headers();
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (RolePermutation::parse(h[i]) == p) return i;
  }
  throw usage_error("not a binary commutation: " + p.to_string());
}

/// Target point of a row selector (where it is 1) or column selector (where it is 0).
inline Residue selector_target(const DiscreteFunction& u) {
  const auto& alpha = u.alphabet();
  std::optional<Residue> one, zero;
  std::size_t zeros = 0;
  for (Residue x = 0; x < alpha.size(); ++x) {
    if (u.cells()[x] == MultiValue::single(alpha.one())) one = x;
    if (u.cells()[x] == MultiValue::single(alpha.zero())) {
      zero = x;
      ++zeros;
    }
  }
  if (zeros == 1 && !one) return *zero;  // column selector
  if (one) return *one;                  // row selector
  throw usage_error("not a selector: " + format_unary(u));
}

/// Replaces every leaf `u @slot` by `(u after b) @slot`.
inline FormulaExpression precompose_slot(const FormulaExpression& e, std::size_t slot, const DiscreteFunction& b) {
  switch (e.kind()) {
    case FormulaExpression::Kind::var:
      return e;
    case FormulaExpression::Kind::apply:
      if (e.inner().is_var() && e.inner().variable() == slot) {
        return FormulaExpression::apply(compose_unary(e.function(), b), e.inner());
      }
      return FormulaExpression::apply(e.function(), precompose_slot(e.inner(), slot, b));
    case FormulaExpression::Kind::sum: {
      std::vector<FormulaExpression> parts;
      for (const auto& p : e.parts()) parts.push_back(precompose_slot(p, slot, b));
      return FormulaExpression::sum(std::move(parts));
    }
  }
  return e;
}

}  // namespace detail

inline std::vector<LawOutcome> check_commutation_group(const LawOptions& opt) {
  const auto alpha = Alphabet::standard(3);
  const auto& headers = detail::commutation_headers();
  const auto& table = detail::commutation_table();
  std::vector<LawOutcome> out;
  bool all_entries = true;
  for (std::size_t r = 0; r < 6; ++r) {
    for (std::size_t c = 0; c < 6; ++c) {
      const auto row = RolePermutation::parse(headers[r]);
      const auto col = RolePermutation::parse(headers[c]);
      const auto expected = RolePermutation::parse(table[r][c]);
      const auto seed = detail::entry_seed(opt.seed, 1, r * 6 + c);
      detail::EntryCheck check("commute-commute", std::string(headers[r]) + ";" + headers[c] + "=" + table[r][c],
                               opt.seed);
      Sampler rng(seed);
      for (std::size_t i = 0; i < opt.samples; ++i) {
        const auto f = rng.function(alpha, 2, CellKind::multi);
        check.equal(commute(commute(f, row), col), commute(f, expected), {f});
      }
      auto o = std::move(check).finish();
      all_entries = all_entries && o.passed;
      out.push_back(std::move(o));
    }
  }

  // Group structure, read off the table that was just verified.
  auto product = [&](std::size_t a, std::size_t b) {
    return detail::header_index(RolePermutation::parse(table[a][b]));
  };
  const std::size_t identity = detail::header_index(RolePermutation::identity(2));
  auto group_entry = [&](std::string name, auto&& predicate) {
    detail::EntryCheck check("commute-group", std::move(name), opt.seed);
    check.holds(all_entries, "table entries not verified");
    predicate(check);
    out.push_back(std::move(check).finish());
  };
  group_entry("identity", [&](detail::EntryCheck& check) {
    for (std::size_t a = 0; a < 6; ++a) {
      check.holds(product(identity, a) == a && product(a, identity) == a, "identity row or column differs");
    }
  });
  group_entry("inverses", [&](detail::EntryCheck& check) {
    for (std::size_t a = 0; a < 6; ++a) {
      bool found = false;
      for (std::size_t b = 0; b < 6; ++b) found = found || (product(a, b) == identity && product(b, a) == identity);
      check.holds(found, std::string("no inverse for ") + headers[a]);
    }
  });
  group_entry("associativity", [&](detail::EntryCheck& check) {
    for (std::size_t a = 0; a < 6; ++a)
      for (std::size_t b = 0; b < 6; ++b)
        for (std::size_t c = 0; c < 6; ++c)
          check.holds(product(product(a, b), c) == product(a, product(b, c)), "not associative");
  });
  group_entry("non-abelian-order-6", [&](detail::EntryCheck& check) {
    bool noncommuting = false;
    for (std::size_t a = 0; a < 6; ++a)
      for (std::size_t b = 0; b < 6; ++b) noncommuting = noncommuting || product(a, b) != product(b, a);
    check.holds(noncommuting, "table is abelian, so it cannot be S3");
  });
  return out;
}

inline std::vector<LawOutcome> check_tension_commutation(const LawOptions& opt) {
  const auto alpha = Alphabet::standard(3);
  const auto betas = all_unary(alpha, CellKind::multi);
  const auto& headers = detail::commutation_headers();
  const auto& table = detail::tension_commutation_table();
  std::vector<LawOutcome> out;
  for (int row = 0; row < 3; ++row) {
    const int slot = row == 2 ? 0 : row + 1;
    for (std::size_t c = 0; c < 6; ++c) {
      const auto perm = RolePermutation::parse(headers[c]);
      const int moved = table[row][c];
      detail::EntryCheck check("tension-commute",
                               detail::slot_name(slot) + "b;" + headers[c] + "=" + headers[c] + ";" +
                                   detail::slot_name(moved) + "b",
                               opt.seed);
      Sampler rng(detail::entry_seed(opt.seed, 2, static_cast<std::size_t>(row) * 6 + c));
      for (std::size_t i = 0; i < opt.samples && check.passing(); ++i) {
        const auto f = rng.function(alpha, 2, CellKind::multi);
        const auto commuted = commute(f, perm);
        for (const auto& b : betas) {
          if (!check.equal(commute(detail::tension(f, slot, b), perm), detail::tension(commuted, moved, b), {f, b})) break;
        }
      }
      out.push_back(std::move(check).finish());
    }
  }
  return out;
}

inline std::vector<LawOutcome> check_tension_tension(const LawOptions& opt) {
  const auto alpha = Alphabet::standard(3);
  const auto betas = all_unary(alpha, CellKind::multi);
  const std::size_t count = betas.size();

  // Index of every unary so compositions can be looked up instead of rebuilt.
  auto code_of = [](const DiscreteFunction& u) {
    std::size_t code = 0;
    for (std::size_t x = u.size(); x-- > 0;) code = code * 8 + u.cells()[x].bits();
    return code;
  };
  std::vector<std::uint16_t> composed(count * count);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < count; ++j) {
      composed[i * count + j] = static_cast<std::uint16_t>(code_of(compose_unary(betas[i], betas[j])));
    }
  }

  std::vector<LawOutcome> out;
  const int slots[3] = {1, 2, 0};
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      const int first = slots[r];
      const int second = slots[c];
      const std::string lhs_name = detail::slot_name(first) + "b1;" + detail::slot_name(second) + "b2";
      const std::string rhs_name = first == second ? detail::slot_name(first) + "(b1b2)"
                                                   : detail::slot_name(second) + "b2;" + detail::slot_name(first) + "b1";
      detail::EntryCheck check("tension-tension", lhs_name + "=" + rhs_name, opt.seed);
      Sampler rng(detail::entry_seed(opt.seed, 3, r * 3 + c));
      for (std::size_t i = 0; i < opt.pair_binaries && check.passing(); ++i) {
        const auto f = rng.function(alpha, 2, CellKind::multi);
        std::vector<DiscreteFunction> by_first, by_second;
        by_first.reserve(count);
        by_second.reserve(count);
        for (const auto& b : betas) {
          by_first.push_back(detail::tension(f, first, b));
          by_second.push_back(detail::tension(f, second, b));
        }
        for (std::size_t b1 = 0; b1 < count && check.passing(); ++b1) {
          for (std::size_t b2 = 0; b2 < count; ++b2) {
            const auto lhs = detail::tension(by_first[b1], second, betas[b2]);
            const bool ok = first == second
                                ? check.equal(lhs, by_first[composed[b1 * count + b2]], {f, betas[b1], betas[b2]})
                                : check.equal(lhs, detail::tension(by_second[b2], first, betas[b1]),
                                              {f, betas[b1], betas[b2]});
            if (!ok) break;
          }
        }
      }
      out.push_back(std::move(check).finish());
    }
  }
  return out;
}

inline std::vector<LawOutcome> check_distribution_laws(const LawOptions& opt) {
  const auto alpha = Alphabet::standard(3);
  const auto functional = all_unary(alpha, CellKind::partial);
  const auto betas = all_unary(alpha, CellKind::multi);
  const auto transpose = RolePermutation::parse("C(2,1,0)");
  std::vector<LawOutcome> out;
  std::size_t entry = 0;

  auto sample_family = [&](Sampler& rng) {
    std::vector<DiscreteFunction> fs;
    const std::size_t h = 2 + rng.below(3);
    for (std::size_t k = 0; k < h; ++k) fs.push_back(rng.function(alpha, 2, CellKind::multi));
    return fs;
  };

  {
    detail::EntryCheck check("transpose-superpose", "C(2,1,0)", opt.seed);
    Sampler rng(detail::entry_seed(opt.seed, 4, entry++));
    for (std::size_t i = 0; i < opt.samples; ++i) {
      const auto fs = sample_family(rng);
      std::vector<DiscreteFunction> moved;
      for (const auto& f : fs) moved.push_back(commute(f, transpose));
      check.equal(commute(superpose(fs), transpose), superpose(moved), {fs[0], fs[1]});
    }
    out.push_back(std::move(check).finish());
  }

  // Multi-valued b breaks these two: one argument value would have to feed
  // several summands at once. Functional b (at most one value per cell) is the domain.
  for (std::size_t slot = 1; slot <= 2; ++slot) {
    detail::EntryCheck check("tension-superpose", "T" + std::to_string(slot) + "b", opt.seed);
    Sampler rng(detail::entry_seed(opt.seed, 4, entry++));
    for (std::size_t i = 0; i < opt.samples; ++i) {
      const auto fs = sample_family(rng);
      const auto& b = functional[i % functional.size()];
      std::vector<DiscreteFunction> moved;
      for (const auto& f : fs) moved.push_back(tension_arg(f, slot, b));
      check.equal(tension_arg(superpose(fs), slot, b), superpose(moved), {fs[0], fs[1], b});
    }
    out.push_back(std::move(check).finish());
  }

  {
    Sampler rng(detail::entry_seed(opt.seed, 4, entry++));
    detail::EntryCheck assoc("superpose-superpose", "associative", opt.seed);
    detail::EntryCheck comm("superpose-superpose", "commutative", opt.seed);
    detail::EntryCheck zero("superpose-superpose", "zero-identity", opt.seed);
    const auto o = zero_function(alpha, 2);
    for (std::size_t i = 0; i < opt.samples; ++i) {
      const auto f = rng.function(alpha, 2, CellKind::multi);
      const auto g = rng.function(alpha, 2, CellKind::multi);
      const auto h = rng.function(alpha, 2, CellKind::multi);
      assoc.equal(superpose({superpose({f, g}), h}), superpose({f, superpose({g, h})}), {f, g, h});
      comm.equal(superpose({f, g}), superpose({g, f}), {f, g});
      zero.equal(superpose({f, o}), f, {f});
    }
    out.push_back(std::move(assoc).finish());
    out.push_back(std::move(comm).finish());
    out.push_back(std::move(zero).finish());
  }

  {
    detail::EntryCheck check("decompose-transpose", "C(2,1,0)", opt.seed);
    Sampler rng(detail::entry_seed(opt.seed, 4, entry++));
    for (std::size_t i = 0; i < opt.samples; ++i) {
      const auto f = rng.function(alpha, 2, CellKind::multi);
      const auto moved = commute(f, transpose);
      const auto d = trivial_decompose(f);
      const auto dm = trivial_decompose(moved);
      check.equal(tabulate_formula(render(dm)), moved, {f});
      for (Residue r = 0; r < 3; ++r) {
        for (Residue c = 0; c < 3; ++c) {
          const PointIndex here{{r, c}};
          const PointIndex mirror{{c, r}};
          check.equal(accessor_V(dm, here), accessor_V(d, mirror), {f});
          check.holds(detail::selector_target(accessor_P(dm, here, 1)) ==
                              detail::selector_target(accessor_P(d, mirror, 2)) &&
                          detail::selector_target(accessor_P(dm, here, 2)) ==
                              detail::selector_target(accessor_P(d, mirror, 1)),
                      "location selectors do not swap targets");
        }
      }
    }
    out.push_back(std::move(check).finish());
  }

  for (std::size_t slot = 1; slot <= 2; ++slot) {
    detail::EntryCheck check("decompose-tension-arg", "T" + std::to_string(slot) + "b", opt.seed);
    Sampler rng(detail::entry_seed(opt.seed, 4, entry++));
    for (std::size_t i = 0; i < opt.samples; ++i) {
      const auto f = rng.function(alpha, 2, CellKind::multi);
      const auto& b = functional[i % functional.size()];
      const auto formula = render(trivial_decompose(f), Pruning::unpruned);
      const Formula moved{alpha, 2, detail::precompose_slot(formula.expr, slot, b)};
      check.equal(tabulate_formula(moved), tension_arg(f, slot, b), {f, b});
    }
    out.push_back(std::move(check).finish());
  }

  {
    detail::EntryCheck check("decompose-tension-result", "T0b", opt.seed);
    Sampler rng(detail::entry_seed(opt.seed, 4, entry++));
    for (std::size_t i = 0; i < opt.samples; ++i) {
      const auto f = rng.function(alpha, 2, CellKind::multi);
      const auto& b = betas[i % betas.size()];
      const auto d = trivial_decompose(tension_result(f, b));
      const auto inv = converse(b);
      for (std::size_t flat = 0; flat < f.size(); ++flat) {
        const auto p = f.point_of(flat);
        check.equal(accessor_V(d, p), value_function(alpha, image(inv, f.cell(flat))), {f, b});
      }
    }
    out.push_back(std::move(check).finish());
  }

  {
    detail::EntryCheck check("decompose-superpose", "sum", opt.seed);
    Sampler rng(detail::entry_seed(opt.seed, 4, entry++));
    for (std::size_t i = 0; i < opt.samples; ++i) {
      const auto fs = sample_family(rng);
      const auto total = trivial_decompose(superpose(fs));
      std::vector<TrivialDecomposition> parts;
      for (const auto& f : fs) parts.push_back(trivial_decompose(f));
      for (std::size_t flat = 0; flat < fs[0].size(); ++flat) {
        const auto p = fs[0].point_of(flat);
        std::vector<MultiValue> slots;
        for (const auto& d : parts) slots.push_back(accessor_V(d, p).cell(alpha.one()));
        check.equal(accessor_V(total, p), value_function(alpha, mv_sum(slots, alpha)), {fs[0], fs[1]});
        for (std::size_t j = 1; j <= total.location_count(); ++j) {
          check.equal(accessor_P(total, p, j), accessor_P(parts[0], p, j));
        }
      }
    }
    out.push_back(std::move(check).finish());
  }
  return out;
}

/// Runs the selected families concurrently and merges by law id.
inline LawReport run_laws(const std::vector<LawFamily>& families, const LawOptions& opt) {
  std::vector<std::future<std::vector<LawOutcome>>> jobs;
  for (auto family : families) {
    jobs.push_back(std::async(std::launch::async, [family, opt] {
      switch (family) {
        case LawFamily::commutation_group:
          return check_commutation_group(opt);
        case LawFamily::tension_commutation:
          return check_tension_commutation(opt);
        case LawFamily::tension_tension:
          return check_tension_tension(opt);
        case LawFamily::distribution:
          return check_distribution_laws(opt);
      }
      return std::vector<LawOutcome>{};
    }));
  }
  LawReport report;
  for (auto& job : jobs) {
    auto part = job.get();
    std::move(part.begin(), part.end(), std::back_inserter(report.outcomes));
  }
  std::stable_sort(report.outcomes.begin(), report.outcomes.end(),
                   [](const LawOutcome& a, const LawOutcome& b) { return a.id < b.id; });
  return report;
}

inline std::vector<LawFamily> all_law_families() {
  return {LawFamily::commutation_group, LawFamily::tension_commutation, LawFamily::tension_tension,
          LawFamily::distribution};
}

}  // namespace dfun
