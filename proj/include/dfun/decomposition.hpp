#pragma once

// Trivial decomposition: one singular term per table point whose cell is not
// exactly {0}. A term for point (t1..tM) with cell v is
//
//   V[ R_t1 @1 + C_t2 @2 + ... + C_tM @M ]            when N >= M+1 (flat)
//   V{ I{ I[ R_t1 @1 + C_t2 @2 ] + C_t3 @3 } ... }      otherwise (nested)
//
// where R_t is 1 at t and 0 elsewhere, C_t is 0 at t and -1 elsewhere, I is the
// indicator of 1 and V sends 1 to v and everything else to 0. The selectors
// sum to 1 exactly at the target point; that needs N >= 3 in both shapes.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dfun/alphabet.hpp"
#include "dfun/error.hpp"
#include "dfun/formula.hpp"
#include "dfun/function.hpp"

namespace dfun {

/// 1 at `t`, 0 elsewhere.
inline DiscreteFunction row_selector(const Alphabet& alpha, Residue t) {
  return DiscreteFunction::tabulate(alpha, 1, [&](std::span<const Residue> x) {
    return MultiValue::single(x[0] == t ? alpha.one() : alpha.zero());
  });
}

/// 0 at `t`, -1 elsewhere.
inline DiscreteFunction col_selector(const Alphabet& alpha, Residue t) {
  return DiscreteFunction::tabulate(alpha, 1, [&](std::span<const Residue> x) {
    return MultiValue::single(x[0] == t ? alpha.zero() : alpha.minus_one());
  });
}

/// The inner indicator (0,...,0,1) placed between nesting levels.
inline DiscreteFunction level_indicator(const Alphabet& alpha) { return row_selector(alpha, alpha.one()); }

/// Value carrier (0,...,0,v): 1 goes to `v`, every other element to 0.
inline DiscreteFunction value_function(const Alphabet& alpha, MultiValue v) {
  return DiscreteFunction::tabulate(alpha, 1, [&](std::span<const Residue> x) {
    return x[0] == alpha.one() ? v : MultiValue::single(alpha.zero());
  });
}

enum class Grouping { flat, nested };

/// Flat sums isolate a point only while N >= M+1.
inline Grouping grouping_for(std::size_t n, std::size_t arity) {
  return n >= arity + 1 ? Grouping::flat : Grouping::nested;
}

enum class Pruning { pruned, unpruned };

struct DecompositionTerm {
  PointIndex point;
  MultiValue value;
  DiscreteFunction value_fn;
  /// Selectors for variables 1..M, then (nested only) the M-2 level indicators,
  /// innermost first.
  std::vector<DiscreteFunction> location_fns;
  bool pruned;
};

class TrivialDecomposition {
 public:
  TrivialDecomposition(Alphabet alpha, std::size_t arity, Grouping grouping, std::vector<DecompositionTerm> terms)
      : alpha_(std::move(alpha)), arity_(arity), grouping_(grouping), terms_(std::move(terms)) {}

  const Alphabet& alphabet() const noexcept { return alpha_; }
  std::size_t arity() const noexcept { return arity_; }
  Grouping grouping() const noexcept { return grouping_; }

  /// All N^M terms, pruned ones included, with points in row-major label order
  /// (-1,-1 before -1,0 for N=3).
  std::span<const DecompositionTerm> all_terms() const noexcept { return terms_; }

  /// Number of terms that survive pruning.
  std::size_t term_count() const {
    std::size_t k = 0;
    for (const auto& t : terms_) k += t.pruned ? 0 : 1;
    return k;
  }

  std::size_t location_count() const noexcept {
    return grouping_ == Grouping::flat ? arity_ : 2 * arity_ - 2;
  }

  const DecompositionTerm& term_at(const PointIndex& p) const {
    if (p.coords.size() != arity_) throw usage_error("point has the wrong number of coordinates");
    std::size_t flat = 0;
    for (Residue r : p.coords) {
      if (r >= alpha_.size()) throw usage_error("point coordinate outside alphabet");
      flat = flat * alpha_.size() + alpha_.display_position(r);
    }
    return terms_[flat];
  }

  /// Value function at `p`; pruned points answer the all-zero function.
  const DiscreteFunction& value_at(const PointIndex& p) const { return term_at(p).value_fn; }

  /// Location function `j` (1-based) at `p`. Depends on `p` only.
  const DiscreteFunction& location_at(const PointIndex& p, std::size_t j) const {
    const auto& t = term_at(p);
    if (j < 1 || j > t.location_fns.size()) {
      throw usage_error("location index " + std::to_string(j) + " out of range 1.." +
                        std::to_string(t.location_fns.size()));
    }
    return t.location_fns[j - 1];
  }

 private:
  Alphabet alpha_;
  std::size_t arity_;
  Grouping grouping_;
  std::vector<DecompositionTerm> terms_;
};

/// Location functions of the term at `point`, independent of any table.
inline std::vector<DiscreteFunction> location_functions(const Alphabet& alpha, const PointIndex& point) {
  const std::size_t m = point.coords.size();
  std::vector<DiscreteFunction> out;
  out.push_back(row_selector(alpha, point.coords[0]));
  for (std::size_t k = 1; k < m; ++k) out.push_back(col_selector(alpha, point.coords[k]));
  if (grouping_for(alpha.size(), m) == Grouping::nested) {
    for (std::size_t k = 2; k < m; ++k) out.push_back(level_indicator(alpha));
  }
  return out;
}

inline TrivialDecomposition trivial_decompose(const DiscreteFunction& f) {
  const auto& alpha = f.alphabet();
  if (alpha.size() < 3) {
    throw validation_error("trivial decomposition needs an alphabet of at least 3 symbols");
  }
  const MultiValue zero = MultiValue::single(alpha.zero());
  std::vector<DecompositionTerm> terms;
  terms.reserve(f.size());
  for_each_point(alpha.size(), f.arity(), [&](std::size_t, std::span<const Residue> positions) {
    PointIndex point;
    for (auto pos : positions) point.coords.push_back(alpha.display_order()[pos]);
    const MultiValue v = f(point.coords);
    auto locations = location_functions(alpha, point);
    terms.push_back(DecompositionTerm{std::move(point), v, value_function(alpha, v), std::move(locations), v == zero});
  });
  return TrivialDecomposition(alpha, f.arity(), grouping_for(alpha.size(), f.arity()), std::move(terms));
}

inline FormulaExpression render_term(const DecompositionTerm& t, Grouping grouping) {
  const std::size_t m = t.point.coords.size();
  auto leaf = [&](std::size_t k) { return FormulaExpression::apply(t.location_fns[k - 1], FormulaExpression::var(k)); };
  FormulaExpression inner = FormulaExpression::var(1);
  if (grouping == Grouping::flat || m < 3) {
    std::vector<FormulaExpression> parts;
    for (std::size_t k = 1; k <= m; ++k) parts.push_back(leaf(k));
    inner = FormulaExpression::sum(std::move(parts));
  } else {
    inner = FormulaExpression::sum({leaf(1), leaf(2)});
    for (std::size_t k = 3; k <= m; ++k) {
      const auto& indicator = t.location_fns[m + k - 3];
      inner = FormulaExpression::sum({FormulaExpression::apply(indicator, std::move(inner)), leaf(k)});
    }
  }
  return FormulaExpression::apply(t.value_fn, std::move(inner));
}

/// The decomposition as a formula. `pruned` drops the {0} points.
inline Formula render(const TrivialDecomposition& d, Pruning pruning = Pruning::pruned) {
  std::vector<FormulaExpression> parts;
  for (const auto& t : d.all_terms()) {
    if (pruning == Pruning::pruned && t.pruned) continue;
    parts.push_back(render_term(t, d.grouping()));
  }
  return Formula{d.alphabet(), d.arity(), FormulaExpression::sum(std::move(parts))};
}

inline const DiscreteFunction& accessor_V(const TrivialDecomposition& d, const PointIndex& p) { return d.value_at(p); }

inline const DiscreteFunction& accessor_P(const TrivialDecomposition& d, const PointIndex& p, std::size_t j) {
  return d.location_at(p, j);
}

/// Whether R_t1(x1) + C_t2(x2) + ... + C_tM(xM) equals 1 exactly at `target`.
inline bool flat_sum_isolates(const Alphabet& alpha, const PointIndex& target) {
  const auto locations = location_functions(alpha, target);
  bool ok = true;
  for_each_point(alpha.size(), target.coords.size(), [&](std::size_t, std::span<const Residue> x) {
    MultiValue acc = MultiValue::single(alpha.zero());
    for (std::size_t k = 0; k < x.size(); ++k) acc = mv_sum(acc, locations[k].cells()[x[k]], alpha);
    const bool at_target = std::equal(x.begin(), x.end(), target.coords.begin());
    ok = ok && (acc == MultiValue::single(alpha.one())) == at_target;
  });
  return ok;
}

struct SelectorPair {
  DiscreteFunction first;
  DiscreteFunction second;
  Residue level;
};

/// Exhaustive search over single-valued unary pairs (g1, g2) and levels s for
/// g1(x1) + g2(x2) = s holding exactly at `target`.
inline std::optional<SelectorPair> find_isolating_pair(const Alphabet& alpha, const PointIndex& target) {
  if (target.coords.size() != 2) throw usage_error("isolation search is over binary points");
  const std::size_t n = alpha.size();
  const std::size_t count = ipow(n, n);
  auto nth_unary = [&](std::size_t code) {
    std::vector<MultiValue> cells(n);
    for (std::size_t x = 0; x < n; ++x) {
      cells[x] = MultiValue::single(static_cast<Residue>(code % n));
      code /= n;
    }
    return DiscreteFunction(alpha, 1, std::move(cells));
  };
  for (std::size_t a = 0; a < count; ++a) {
    const auto g1 = nth_unary(a);
    for (std::size_t b = 0; b < count; ++b) {
      const auto g2 = nth_unary(b);
      for (std::size_t s = 0; s < n; ++s) {
        bool isolates = true;
        for (Residue x1 = 0; x1 < n && isolates; ++x1) {
          for (Residue x2 = 0; x2 < n && isolates; ++x2) {
            const Residue sum = alpha.add(g1.cells()[x1].first(), g2.cells()[x2].first());
            const bool at_target = x1 == target.coords[0] && x2 == target.coords[1];
            isolates = (sum == s) == at_target;
          }
        }
        if (isolates) return SelectorPair{g1, g2, static_cast<Residue>(s)};
      }
    }
  }
  return std::nullopt;
}

}  // namespace dfun
