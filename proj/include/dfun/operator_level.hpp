#pragma once

// One level up: a 3-symbol alphabet whose symbols stand for the unary
// functions -e = (1,0,-1), o = (0,0,0), e = (-1,0,1). The engine is generic in
// the alphabet, so level-1 work is level-0 work on relabeled tables. What needs
// its own code is the denotation and reading results back down.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "dfun/alphabet.hpp"
#include "dfun/error.hpp"
#include "dfun/formula.hpp"
#include "dfun/function.hpp"
#include "dfun/solver.hpp"

namespace dfun {

/// Same residues, different labels. Both alphabets must have the same size.
inline DiscreteFunction relabel(const DiscreteFunction& f, const Alphabet& target) {
  if (target.size() != f.alphabet().size()) throw usage_error("relabel needs alphabets of equal size");
  return DiscreteFunction(target, f.arity(), {f.cells().begin(), f.cells().end()}, f.name());
}

inline FormulaExpression relabel(const FormulaExpression& e, const Alphabet& target) {
  switch (e.kind()) {
    case FormulaExpression::Kind::var:
      return e;
    case FormulaExpression::Kind::apply:
      return FormulaExpression::apply(relabel(e.function(), target), relabel(e.inner(), target));
    case FormulaExpression::Kind::sum: {
      std::vector<FormulaExpression> parts;
      for (const auto& p : e.parts()) parts.push_back(relabel(p, target));
      return FormulaExpression::sum(std::move(parts));
    }
  }
  return e;
}

inline Formula relabel(const Formula& f, const Alphabet& target) {
  if (target.size() != f.alphabet.size()) throw usage_error("relabel needs alphabets of equal size");
  return Formula{target, f.arity, relabel(f.expr, target)};
}

class OperatorAlphabetBinding {
 public:
  OperatorAlphabetBinding() : symbols_(Alphabet::operators()), base_(Alphabet::standard(3)) {
    // Symbol residue r stands for x -> r*x: 1 is e, 2 is -e, 0 is o.
    for (Residue r = 0; r < 3; ++r) {
      denotations_.push_back(DiscreteFunction::tabulate(
          base_, 1,
          [&](std::span<const Residue> x) { return MultiValue::single(static_cast<Residue>((r * x[0]) % 3)); },
          std::string(symbols_.label(r))));
    }
  }

  const Alphabet& symbols() const noexcept { return symbols_; }
  const Alphabet& base() const noexcept { return base_; }

  const DiscreteFunction& denotation(Residue symbol) const { return denotations_.at(symbol); }

  /// The symbol whose denotation is `u`, if any.
  std::optional<Residue> symbol_of(const DiscreteFunction& u) const {
    for (Residue r = 0; r < denotations_.size(); ++r) {
      if (denotations_[r] == u) return r;
    }
    return std::nullopt;
  }

  /// Symbol pairs (a, b) where denotation(a + b) differs from the pointwise sum
  /// of denotation(a) and denotation(b). Empty when the binding is a homomorphism.
  std::vector<std::pair<Residue, Residue>> homomorphism_failures() const {
    std::vector<std::pair<Residue, Residue>> out;
    for (Residue a = 0; a < 3; ++a) {
      for (Residue b = 0; b < 3; ++b) {
        const auto lhs = denotation(symbols_.add(a, b));
        const auto rhs = superpose({denotation(a), denotation(b)});
        if (!(lhs == rhs)) out.emplace_back(a, b);
      }
    }
    return out;
  }

  DiscreteFunction lift(const DiscreteFunction& f) const { return relabel(f, symbols_); }
  Formula lift(const Formula& f) const { return relabel(f, symbols_); }
  DiscreteFunction lower(const DiscreteFunction& f) const { return relabel(f, base_); }
  Formula lower(const Formula& f) const { return relabel(f, base_); }

 private:
  Alphabet symbols_;
  Alphabet base_;
  std::vector<DiscreteFunction> denotations_;
};

/// Wraps a level-0 routine for level-1 use. Every table argument must already
/// be over the operator symbols; the routine itself runs unchanged.
template <class Routine>
auto lift_symbolic(Routine routine, OperatorAlphabetBinding binding = {}) {
  return [routine = std::move(routine), binding = std::move(binding)](const auto&... args) {
    auto check = [&](const auto& arg) {
      using T = std::decay_t<decltype(arg)>;
      if constexpr (std::is_same_v<T, DiscreteFunction>) {
        if (!(arg.alphabet() == binding.symbols())) throw usage_error("operator-level routine given a level-0 table");
      }
    };
    (check(args), ...);
    return routine(args...);
  };
}

/// (y f1 f) f3 (y f2 g) = h over operator tables.
inline PipelineResult solve_operator_equation(const DiscreteFunction& first, const DiscreteFunction& second,
                                              const DiscreteFunction& outer) {
  const OperatorAlphabetBinding binding;
  for (const auto* f : {&first, &second, &outer}) {
    if (!(f->alphabet() == binding.symbols())) throw validation_error("operator equation needs -e/o/e tables");
  }
  return two_branch_pipeline(first, second, outer);
}

/// Evaluates a level-1 formula at symbol arguments (variable index -> symbol)
/// and returns the level-0 functions the resulting symbols stand for. An empty
/// cell gives an empty list; a multi-valued one gives several functions.
inline std::vector<DiscreteFunction> interpret(const Formula& f, const std::map<std::size_t, Residue>& args,
                                               const OperatorAlphabetBinding& binding = {}) {
  if (!(f.alphabet == binding.symbols())) throw usage_error("interpret needs an operator-level formula");
  std::vector<MultiValue> values(f.arity);
  for (std::size_t k = 1; k <= f.arity; ++k) {
    const auto it = args.find(k);
    if (it == args.end()) throw usage_error("variable @" + std::to_string(k) + " is unbound");
    if (it->second >= 3) throw usage_error("symbol outside the operator alphabet");
    values[k - 1] = MultiValue::single(it->second);
  }
  std::vector<DiscreteFunction> out;
  eval_formula(f, values).for_each([&](Residue r) { out.push_back(binding.denotation(r)); });
  return out;
}

}  // namespace dfun
