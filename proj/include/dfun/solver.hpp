#pragma once

// Equations with one unknown over named binary tables, e.g.
//
//   solve x : (x psi1 a) psi3 (x psi2 b) = c
//
// The solution W maps every parameter tuple to the set of x that satisfy the
// equation. `semantic_solve` substitutes every x; `two_branch_pipeline` gets
// there with the special operators alone.

#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dfun/alphabet.hpp"
#include "dfun/decomposition.hpp"
#include "dfun/error.hpp"
#include "dfun/formula.hpp"
#include "dfun/function.hpp"
#include "dfun/ops.hpp"

namespace dfun {

struct EquationNode {
  enum class Kind { unknown, param, call };

  Kind kind;
  std::string name;  // parameter or function name; empty for the unknown
  std::vector<EquationNode> children;

  friend bool operator==(const EquationNode&, const EquationNode&) = default;
};

using Bindings = std::map<std::string, DiscreteFunction, std::less<>>;

struct Equation {
  std::string unknown;
  EquationNode lhs;
  std::string rhs;
  /// Parameters of the left side in order of first appearance, then `rhs`.
  std::vector<std::string> params;
  Bindings bindings;

  const Alphabet& alphabet() const { return bindings.begin()->second.alphabet(); }

  std::size_t param_index(std::string_view name) const {
    for (std::size_t i = 0; i < params.size(); ++i) {
      if (params[i] == name) return i;
    }
    throw usage_error("unknown parameter '" + std::string(name) + "'");
  }
};

namespace detail {

inline void print_node(const EquationNode& n, const std::string& unknown, std::string& out, bool top) {
  switch (n.kind) {
    case EquationNode::Kind::unknown:
      out += unknown;
      return;
    case EquationNode::Kind::param:
      out += n.name;
      return;
    case EquationNode::Kind::call:
      if (!top) out += '(';
      print_node(n.children[0], unknown, out, false);
      out += ' ' + n.name + ' ';
      print_node(n.children[1], unknown, out, false);
      if (!top) out += ')';
      return;
  }
}

class EquationParser {
 public:
  EquationParser(std::string_view text, const Bindings& bindings) : text_(text), bindings_(bindings) {}

  Equation parse() {
    Equation eq;
    eq.unknown = "x";
    skip();
    const std::size_t save = pos_;
    const std::size_t save_line = line_;
    const std::size_t save_col = col_;
    if (peek_ident() == "solve") {
      read_ident();
      skip();
      std::vector<std::string> declared{read_ident()};
      skip();
      while (peek() == ',') {
        advance();
        skip();
        declared.push_back(read_ident());
        skip();
      }
      if (peek() != ':') {
        // `solve` was an ordinary identifier after all.
        pos_ = save;
        line_ = save_line;
        col_ = save_col;
      } else {
        advance();
        if (declared.size() != 1) fail("exactly one unknown may be declared");
        eq.unknown = declared.front();
        if (bindings_.count(eq.unknown)) fail("unknown '" + eq.unknown + "' is also a function name");
      }
    }
    unknown_ = eq.unknown;

    skip();
    EquationNode lhs = parse_term();
    skip();
    if (peek() != '=') {
      auto fn = read_function();
      skip();
      auto right = parse_term();
      lhs = EquationNode{EquationNode::Kind::call, std::move(fn), {std::move(lhs), std::move(right)}};
      skip();
    }
    if (peek() != '=') fail("expected '='");
    advance();
    skip();
    const std::size_t rhs_line = line_;
    const std::size_t rhs_col = col_;
    eq.rhs = read_ident();
    skip();
    if (pos_ < text_.size()) fail("trailing text after equation");

    if (!saw_unknown_) throw parse_error("the unknown '" + eq.unknown + "' does not occur in the equation", 1, 1);
    if (eq.rhs == eq.unknown) throw parse_error("the right-hand side must be a parameter", rhs_line, rhs_col);
    if (bindings_.count(eq.rhs)) throw parse_error("'" + eq.rhs + "' is a function, not a parameter", rhs_line, rhs_col);
    for (const auto& p : params_) {
      if (p == eq.rhs) {
        throw parse_error("right-hand side parameter '" + eq.rhs + "' also occurs on the left", rhs_line, rhs_col);
      }
    }
    eq.lhs = std::move(lhs);
    eq.params = params_;
    eq.params.push_back(eq.rhs);
    for (const auto& name : used_functions_) eq.bindings.emplace(name, bindings_.find(name)->second);
    if (eq.bindings.empty()) {
      // `x = c` uses no table; borrow any binding for the alphabet.
      if (bindings_.empty()) throw usage_error("an equation without functions still needs one binding for its alphabet");
      eq.bindings.emplace(*bindings_.begin());
    }
    for (const auto& [name, fn] : eq.bindings) {
      if (!(fn.alphabet() == eq.alphabet())) throw validation_error("function '" + name + "' uses a different alphabet");
    }
    return eq;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw parse_error(what, line_, col_); }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip() {
    while (pos_ < text_.size()) {
      if (text_[pos_] == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        advance();
      } else {
        break;
      }
    }
  }

  static bool ident_char(char c, bool first) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || (!first && std::isdigit(static_cast<unsigned char>(c)));
  }

  std::string_view peek_ident() const {
    std::size_t end = pos_;
    while (end < text_.size() && ident_char(text_[end], end == pos_)) ++end;
    return text_.substr(pos_, end - pos_);
  }

  std::string read_ident() {
    auto id = peek_ident();
    if (id.empty()) fail("expected an identifier");
    for (std::size_t i = 0; i < id.size(); ++i) advance();
    return std::string(id);
  }

  std::string read_function() {
    const std::size_t line = line_;
    const std::size_t col = col_;
    auto name = read_ident();
    const auto it = bindings_.find(name);
    if (it == bindings_.end()) throw parse_error("unknown function '" + name + "'", line, col);
    if (it->second.arity() != 2) {
      throw parse_error("function '" + name + "' has arity " + std::to_string(it->second.arity()) +
                            ", infix use needs 2",
                        line, col);
    }
    used_functions_.insert(name);
    return name;
  }

  EquationNode parse_term() {
    if (peek() == '(') {
      advance();
      skip();
      auto left = parse_term();
      skip();
      auto fn = read_function();
      skip();
      auto right = parse_term();
      skip();
      if (peek() != ')') fail("expected ')'");
      advance();
      return EquationNode{EquationNode::Kind::call, std::move(fn), {std::move(left), std::move(right)}};
    }
    const std::size_t line = line_;
    const std::size_t col = col_;
    auto name = read_ident();
    if (name == unknown_) {
      saw_unknown_ = true;
      return EquationNode{EquationNode::Kind::unknown, {}, {}};
    }
    if (bindings_.count(name)) throw parse_error("function '" + name + "' used as a value", line, col);
    bool seen = false;
    for (const auto& p : params_) seen = seen || p == name;
    if (!seen) params_.push_back(name);
    return EquationNode{EquationNode::Kind::param, std::move(name), {}};
  }

  std::string_view text_;
  const Bindings& bindings_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  std::string unknown_;
  bool saw_unknown_ = false;
  std::vector<std::string> params_;
  std::set<std::string> used_functions_;
};

inline MultiValue eval_node(const Equation& eq, const EquationNode& n, MultiValue x, std::span<const Residue> params,
                            EmptyCells policy) {
  switch (n.kind) {
    case EquationNode::Kind::unknown:
      return x;
    case EquationNode::Kind::param:
      return MultiValue::single(params[eq.param_index(n.name)]);
    case EquationNode::Kind::call: {
      const MultiValue args[2] = {eval_node(eq, n.children[0], x, params, policy),
                                  eval_node(eq, n.children[1], x, params, policy)};
      return evaluate_setwise(eq.bindings.find(n.name)->second, args, policy);
    }
  }
  return MultiValue::empty();
}

}  // namespace detail

inline Equation parse_equation(std::string_view text, const Bindings& bindings) {
  if (bindings.empty()) throw usage_error("an equation needs at least one function binding");
  return detail::EquationParser(text, bindings).parse();
}

inline std::string to_string(const Equation& eq) {
  std::string out = "solve " + eq.unknown + " : ";
  detail::print_node(eq.lhs, eq.unknown, out, true);
  return out + " = " + eq.rhs;
}

/// Value set of the left side with the unknown fixed to `x` and parameters to
/// `params` (ordered as `eq.params`, the right-hand side value is ignored).
inline MultiValue evaluate_lhs(const Equation& eq, Residue x, std::span<const Residue> params,
                               EmptyCells policy = EmptyCells::relational) {
  return detail::eval_node(eq, eq.lhs, MultiValue::single(x), params, policy);
}

/// W over the parameters: W(p) = { x : p.rhs in lhs(x, p) }.
inline DiscreteFunction semantic_solve(const Equation& eq, EmptyCells policy = EmptyCells::relational) {
  const auto& alpha = eq.alphabet();
  return DiscreteFunction::tabulate(
      alpha, eq.params.size(),
      [&](std::span<const Residue> p) {
        MultiValue out;
        for (Residue x = 0; x < alpha.size(); ++x) {
          if (evaluate_lhs(eq, x, p, policy).contains(p.back())) out = out.with(x);
        }
        return out;
      },
      "W");
}

struct SolutionViolation {
  enum class Kind { unsound, incomplete };

  PointIndex point;
  Residue candidate;
  Kind kind;
};

struct SolutionReport {
  std::vector<SolutionViolation> violations;
  std::size_t checked = 0;

  bool ok() const noexcept { return violations.empty(); }
};

namespace detail {

/// Element-wise reachability, written separately from `evaluate_setwise`.
inline std::set<Residue> reachable(const Equation& eq, const EquationNode& n, Residue x, std::span<const Residue> params) {
  switch (n.kind) {
    case EquationNode::Kind::unknown:
      return {x};
    case EquationNode::Kind::param:
      return {params[eq.param_index(n.name)]};
    case EquationNode::Kind::call: {
      const auto& fn = eq.bindings.find(n.name)->second;
      const auto left = reachable(eq, n.children[0], x, params);
      const auto right = reachable(eq, n.children[1], x, params);
      std::set<Residue> out;
      for (Residue l : left) {
        for (Residue r : right) {
          const Residue args[2] = {l, r};
          fn(args).for_each([&](Residue v) { out.insert(v); });
        }
      }
      return out;
    }
  }
  return {};
}

}  // namespace detail

/// Re-checks every cell of `solution` by direct substitution.
inline SolutionReport check_solution(const Equation& eq, const DiscreteFunction& solution) {
  if (solution.arity() != eq.params.size() || !(solution.alphabet() == eq.alphabet())) {
    throw usage_error("solution table does not match the equation's parameters");
  }
  SolutionReport report;
  const auto& alpha = eq.alphabet();
  for_each_point(alpha.size(), solution.arity(), [&](std::size_t flat, std::span<const Residue> p) {
    for (Residue x = 0; x < alpha.size(); ++x) {
      ++report.checked;
      const bool satisfies = detail::reachable(eq, eq.lhs, x, p).count(p.back()) > 0;
      const bool listed = solution.cells()[flat].contains(x);
      if (satisfies != listed) {
        report.violations.push_back(SolutionViolation{PointIndex{{p.begin(), p.end()}}, x,
                                                      listed ? SolutionViolation::Kind::unsound
                                                             : SolutionViolation::Kind::incomplete});
      }
    }
  });
  return report;
}

/// Function names of `(u f1 p1) f3 (u f2 p2) = c` with parameters ordered (p1, p2, c).
struct TwoBranchShape {
  std::string first;
  std::string second;
  std::string outer;
};

inline std::optional<TwoBranchShape> match_two_branch(const Equation& eq) {
  using K = EquationNode::Kind;
  const auto& n = eq.lhs;
  auto branch = [](const EquationNode& b) {
    return b.kind == K::call && b.children[0].kind == K::unknown && b.children[1].kind == K::param;
  };
  if (n.kind != K::call || !branch(n.children[0]) || !branch(n.children[1])) return std::nullopt;
  if (eq.params.size() != 3) return std::nullopt;
  if (n.children[0].children[1].name != eq.params[0] || n.children[1].children[1].name != eq.params[1]) {
    return std::nullopt;
  }
  return TwoBranchShape{n.children[0].name, n.children[1].name, n.name};
}

/// One decomposition term of the outer function carried through the pipeline.
struct PipelineTerm {
  PointIndex point;
  MultiValue value;
  DiscreteFunction first_branch;   // psi1 with the row selector applied to its output
  DiscreteFunction second_branch;  // psi2 with the column selector applied to its output
  DiscreteFunction combined;       // both lifted to (x, a, b) and summed
  DiscreteFunction valued;         // combined with the value function applied
};

struct PipelineResult {
  TrivialDecomposition decomposition;
  std::vector<PipelineTerm> terms;
  DiscreteFunction summed;    // sum of every `valued`, a function of (x, a, b)
  DiscreteFunction solution;  // summed with roles permuted to (a, b, c) -> x
  Formula formula;
};

/// Role permutation turning the summed table psi(x, a, b) = c into W(a, b, c) = x.
inline RolePermutation solve_for_first_argument() { return RolePermutation({2, 3, 0, 1}); }

/// Solves (x f1 a) f3 (x f2 b) = c with special operators only.
inline PipelineResult two_branch_pipeline(const DiscreteFunction& first, const DiscreteFunction& second,
                                          const DiscreteFunction& outer) {
  for (const auto* f : {&first, &second, &outer}) {
    if (f->arity() != 2) throw validation_error("the two-branch pipeline needs binary functions");
    if (!(f->alphabet() == outer.alphabet())) throw validation_error("the two-branch pipeline needs one alphabet");
  }
  const auto& alpha = outer.alphabet();
  if (alpha.size() != 3) throw validation_error("the two-branch pipeline is defined for 3-symbol alphabets");

  auto decomposition = trivial_decompose(outer);
  std::vector<PipelineTerm> terms;
  std::vector<DiscreteFunction> valued;
  for (const auto& t : decomposition.all_terms()) {
    if (t.pruned) continue;
    auto a = tension_result(first, converse(t.location_fns[0]));
    auto b = tension_result(second, converse(t.location_fns[1]));
    auto combined = superpose({add_false_variable(a, 3), add_false_variable(b, 2)});
    auto scaled = tension_result(combined, converse(t.value_fn));
    valued.push_back(scaled);
    terms.push_back(PipelineTerm{t.point, t.value, std::move(a), std::move(b), std::move(combined), std::move(scaled)});
  }
  auto summed = valued.empty() ? zero_function(alpha, 3) : superpose(valued);
  auto solution = commute(summed, solve_for_first_argument()).named("W");
  auto formula = render(trivial_decompose(solution));
  return PipelineResult{std::move(decomposition), std::move(terms), std::move(summed).named("theta7"),
                        std::move(solution), std::move(formula)};
}

inline PipelineResult two_branch_pipeline(const Equation& eq) {
  const auto shape = match_two_branch(eq);
  if (!shape) throw validation_error("equation is not of the form (x f a) g (x h b) = c");
  return two_branch_pipeline(eq.bindings.find(shape->first)->second, eq.bindings.find(shape->second)->second,
                             eq.bindings.find(shape->outer)->second);
}

}  // namespace dfun
