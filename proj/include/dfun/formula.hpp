#pragma once

// Superpositions of unary functions: variable placeholders, applications of a
// unary table, and mod-N sums.
//
// Text format, one top-level term per line, continuation lines start with "+ ":
//
//   formula N=3 M=3
//   (0,0,-1){(0,0,1)[(1,0,0)@1 + (0,-1,-1)@2] + (0,-1,-1)@3}
//   + (0,0,1){...}
//
// `@k` is variable k. A sum whose parts are all `u@k` leaves prints in square
// brackets, any other sum in braces. An empty top-level sum prints as the zero
// label.

#include <cctype>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dfun/alphabet.hpp"
#include "dfun/error.hpp"
#include "dfun/function.hpp"
#include "dfun/table_io.hpp"

namespace dfun {

class FormulaExpression {
 public:
  enum class Kind { var, apply, sum };

  static FormulaExpression var(std::size_t index);
  static FormulaExpression apply(DiscreteFunction fn, FormulaExpression inner);
  static FormulaExpression sum(std::vector<FormulaExpression> parts);

  Kind kind() const noexcept;
  bool is_var() const noexcept { return kind() == Kind::var; }
  bool is_apply() const noexcept { return kind() == Kind::apply; }
  bool is_sum() const noexcept { return kind() == Kind::sum; }

  std::size_t variable() const;
  const DiscreteFunction& function() const;
  const FormulaExpression& inner() const;
  std::span<const FormulaExpression> parts() const;

  friend bool operator==(const FormulaExpression& a, const FormulaExpression& b);

 private:
  struct Var {
    std::size_t index;
  };
  struct Apply;
  struct Sum;
  struct Node;

  explicit FormulaExpression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

struct FormulaExpression::Apply {
  DiscreteFunction fn;
  FormulaExpression inner;
};

struct FormulaExpression::Sum {
  std::vector<FormulaExpression> parts;
};

struct FormulaExpression::Node {
  std::variant<Var, Apply, Sum> value;
};

inline FormulaExpression FormulaExpression::var(std::size_t index) {
  if (index == 0) throw usage_error("variable indices start at 1");
  return FormulaExpression(std::make_shared<const Node>(Node{Var{index}}));
}

inline FormulaExpression FormulaExpression::apply(DiscreteFunction fn, FormulaExpression inner) {
  if (fn.arity() != 1) throw usage_error("only unary functions may be applied in a formula");
  return FormulaExpression(std::make_shared<const Node>(Node{Apply{std::move(fn), std::move(inner)}}));
}

inline FormulaExpression FormulaExpression::sum(std::vector<FormulaExpression> parts) {
  return FormulaExpression(std::make_shared<const Node>(Node{Sum{std::move(parts)}}));
}

inline FormulaExpression::Kind FormulaExpression::kind() const noexcept {
  return static_cast<Kind>(node_->value.index());
}
inline std::size_t FormulaExpression::variable() const { return std::get<Var>(node_->value).index; }
inline const DiscreteFunction& FormulaExpression::function() const { return std::get<Apply>(node_->value).fn; }
inline const FormulaExpression& FormulaExpression::inner() const { return std::get<Apply>(node_->value).inner; }
inline std::span<const FormulaExpression> FormulaExpression::parts() const {
  return std::get<Sum>(node_->value).parts;
}

inline bool operator==(const FormulaExpression& a, const FormulaExpression& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case FormulaExpression::Kind::var:
      return a.variable() == b.variable();
    case FormulaExpression::Kind::apply:
      return a.function() == b.function() && a.inner() == b.inner();
    case FormulaExpression::Kind::sum: {
      const auto pa = a.parts();
      const auto pb = b.parts();
      if (pa.size() != pb.size()) return false;
      for (std::size_t i = 0; i < pa.size(); ++i) {
        if (!(pa[i] == pb[i])) return false;
      }
      return true;
    }
  }
  return false;
}

/// A formula over a declared alphabet and arity; what the text format stores.
struct Formula {
  Alphabet alphabet;
  std::size_t arity;
  FormulaExpression expr;
};

inline std::size_t count_terms(const Formula& f) {
  return f.expr.is_sum() ? f.expr.parts().size() : 1;
}

/// Var yields its argument, Apply the unary image, Sum the Minkowski fold (empty sum = {0}).
inline MultiValue eval_expression(const FormulaExpression& e, std::span<const MultiValue> args, const Alphabet& alpha) {
  switch (e.kind()) {
    case FormulaExpression::Kind::var:
      if (e.variable() > args.size()) {
        throw usage_error("variable @" + std::to_string(e.variable()) + " is not bound");
      }
      return args[e.variable() - 1];
    case FormulaExpression::Kind::apply:
      return image(e.function(), eval_expression(e.inner(), args, alpha));
    case FormulaExpression::Kind::sum: {
      MultiValue acc = MultiValue::single(alpha.zero());
      for (const auto& part : e.parts()) {
        acc = mv_sum(acc, eval_expression(part, args, alpha), alpha);
      }
      return acc;
    }
  }
  return MultiValue::empty();
}

inline MultiValue eval_formula(const Formula& f, std::span<const MultiValue> args) {
  if (args.size() < f.arity) throw usage_error("formula needs " + std::to_string(f.arity) + " arguments");
  return eval_expression(f.expr, args, f.alphabet);
}

/// Tabulates a formula over all points of A^M with singleton arguments.
inline DiscreteFunction tabulate_formula(const Formula& f, std::string name = {}) {
  std::vector<MultiValue> args(f.arity);
  return DiscreteFunction::tabulate(
      f.alphabet, f.arity,
      [&](std::span<const Residue> coords) {
        for (std::size_t k = 0; k < coords.size(); ++k) args[k] = MultiValue::single(coords[k]);
        return eval_expression(f.expr, args, f.alphabet);
      },
      std::move(name));
}

/// True when the formula contains only unary literals over its alphabet,
/// variables within 1..M, sums, and nesting.
inline bool is_valid_superposition(const Formula& f) {
  auto check = [&](auto&& self, const FormulaExpression& e) -> bool {
    switch (e.kind()) {
      case FormulaExpression::Kind::var:
        return e.variable() >= 1 && e.variable() <= f.arity;
      case FormulaExpression::Kind::apply:
        return e.function().arity() == 1 && e.function().alphabet() == f.alphabet && self(self, e.inner());
      case FormulaExpression::Kind::sum:
        for (const auto& p : e.parts()) {
          if (!self(self, p)) return false;
        }
        return true;
    }
    return false;
  };
  return check(check, f.expr);
}

namespace detail {

inline bool is_leaf_application(const FormulaExpression& e) { return e.is_apply() && e.inner().is_var(); }

inline void print_expression(const FormulaExpression& e, std::string& out) {
  switch (e.kind()) {
    case FormulaExpression::Kind::var:
      out += '@';
      out += std::to_string(e.variable());
      return;
    case FormulaExpression::Kind::apply: {
      out += format_unary(e.function());
      const auto& inner = e.inner();
      if (inner.is_var()) {
        print_expression(inner, out);
        return;
      }
      bool leaves = true;
      if (inner.is_sum()) {
        for (const auto& p : inner.parts()) leaves = leaves && is_leaf_application(p);
      } else {
        leaves = is_leaf_application(inner);
      }
      out += leaves ? '[' : '{';
      print_expression(inner, out);
      out += leaves ? ']' : '}';
      return;
    }
    case FormulaExpression::Kind::sum: {
      const auto parts = e.parts();
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out += " + ";
        print_expression(parts[i], out);
      }
      return;
    }
  }
}

class FormulaParser {
 public:
  FormulaParser(std::string_view text, const Alphabet& alpha, std::size_t line, std::size_t column_offset = 0)
      : text_(text), alpha_(alpha), line_(line), column_offset_(column_offset) {}

  FormulaExpression parse_sum(char close) {
    std::vector<FormulaExpression> parts;
    parts.push_back(parse_term());
    while (true) {
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '+') {
        ++pos_;
        parts.push_back(parse_term());
        continue;
      }
      break;
    }
    skip_ws();
    if (close != '\0') {
      if (pos_ >= text_.size() || text_[pos_] != close) fail(std::string("expected '") + close + "'");
      ++pos_;
    }
    return FormulaExpression::sum(std::move(parts));
  }

  /// Top level of one line: a single term, returned without a wrapping sum.
  FormulaExpression parse_line_term() {
    auto t = parse_term();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected text after term");
    return t;
  }

 private:
  FormulaExpression parse_term() {
    skip_ws();
    if (pos_ >= text_.size()) fail("expected a term");
    if (text_[pos_] == '@') return parse_var();
    auto fn = parse_unary_at(text_, pos_, alpha_, line_);
    skip_ws();
    if (pos_ >= text_.size()) fail("expected '@k', '[' or '{' after unary literal");
    const char c = text_[pos_];
    if (c == '@') return FormulaExpression::apply(std::move(fn), parse_var());
    if (c == '[' || c == '{') {
      ++pos_;
      auto inner = parse_sum(c == '[' ? ']' : '}');
      return FormulaExpression::apply(std::move(fn), std::move(inner));
    }
    fail("expected '@k', '[' or '{' after unary literal");
  }

  FormulaExpression parse_var() {
    ++pos_;  // '@'
    const std::size_t start = pos_;
    std::size_t k = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      k = k * 10 + static_cast<std::size_t>(text_[pos_] - '0');
      ++pos_;
    }
    if (pos_ == start || k == 0) fail("expected a variable index after '@'");
    return FormulaExpression::var(k);
  }

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw parse_error(what, line_, column_offset_ + pos_ + 1);
  }

  std::string_view text_;
  const Alphabet& alpha_;
  std::size_t line_;
  std::size_t column_offset_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline std::string print_expression(const FormulaExpression& e) {
  std::string out;
  detail::print_expression(e, out);
  return out;
}

inline std::string print_formula(const Formula& f) {
  std::string out = "formula N=" + std::to_string(f.alphabet.size()) + " M=" + std::to_string(f.arity) + "\n";
  if (f.expr.is_sum()) {
    const auto parts = f.expr.parts();
    if (parts.empty()) {
      out += f.alphabet.label(f.alphabet.zero());
      out += '\n';
    }
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i > 0) out += "+ ";
      detail::print_expression(parts[i], out);
      out += '\n';
    }
  } else {
    detail::print_expression(f.expr, out);
    out += '\n';
  }
  return out;
}

/// Parses the formula format. A file with one term yields a one-part sum.
/// Without `alphabet`, N=3 files may use numeric or operator labels.
inline Formula parse_formula(std::string_view text, std::optional<Alphabet> alphabet = std::nullopt) {
  const auto lines = detail::split_lines(text);
  std::size_t li = 0;
  auto skip_blank = [&] {
    while (li < lines.size() && (lines[li].find_first_not_of(" \t") == std::string_view::npos ||
                                 lines[li].front() == '#')) {
      ++li;
    }
  };
  skip_blank();
  if (li >= lines.size()) throw parse_error("empty formula text", 1, 1);
  const auto header = detail::split_ws(lines[li]);
  if (header.size() != 3 || header[0] != "formula" || header[1].rfind("N=", 0) != 0 ||
      header[2].rfind("M=", 0) != 0) {
    throw parse_error("expected 'formula N=<n> M=<m>' header", li + 1, 1);
  }
  const auto n = detail::parse_count(header[1].substr(2));
  const auto m = detail::parse_count(header[2].substr(2));
  if (!n || !m || *n < 2 || *n > max_alphabet_size || *m < 1) throw parse_error("bad formula header", li + 1, 1);
  ++li;

  Alphabet alpha = alphabet.value_or(Alphabet::standard(*n));
  if (alpha.size() != *n) throw parse_error("header N does not match the requested alphabet", li, 1);
  if (!alphabet && *n == 3) {
    const auto rest = text.substr(static_cast<std::size_t>(lines[li - 1].end() - text.data()));
    if (rest.find('e') != std::string_view::npos || rest.find('o') != std::string_view::npos) {
      alpha = Alphabet::operators();
    }
  }

  std::vector<FormulaExpression> parts;
  skip_blank();
  if (li < lines.size() && detail::split_ws(lines[li]).size() == 1 &&
      detail::split_ws(lines[li])[0] == alpha.label(alpha.zero())) {
    ++li;
  } else {
    bool first = true;
    while (true) {
      skip_blank();
      if (li >= lines.size()) break;
      auto line = lines[li];
      std::size_t offset = 0;
      if (!first) {
        const auto plus = line.find_first_not_of(" \t");
        if (line[plus] != '+') throw parse_error("continuation terms must start with '+'", li + 1, plus + 1);
        offset = plus + 1;
      }
      detail::FormulaParser parser(line.substr(offset), alpha, li + 1, offset);
      parts.push_back(parser.parse_line_term());
      first = false;
      ++li;
    }
    if (parts.empty()) throw parse_error("formula has no terms", li, 1);
  }
  skip_blank();
  if (li < lines.size()) throw parse_error("trailing text after formula", li + 1, 1);
  Formula out{std::move(alpha), *m, FormulaExpression::sum(std::move(parts))};
  if (!is_valid_superposition(out)) throw parse_error("formula uses a variable beyond M", 0, 0);
  return out;
}

}  // namespace dfun
