#pragma once

// Dense tables A^M -> MultiValue, evaluation, and unary literals.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dfun/alphabet.hpp"
#include "dfun/error.hpp"

namespace dfun {

/// A point of A^M as residues, first variable first.
struct PointIndex {
  std::vector<Residue> coords;

  friend bool operator==(const PointIndex&, const PointIndex&) = default;
};

/// How reachable no-valued cells behave when an argument set has several members.
///
/// `relational` treats a function as its graph relation: an empty cell simply
/// contributes no tuples. `strict` collapses the whole result to empty as soon
/// as one reachable cell is empty.
enum class EmptyCells { relational, strict };

inline std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t out = 1;
  while (exp-- > 0) out *= base;
  return out;
}

/// Visits every point of A^M in row-major order (first variable slowest).
/// `f` receives the flat index and the coordinates.
template <class F>
void for_each_point(std::size_t n, std::size_t arity, F&& f) {
  std::vector<Residue> coords(arity, 0);
  const std::size_t total = ipow(n, arity);
  for (std::size_t flat = 0; flat < total; ++flat) {
    f(flat, std::span<const Residue>(coords));
    for (std::size_t k = arity; k-- > 0;) {
      if (++coords[k] < n) break;
      coords[k] = 0;
    }
  }
}

class DiscreteFunction {
 public:
  DiscreteFunction(Alphabet alpha, std::size_t arity, std::vector<MultiValue> cells, std::string name = {})
      : alpha_(std::move(alpha)), arity_(arity), cells_(std::move(cells)), name_(std::move(name)) {
    if (arity_ == 0) throw usage_error("arity must be at least 1");
    if (cells_.size() != ipow(alpha_.size(), arity_)) {
      throw usage_error("table needs exactly N^M cells");
    }
    for (MultiValue v : cells_) {
      if (!fits(v, alpha_)) throw usage_error("cell value is not over the alphabet");
    }
  }

  static DiscreteFunction constant(const Alphabet& alpha, std::size_t arity, MultiValue v, std::string name = {}) {
    return DiscreteFunction(alpha, arity, std::vector<MultiValue>(ipow(alpha.size(), arity), v), std::move(name));
  }

  /// Builds a table from `f(coords) -> MultiValue`.
  template <class F>
  static DiscreteFunction tabulate(const Alphabet& alpha, std::size_t arity, F&& f, std::string name = {}) {
    std::vector<MultiValue> cells(ipow(alpha.size(), arity));
    for_each_point(alpha.size(), arity, [&](std::size_t flat, std::span<const Residue> coords) {
      cells[flat] = f(coords);
    });
    return DiscreteFunction(alpha, arity, std::move(cells), std::move(name));
  }

  const Alphabet& alphabet() const noexcept { return alpha_; }
  std::size_t arity() const noexcept { return arity_; }
  std::size_t size() const noexcept { return cells_.size(); }
  std::span<const MultiValue> cells() const noexcept { return cells_; }
  MultiValue cell(std::size_t flat) const { return cells_.at(flat); }
  const std::string& name() const noexcept { return name_; }

  DiscreteFunction named(std::string name) const& {
    DiscreteFunction copy = *this;
    copy.name_ = std::move(name);
    return copy;
  }

  std::size_t index_of(std::span<const Residue> coords) const {
    if (coords.size() != arity_) {
      throw usage_error("expected " + std::to_string(arity_) + " arguments, got " + std::to_string(coords.size()));
    }
    std::size_t flat = 0;
    for (Residue r : coords) {
      if (r >= alpha_.size()) throw usage_error("argument outside alphabet");
      flat = flat * alpha_.size() + r;
    }
    return flat;
  }

  PointIndex point_of(std::size_t flat) const {
    if (flat >= cells_.size()) throw usage_error("flat index out of range");
    PointIndex p{std::vector<Residue>(arity_)};
    for (std::size_t k = arity_; k-- > 0;) {
      p.coords[k] = static_cast<Residue>(flat % alpha_.size());
      flat /= alpha_.size();
    }
    return p;
  }

  MultiValue operator()(std::span<const Residue> args) const { return cells_[index_of(args)]; }
  MultiValue operator()(std::initializer_list<Residue> args) const {
    return (*this)(std::span<const Residue>(args.begin(), args.size()));
  }

  /// Structural equality: alphabet, arity and every cell. The name is ignored.
  friend bool operator==(const DiscreteFunction& a, const DiscreteFunction& b) {
    return a.arity_ == b.arity_ && a.cells_ == b.cells_ && a.alpha_ == b.alpha_;
  }

 private:
  Alphabet alpha_;
  std::size_t arity_;
  std::vector<MultiValue> cells_;
  std::string name_;
};

inline MultiValue evaluate(const DiscreteFunction& f, std::span<const Residue> args) { return f(args); }

/// Evaluation at set-valued arguments: the union of the cells over the
/// Cartesian product of `args`. Any empty argument gives the empty value.
inline MultiValue evaluate_setwise(const DiscreteFunction& f, std::span<const MultiValue> args,
                                   EmptyCells policy = EmptyCells::relational) {
  if (args.size() != f.arity()) {
    throw usage_error("expected " + std::to_string(f.arity()) + " arguments, got " + std::to_string(args.size()));
  }
  for (MultiValue a : args) {
    if (a.is_empty()) return MultiValue::empty();
    if (!fits(a, f.alphabet())) throw usage_error("argument outside alphabet");
  }
  const std::size_t n = f.alphabet().size();
  MultiValue out;
  bool hit_empty = false;
  // Odometer over the members of each argument.
  std::vector<Residue> coords(args.size());
  std::vector<std::uint32_t> rest(args.size());
  for (std::size_t k = 0; k < args.size(); ++k) {
    rest[k] = args[k].bits();
    coords[k] = args[k].first();
  }
  while (true) {
    std::size_t flat = 0;
    for (Residue r : coords) flat = flat * n + r;
    const MultiValue cell = f.cells()[flat];
    if (cell.is_empty()) hit_empty = true;
    out |= cell;
    std::size_t k = args.size();
    while (k-- > 0) {
      rest[k] &= rest[k] - 1;
      if (rest[k] != 0) {
        coords[k] = static_cast<Residue>(std::countr_zero(rest[k]));
        break;
      }
      rest[k] = args[k].bits();
      coords[k] = args[k].first();
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }
  if (policy == EmptyCells::strict && hit_empty) return MultiValue::empty();
  return out;
}

/// Image of a set under a unary function.
inline MultiValue image(const DiscreteFunction& u, MultiValue s, EmptyCells policy = EmptyCells::relational) {
  if (u.arity() != 1) throw usage_error("image needs a unary function");
  if (s.is_empty()) return MultiValue::empty();
  MultiValue out;
  bool hit_empty = false;
  const auto cells = u.cells();
  s.for_each([&](Residue r) {
    hit_empty = hit_empty || cells[r].is_empty();
    out |= cells[r];
  });
  if (policy == EmptyCells::strict && hit_empty) return MultiValue::empty();
  return out;
}

/// Unary function from cell values listed in ascending label order.
inline DiscreteFunction unary(const Alphabet& alpha, std::span<const MultiValue> in_display_order, std::string name = {}) {
  if (in_display_order.size() != alpha.size()) throw usage_error("unary literal needs N values");
  std::vector<MultiValue> cells(alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) cells[alpha.display_order()[i]] = in_display_order[i];
  return DiscreteFunction(alpha, 1, std::move(cells), std::move(name));
}

inline DiscreteFunction identity_function(const Alphabet& alpha) {
  return DiscreteFunction::tabulate(alpha, 1, [](std::span<const Residue> x) { return MultiValue::single(x[0]); }, "e");
}

inline DiscreteFunction zero_function(const Alphabet& alpha, std::size_t arity = 1) {
  return DiscreteFunction::constant(alpha, arity, MultiValue::single(alpha.zero()), "o");
}

/// `(v1,v2,...,vN)` with values at arguments in ascending label order.
inline std::string format_unary(const DiscreteFunction& u) {
  if (u.arity() != 1) throw usage_error("unary literal needs a unary function");
  std::string out = "(";
  const auto& alpha = u.alphabet();
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (i > 0) out += ',';
    out += format_value(u.cell(alpha.display_order()[i]), alpha);
  }
  out += ')';
  return out;
}

/// Parses a unary literal starting at `text[pos]`; advances `pos` past the
/// closing parenthesis. Whitespace inside the literal is ignored.
inline DiscreteFunction parse_unary_at(std::string_view text, std::size_t& pos, const Alphabet& alpha,
                                       std::size_t line = 0) {
  auto fail = [&](const std::string& what, std::size_t at) { throw parse_error(what, line, at + 1); };
  if (pos >= text.size() || text[pos] != '(') fail("expected '(' to open a unary literal", pos);
  const std::size_t open = pos;
  const auto close = text.find(')', open);
  if (close == std::string_view::npos) fail("unterminated unary literal", open);
  std::vector<MultiValue> values;
  std::size_t start = open + 1;
  while (true) {
    const auto comma = text.find(',', start);
    const std::size_t end = (comma == std::string_view::npos || comma > close) ? close : comma;
    std::string token;
    for (std::size_t i = start; i < end; ++i) {
      if (text[i] != ' ' && text[i] != '\t') token += text[i];
    }
    const auto v = parse_value(token, alpha);
    if (!v) fail("bad value '" + token + "' in unary literal", start);
    values.push_back(*v);
    if (end == close) break;
    start = end + 1;
  }
  if (values.size() != alpha.size()) {
    fail("unary literal has " + std::to_string(values.size()) + " values, alphabet has " +
             std::to_string(alpha.size()),
         open);
  }
  pos = close + 1;
  return unary(alpha, values);
}

inline DiscreteFunction parse_unary(std::string_view text, const Alphabet& alpha) {
  std::size_t pos = 0;
  while (pos < text.size() && text[pos] == ' ') ++pos;
  auto u = parse_unary_at(text, pos, alpha);
  while (pos < text.size() && text[pos] == ' ') ++pos;
  if (pos != text.size()) throw parse_error("trailing text after unary literal", 1, pos + 1);
  return u;
}

}  // namespace dfun
