#pragma once

// Reference implementations for the tests. Everything here works on explicit
// graph relations (sets of tuples) and plain integer labels, sharing no code
// paths with the library beyond reading and building tables.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dfun/alphabet.hpp"
#include "dfun/formula.hpp"
#include "dfun/function.hpp"

namespace oracle {

using dfun::Alphabet;
using dfun::DiscreteFunction;
using dfun::MultiValue;
using dfun::Residue;

using Tuple = std::vector<int>;  // args..., result (residues)

struct Relation {
  int n = 3;
  std::size_t arity = 2;
  std::set<Tuple> graph;
};

/// Label -> residue for N=3 (-1 -> 2). Other N use labels 0..N-1 directly.
inline int residue_of(int label, int n) { return ((label % n) + n) % n; }
inline int label_of(int residue, int n) { return n == 3 && residue == 2 ? -1 : residue; }

/// Every point of n^arity in row-major residue order.
inline std::vector<Tuple> points(int n, std::size_t arity) {
  std::vector<Tuple> out{Tuple{}};
  for (std::size_t k = 0; k < arity; ++k) {
    std::vector<Tuple> next;
    for (const auto& p : out) {
      for (int v = 0; v < n; ++v) {
        auto q = p;
        q.push_back(v);
        next.push_back(q);
      }
    }
    out = std::move(next);
  }
  return out;
}

inline std::set<int> cell_of(const DiscreteFunction& f, const Tuple& point) {
  const int n = static_cast<int>(f.alphabet().size());
  std::size_t flat = 0;
  for (int r : point) flat = flat * n + r;
  std::set<int> out;
  const auto bits = f.cells()[flat].bits();
  for (int r = 0; r < n; ++r) {
    if ((bits >> r) & 1u) out.insert(r);
  }
  return out;
}

inline Relation relation_of(const DiscreteFunction& f) {
  Relation rel{static_cast<int>(f.alphabet().size()), f.arity(), {}};
  for (const auto& p : points(rel.n, rel.arity)) {
    for (int r : cell_of(f, p)) {
      auto t = p;
      t.push_back(r);
      rel.graph.insert(t);
    }
  }
  return rel;
}

inline std::set<int> cell_of(const Relation& rel, const Tuple& point) {
  std::set<int> out;
  auto lo = point;
  lo.push_back(-1);
  for (auto it = rel.graph.upper_bound(lo); it != rel.graph.end(); ++it) {
    if (!std::equal(point.begin(), point.end(), it->begin())) break;
    out.insert(it->back());
  }
  return out;
}

inline DiscreteFunction function_of(const Relation& rel, const Alphabet& alpha) {
  std::vector<MultiValue> cells;
  for (const auto& p : points(rel.n, rel.arity)) {
    std::uint32_t bits = 0;
    for (int r : cell_of(rel, p)) bits |= 1u << r;
    cells.push_back(MultiValue::from_bits(bits));
  }
  return DiscreteFunction(alpha, rel.arity, std::move(cells));
}

/// roles[j] for j < M names the old role (0 = result, k = argument k) that
/// becomes new argument j+1; roles[M] names the role that becomes the result.
inline DiscreteFunction commute(const DiscreteFunction& f, const std::vector<int>& roles) {
  const auto rel = relation_of(f);
  Relation out{rel.n, rel.arity, {}};
  for (const auto& t : rel.graph) {
    auto old_role = [&](int role) { return role == 0 ? t.back() : t[role - 1]; };
    Tuple u;
    for (int role : roles) u.push_back(old_role(role));
    out.graph.insert(u);
  }
  return function_of(out, f.alphabet());
}

inline DiscreteFunction converse(const DiscreteFunction& b) { return commute(b, {0, 1}); }

/// Argument k (1-based) is replaced by b(argument k).
inline DiscreteFunction tension_arg(const DiscreteFunction& f, std::size_t k, const DiscreteFunction& b) {
  const auto rf = relation_of(f);
  const auto rb = relation_of(b);
  Relation out{rf.n, rf.arity, {}};
  for (const auto& edge : rb.graph) {
    for (const auto& t : rf.graph) {
      if (t[k - 1] != edge[1]) continue;
      auto u = t;
      u[k - 1] = edge[0];
      out.graph.insert(u);
    }
  }
  return function_of(out, f.alphabet());
}

/// Result r becomes every z with r in b(z).
inline DiscreteFunction tension_result(const DiscreteFunction& f, const DiscreteFunction& b) {
  const auto rf = relation_of(f);
  const auto rb = relation_of(b);
  Relation out{rf.n, rf.arity, {}};
  for (const auto& t : rf.graph) {
    for (const auto& edge : rb.graph) {
      if (edge[1] != t.back()) continue;
      auto u = t;
      u.back() = edge[0];
      out.graph.insert(u);
    }
  }
  return function_of(out, f.alphabet());
}

/// Pointwise sum of sets; a point where any summand is empty stays empty.
inline DiscreteFunction superpose(const std::vector<DiscreteFunction>& fs) {
  const auto& alpha = fs.front().alphabet();
  const int n = static_cast<int>(alpha.size());
  Relation out{n, fs.front().arity(), {}};
  for (const auto& p : points(n, out.arity)) {
    std::set<int> acc{0};
    for (const auto& f : fs) {
      std::set<int> next;
      for (int a : acc) {
        for (int b : cell_of(f, p)) next.insert((a + b) % n);
      }
      acc = std::move(next);
    }
    for (int r : acc) {
      auto t = p;
      t.push_back(r);
      out.graph.insert(t);
    }
  }
  return function_of(out, alpha);
}

/// Inserts an ignored argument so it becomes argument k (1-based).
inline DiscreteFunction add_false_variable(const DiscreteFunction& f, std::size_t k) {
  const auto rf = relation_of(f);
  Relation out{rf.n, rf.arity + 1, {}};
  for (const auto& t : rf.graph) {
    for (int v = 0; v < rf.n; ++v) {
      auto u = t;
      u.insert(u.begin() + static_cast<std::ptrdiff_t>(k - 1), v);
      out.graph.insert(u);
    }
  }
  return function_of(out, f.alphabet());
}

/// Every x with c reachable from (x f1 a) f3 (x f2 b); indexed (a, b, c).
inline DiscreteFunction solve_two_branch(const DiscreteFunction& f1, const DiscreteFunction& f2,
                                         const DiscreteFunction& f3) {
  const int n = static_cast<int>(f3.alphabet().size());
  Relation out{n, 3, {}};
  for (int x = 0; x < n; ++x) {
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        for (int u : cell_of(f1, {x, a})) {
          for (int v : cell_of(f2, {x, b})) {
            for (int c : cell_of(f3, {u, v})) out.graph.insert({a, b, c, x});
          }
        }
      }
    }
  }
  return function_of(out, f3.alphabet());
}

/// Table from rows of labels in ascending order (-1, 0, 1 for N=3), rows over
/// the first argument. Each cell is "N", a label, or labels joined by '*'.
/// For arity 3, `blocks` holds one 3x3 block per third-argument label.
inline MultiValue parse_cell(const std::string& text, int n) {
  if (text == "N") return MultiValue::empty();
  std::uint32_t bits = 0;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, '*')) bits |= 1u << residue_of(std::stoi(part), n);
  return MultiValue::from_bits(bits);
}

inline std::vector<int> ascending_residues(int n) {
  std::vector<int> out;
  if (n == 3) return {2, 0, 1};
  for (int r = 0; r < n; ++r) out.push_back(r);
  return out;
}

inline DiscreteFunction table(const std::vector<std::vector<std::string>>& rows) {
  const int n = static_cast<int>(rows.size());
  const auto order = ascending_residues(n);
  std::vector<MultiValue> cells(n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) cells[order[i] * n + order[j]] = parse_cell(rows[i][j], n);
  }
  return DiscreteFunction(Alphabet::standard(n), 2, std::move(cells));
}

inline DiscreteFunction table3(const std::vector<std::vector<std::vector<std::string>>>& blocks) {
  const int n = 3;
  const auto order = ascending_residues(n);
  std::vector<MultiValue> cells(27);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        cells[(order[i] * n + order[j]) * n + order[k]] = parse_cell(blocks[k][i][j], n);
      }
    }
  }
  return DiscreteFunction(Alphabet::standard(n), 3, std::move(cells));
}

/// Unary table from labels in ascending argument order.
inline DiscreteFunction unary(const std::vector<std::string>& values) {
  const int n = static_cast<int>(values.size());
  const auto order = ascending_residues(n);
  std::vector<MultiValue> cells(n);
  for (int i = 0; i < n; ++i) cells[order[i]] = parse_cell(values[i], n);
  return DiscreteFunction(Alphabet::standard(n), 1, std::move(cells));
}

/// Compact literal: rows separated by '/', cells by spaces; for arity 3 the
/// blocks (third argument ascending) are separated by '|'.
inline std::vector<std::vector<std::string>> split_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream in(text);
  std::string row;
  while (std::getline(in, row, '/')) {
    std::stringstream cells(row);
    std::vector<std::string> r;
    std::string c;
    while (cells >> c) r.push_back(c);
    rows.push_back(r);
  }
  return rows;
}

inline DiscreteFunction table(const std::string& text) { return table(split_rows(text)); }

inline DiscreteFunction table3(const std::string& text) {
  std::vector<std::vector<std::vector<std::string>>> blocks;
  std::stringstream in(text);
  std::string block;
  while (std::getline(in, block, '|')) blocks.push_back(split_rows(block));
  return table3(blocks);
}

/// Evaluates a formula at single-valued arguments by walking the tree with
/// explicit sets.
inline std::set<int> eval(const dfun::FormulaExpression& e, const Tuple& args, int n) {
  using Kind = dfun::FormulaExpression::Kind;
  switch (e.kind()) {
    case Kind::var:
      return {args.at(e.variable() - 1)};
    case Kind::apply: {
      std::set<int> out;
      for (int x : eval(e.inner(), args, n)) {
        for (int y : cell_of(e.function(), {x})) out.insert(y);
      }
      return out;
    }
    case Kind::sum: {
      std::set<int> acc{0};
      for (const auto& p : e.parts()) {
        std::set<int> next;
        const auto part = eval(p, args, n);
        for (int a : acc) {
          for (int b : part) next.insert((a + b) % n);
        }
        acc = std::move(next);
      }
      return acc;
    }
  }
  return {};
}

/// True when the formula agrees with `f` at every point.
inline bool formula_matches(const dfun::Formula& formula, const DiscreteFunction& f) {
  const int n = static_cast<int>(f.alphabet().size());
  for (const auto& p : points(n, f.arity())) {
    if (eval(formula.expr, p, n) != cell_of(f, p)) return false;
  }
  return true;
}

}  // namespace oracle
