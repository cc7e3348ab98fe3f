#pragma once

// The special operators on discrete functions: commutation, tension-compression
// (argument and result side), superposition, and false-variable lifting, plus
// the unary converse and composition they are built from.
//
// All of them treat a function as its graph relation {(args, out) : out in f(args)},
// so they are total on multi-valued and no-valued tables.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dfun/alphabet.hpp"
#include "dfun/error.hpp"
#include "dfun/function.hpp"

namespace dfun {

/// Role assignment for a commutation of an M-ary function. Labels 1..M name
/// the original argument positions, 0 the original result. Entry j < M is the
/// role played by new argument j+1; entry M is the role played by the new result.
class RolePermutation {
 public:
  explicit RolePermutation(std::vector<std::uint8_t> roles) : roles_(std::move(roles)) {
    if (roles_.size() < 2) throw usage_error("a role permutation needs at least two roles");
    std::vector<bool> seen(roles_.size(), false);
    for (auto r : roles_) {
      if (r >= roles_.size() || seen[r]) throw usage_error("roles must be a permutation of 0..M");
      seen[r] = true;
    }
  }

  /// C(1,2,...,M,0): every role stays in place.
  static RolePermutation identity(std::size_t arity) {
    std::vector<std::uint8_t> roles(arity + 1);
    for (std::size_t j = 0; j < arity; ++j) roles[j] = static_cast<std::uint8_t>(j + 1);
    roles[arity] = 0;
    return RolePermutation(std::move(roles));
  }

  /// Parses `C(1,0,2)` or `(1,0,2)`.
  static RolePermutation parse(std::string_view text) {
    if (!text.empty() && text.front() == 'C') text.remove_prefix(1);
    if (text.size() < 2 || text.front() != '(' || text.back() != ')') {
      throw parse_error("expected C(r1,...,rM,r0)", 1, 1);
    }
    text = text.substr(1, text.size() - 2);
    std::vector<std::uint8_t> roles;
    std::size_t start = 0;
    while (start <= text.size()) {
      auto end = text.find(',', start);
      if (end == std::string_view::npos) end = text.size();
      const auto tok = text.substr(start, end - start);
      if (tok.size() != 1 || tok[0] < '0' || tok[0] > '9') {
        throw parse_error("bad role '" + std::string(tok) + "'", 1, start + 3);
      }
      roles.push_back(static_cast<std::uint8_t>(tok[0] - '0'));
      start = end + 1;
    }
    return RolePermutation(std::move(roles));
  }

  std::size_t arity() const noexcept { return roles_.size() - 1; }
  std::span<const std::uint8_t> roles() const noexcept { return roles_; }
  std::uint8_t operator[](std::size_t j) const { return roles_.at(j); }

  std::string to_string() const {
    std::string out = "C(";
    for (std::size_t j = 0; j < roles_.size(); ++j) {
      if (j > 0) out += ',';
      out += std::to_string(roles_[j]);
    }
    return out + ")";
  }

  /// Position in the role vector that holds role label `role`'s slot:
  /// argument k sits at k-1, the result at M.
  std::size_t slot_of_label(std::uint8_t role) const noexcept {
    return role == 0 ? arity() : static_cast<std::size_t>(role - 1);
  }

  /// The single permutation equal to applying `first` and then `second`.
  friend RolePermutation then(const RolePermutation& first, const RolePermutation& second) {
    if (first.roles_.size() != second.roles_.size()) throw usage_error("role permutations differ in arity");
    std::vector<std::uint8_t> out(first.roles_.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = first.roles_[first.slot_of_label(second.roles_[j])];
    return RolePermutation(std::move(out));
  }

  RolePermutation inverse() const {
    // find q with then(*this, q) == identity
    const auto id = identity(arity());
    std::vector<std::uint8_t> out(roles_.size());
    for (std::size_t j = 0; j < roles_.size(); ++j) {
      // need roles_[slot_of_label(out[j])] == id[j]
      for (std::size_t label = 0; label < roles_.size(); ++label) {
        if (roles_[slot_of_label(static_cast<std::uint8_t>(label))] == id.roles_[j]) {
          out[j] = static_cast<std::uint8_t>(label);
          break;
        }
      }
    }
    return RolePermutation(std::move(out));
  }

  friend bool operator==(const RolePermutation&, const RolePermutation&) = default;

 private:
  std::vector<std::uint8_t> roles_;
};

/// Role-permuted graph relation. Cells with no witness become empty, cells
/// with several become multi-valued.
inline DiscreteFunction commute(const DiscreteFunction& f, const RolePermutation& p) {
  if (p.arity() != f.arity()) {
    throw usage_error("commutation " + p.to_string() + " needs arity " + std::to_string(p.arity()) +
                      ", function has arity " + std::to_string(f.arity()));
  }
  const std::size_t m = f.arity();
  const std::size_t n = f.alphabet().size();
  std::vector<MultiValue> cells(f.size());
  // by_label[0] is the result, by_label[k] argument k.
  std::vector<Residue> by_label(m + 1);
  for_each_point(n, m, [&](std::size_t flat, std::span<const Residue> args) {
    std::copy(args.begin(), args.end(), by_label.begin() + 1);
    f.cells()[flat].for_each([&](Residue out) {
      by_label[0] = out;
      std::size_t target = 0;
      for (std::size_t j = 0; j < m; ++j) target = target * n + by_label[p[j]];
      cells[target] = cells[target].with(by_label[p[m]]);
    });
  });
  return DiscreteFunction(f.alphabet(), m, std::move(cells));
}

/// Graph converse of a unary function: y in converse(b)(x) iff x in b(y).
inline DiscreteFunction converse(const DiscreteFunction& b) {
  if (b.arity() != 1) throw usage_error("converse needs a unary function");
  return commute(b, RolePermutation({0, 1}));
}

/// `outer` after `inner`: x -> outer[inner(x)].
inline DiscreteFunction compose_unary(const DiscreteFunction& outer, const DiscreteFunction& inner) {
  if (outer.arity() != 1 || inner.arity() != 1) throw usage_error("compose_unary needs unary functions");
  if (!(outer.alphabet() == inner.alphabet())) throw usage_error("compose_unary: alphabet mismatch");
  std::vector<MultiValue> cells(inner.size());
  for (std::size_t x = 0; x < cells.size(); ++x) cells[x] = image(outer, inner.cells()[x]);
  return DiscreteFunction(inner.alphabet(), 1, std::move(cells));
}

/// Pre-composes argument `k` (1-based) with `b`: result(x) = f(..., b(x_k), ...).
inline DiscreteFunction tension_arg(const DiscreteFunction& f, std::size_t k, const DiscreteFunction& b) {
  if (b.arity() != 1) throw usage_error("tension needs a unary function");
  if (!(f.alphabet() == b.alphabet())) throw usage_error("tension: alphabet mismatch");
  if (k < 1 || k > f.arity()) {
    throw usage_error("tension position " + std::to_string(k) + " out of range 1.." + std::to_string(f.arity()));
  }
  const std::size_t n = f.alphabet().size();
  const std::size_t m = f.arity();
  const std::size_t stride = ipow(n, m - k);
  std::vector<MultiValue> cells(f.size());
  for_each_point(n, m, [&](std::size_t flat, std::span<const Residue> args) {
    const std::size_t base = flat - args[k - 1] * stride;
    MultiValue out;
    b.cells()[args[k - 1]].for_each([&](Residue r) { out |= f.cells()[base + r * stride]; });
    cells[flat] = out;
  });
  return DiscreteFunction(f.alphabet(), m, std::move(cells));
}

/// Result-side tension-compression: each cell is mapped through converse(b).
/// Passing converse(g) therefore applies g to every output.
inline DiscreteFunction tension_result(const DiscreteFunction& f, const DiscreteFunction& b) {
  if (b.arity() != 1) throw usage_error("tension needs a unary function");
  if (!(f.alphabet() == b.alphabet())) throw usage_error("tension: alphabet mismatch");
  const auto inv = converse(b);
  std::vector<MultiValue> cells(f.size());
  for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = image(inv, f.cells()[i]);
  return DiscreteFunction(f.alphabet(), f.arity(), std::move(cells));
}

/// Pointwise sum of functions with the same alphabet and arity.
inline DiscreteFunction superpose(std::span<const DiscreteFunction> fs) {
  if (fs.empty()) throw usage_error("superpose needs at least one function");
  const auto& alpha = fs.front().alphabet();
  const std::size_t m = fs.front().arity();
  for (const auto& f : fs) {
    if (f.arity() != m || !(f.alphabet() == alpha)) throw usage_error("superpose: shape mismatch");
  }
  std::vector<MultiValue> cells(fs.front().cells().begin(), fs.front().cells().end());
  for (std::size_t k = 1; k < fs.size(); ++k) {
    for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = mv_sum(cells[i], fs[k].cells()[i], alpha);
  }
  return DiscreteFunction(alpha, m, std::move(cells));
}

inline DiscreteFunction superpose(std::initializer_list<DiscreteFunction> fs) {
  return superpose(std::span<const DiscreteFunction>(fs.begin(), fs.size()));
}

/// Inserts an ignored variable at position `k` (1-based, up to arity+1).
inline DiscreteFunction add_false_variable(const DiscreteFunction& f, std::size_t k) {
  if (k < 1 || k > f.arity() + 1) {
    throw usage_error("false variable position " + std::to_string(k) + " out of range 1.." +
                      std::to_string(f.arity() + 1));
  }
  const std::size_t n = f.alphabet().size();
  const std::size_t inner = ipow(n, f.arity() + 1 - k);  // cells per value of the new variable
  std::vector<MultiValue> cells(f.size() * n);
  for (std::size_t flat = 0; flat < cells.size(); ++flat) {
    const std::size_t high = flat / (inner * n);
    const std::size_t low = flat % inner;
    cells[flat] = f.cells()[high * inner + low];
  }
  return DiscreteFunction(f.alphabet(), f.arity() + 1, std::move(cells));
}

inline bool depends_on(const DiscreteFunction& f, std::size_t k) {
  if (k < 1 || k > f.arity()) throw usage_error("variable position out of range");
  const std::size_t n = f.alphabet().size();
  const std::size_t stride = ipow(n, f.arity() - k);
  bool depends = false;
  for_each_point(n, f.arity(), [&](std::size_t flat, std::span<const Residue> args) {
    if (args[k - 1] != 0) {
      depends = depends || f.cells()[flat] != f.cells()[flat - args[k - 1] * stride];
    }
  });
  return depends;
}

/// Inverse of `add_false_variable`; the function must ignore variable `k`.
inline DiscreteFunction remove_false_variable(const DiscreteFunction& f, std::size_t k) {
  if (f.arity() < 2) throw usage_error("cannot remove the only variable");
  if (depends_on(f, k)) throw validation_error("variable " + std::to_string(k) + " is not a false variable");
  const std::size_t n = f.alphabet().size();
  const std::size_t stride = ipow(n, f.arity() - k);
  std::vector<MultiValue> cells(f.size() / n);
  for (std::size_t flat = 0; flat < cells.size(); ++flat) {
    const std::size_t high = flat / stride;
    const std::size_t low = flat % stride;
    cells[flat] = f.cells()[high * stride * n + low];
  }
  return DiscreteFunction(f.alphabet(), f.arity() - 1, std::move(cells));
}

}  // namespace dfun
