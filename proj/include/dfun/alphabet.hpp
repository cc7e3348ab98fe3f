#pragma once

// Finite alphabets with cyclic addition, and the multi-value cell type.
//
// Arithmetic always happens on residues 0..N-1. Labels exist only for
// parsing and printing; for N=3 the labels are -1, 0, 1 with -1 bound to
// residue 2, so that -1 + -1 = 1.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dfun/error.hpp"

namespace dfun {

using Residue = std::uint8_t;

inline constexpr std::size_t max_alphabet_size = 32;

class Alphabet {
 public:
  /// Labels -1,0,1 for N=3, otherwise 0..N-1.
  static Alphabet standard(std::size_t n) {
    if (n == 3) return from_labels({"-1", "0", "1"}, {2, 0, 1});
    std::vector<std::string> labels;
    std::vector<Residue> residues;
    for (std::size_t i = 0; i < n; ++i) {
      labels.push_back(std::to_string(i));
      residues.push_back(static_cast<Residue>(i));
    }
    return from_labels(std::move(labels), std::move(residues));
  }

  /// The three-symbol alphabet whose symbols denote unary functions: -e, o, e.
  static Alphabet operators() { return from_labels({"-e", "o", "e"}, {2, 0, 1}); }

  /// `labels` are given in display (ascending) order, `residues[i]` is the
  /// residue bound to `labels[i]`.
  static Alphabet from_labels(std::vector<std::string> labels, std::vector<Residue> residues) {
    const std::size_t n = labels.size();
    if (n < 2 || n > max_alphabet_size) {
      throw usage_error("alphabet size must be in [2, " + std::to_string(max_alphabet_size) + "]");
    }
    if (residues.size() != n) throw usage_error("alphabet needs one residue per label");
    auto data = std::make_shared<Data>();
    data->labels_by_residue.resize(n);
    std::vector<bool> seen(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      const Residue r = residues[i];
      if (r >= n || seen[r]) throw usage_error("alphabet residues must be a permutation of 0..N-1");
      seen[r] = true;
      if (labels[i].empty()) throw usage_error("alphabet labels must be non-empty");
      for (std::size_t j = 0; j < i; ++j) {
        if (labels[j] == labels[i]) throw usage_error("duplicate alphabet label '" + labels[i] + "'");
      }
      data->labels_by_residue[r] = labels[i];
    }
    data->display_order = std::move(residues);
    return Alphabet(std::move(data));
  }

  std::size_t size() const noexcept { return data_->display_order.size(); }

  std::string_view label(Residue r) const { return data_->labels_by_residue.at(r); }

  std::optional<Residue> find(std::string_view label) const {
    const auto& labels = data_->labels_by_residue;
    for (std::size_t r = 0; r < labels.size(); ++r) {
      if (labels[r] == label) return static_cast<Residue>(r);
    }
    return std::nullopt;
  }

  /// Residues in ascending label order; this is the order used by every text format.
  std::span<const Residue> display_order() const noexcept { return data_->display_order; }

  /// Position of `r` in display order.
  std::size_t display_position(Residue r) const {
    const auto& order = data_->display_order;
    return static_cast<std::size_t>(std::find(order.begin(), order.end(), r) - order.begin());
  }

  Residue add(Residue a, Residue b) const noexcept {
    return static_cast<Residue>((a + b) % size());
  }
  Residue zero() const noexcept { return 0; }
  Residue one() const noexcept { return 1; }
  Residue minus_one() const noexcept { return static_cast<Residue>(size() - 1); }

  bool operator==(const Alphabet& other) const {
    return data_ == other.data_ || (data_->display_order == other.data_->display_order &&
                                    data_->labels_by_residue == other.data_->labels_by_residue);
  }

 private:
  struct Data {
    std::vector<Residue> display_order;
    std::vector<std::string> labels_by_residue;
  };

  explicit Alphabet(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

  std::shared_ptr<const Data> data_;
};

/// A subset of an alphabet's residues held as a bit set. The empty set is the
/// no-valued cell.
class MultiValue {
 public:
  constexpr MultiValue() = default;

  static constexpr MultiValue empty() { return MultiValue(); }
  static constexpr MultiValue single(Residue r) { return MultiValue(std::uint32_t{1} << r); }
  static constexpr MultiValue from_bits(std::uint32_t bits) { return MultiValue(bits); }
  static constexpr MultiValue full(std::size_t n) {
    return MultiValue(n >= 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << n) - 1);
  }

  constexpr std::uint32_t bits() const noexcept { return bits_; }
  constexpr bool is_empty() const noexcept { return bits_ == 0; }
  constexpr bool is_singleton() const noexcept { return std::has_single_bit(bits_); }
  constexpr std::size_t size() const noexcept { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool contains(Residue r) const noexcept { return (bits_ >> r) & 1u; }
  constexpr bool subset_of(MultiValue other) const noexcept { return (bits_ & ~other.bits_) == 0; }

  /// Lowest residue; only meaningful for non-empty values.
  constexpr Residue first() const noexcept { return static_cast<Residue>(std::countr_zero(bits_)); }

  constexpr MultiValue with(Residue r) const noexcept { return MultiValue(bits_ | (std::uint32_t{1} << r)); }

  friend constexpr MultiValue operator|(MultiValue a, MultiValue b) noexcept { return MultiValue(a.bits_ | b.bits_); }
  friend constexpr MultiValue operator&(MultiValue a, MultiValue b) noexcept { return MultiValue(a.bits_ & b.bits_); }
  MultiValue& operator|=(MultiValue other) noexcept {
    bits_ |= other.bits_;
    return *this;
  }

  friend constexpr bool operator==(MultiValue, MultiValue) = default;

  template <class F>
  constexpr void for_each(F&& f) const {
    for (std::uint32_t rest = bits_; rest != 0; rest &= rest - 1) {
      f(static_cast<Residue>(std::countr_zero(rest)));
    }
  }

 private:
  explicit constexpr MultiValue(std::uint32_t bits) : bits_(bits) {}

  std::uint32_t bits_ = 0;
};

inline bool fits(MultiValue v, const Alphabet& alpha) {
  return v.subset_of(MultiValue::full(alpha.size()));
}

inline Residue element_sum(Residue a, Residue b, const Alphabet& alpha) {
  if (a >= alpha.size() || b >= alpha.size()) throw usage_error("element outside alphabet");
  return alpha.add(a, b);
}

/// Cyclic rotation of the bit set by `shift` inside an n-bit window.
inline MultiValue shifted(MultiValue v, Residue shift, std::size_t n) {
  if (shift == 0) return v;
  const std::uint32_t mask = MultiValue::full(n).bits();
  const std::uint32_t b = v.bits();
  return MultiValue::from_bits(((b << shift) | (b >> (n - shift))) & mask);
}

/// Minkowski sum; the empty value absorbs.
inline MultiValue mv_sum(MultiValue a, MultiValue b, const Alphabet& alpha) {
  if (!fits(a, alpha) || !fits(b, alpha)) throw usage_error("multi-value is not over this alphabet");
  if (a.is_empty() || b.is_empty()) return MultiValue::empty();
  MultiValue out;
  const std::size_t n = alpha.size();
  a.for_each([&](Residue r) { out |= shifted(b, r, n); });
  return out;
}

/// Fold with `mv_sum`; the empty collection sums to {0}.
inline MultiValue mv_sum(std::span<const MultiValue> values, const Alphabet& alpha) {
  MultiValue acc = MultiValue::single(alpha.zero());
  for (MultiValue v : values) acc = mv_sum(acc, v, alpha);
  return acc;
}

/// `N` for the empty value, otherwise labels in ascending label order joined by `*`.
inline std::string format_value(MultiValue v, const Alphabet& alpha) {
  if (v.is_empty()) return "N";
  std::string out;
  for (Residue r : alpha.display_order()) {
    if (!v.contains(r)) continue;
    if (!out.empty()) out += '*';
    out += alpha.label(r);
  }
  return out;
}

/// Inverse of `format_value`. Accepts members in any order; rejects duplicates.
inline std::optional<MultiValue> parse_value(std::string_view text, const Alphabet& alpha) {
  if (text == "N") return MultiValue::empty();
  MultiValue out;
  while (true) {
    const auto star = text.find('*');
    const auto part = text.substr(0, star);
    const auto r = alpha.find(part);
    if (!r || out.contains(*r)) return std::nullopt;
    out = out.with(*r);
    if (star == std::string_view::npos) break;
    text.remove_prefix(star + 1);
  }
  return out;
}

}  // namespace dfun
