#pragma once

// Seeded generators for property checks. Modulo mapping on mt19937_64 keeps the
// streams identical across standard libraries.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "dfun/alphabet.hpp"
#include "dfun/function.hpp"

namespace dfun {

enum class CellKind {
  single,   // exactly one element
  partial,  // at most one element
  multi,    // any subset, empty included
};

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  std::size_t below(std::size_t bound) { return static_cast<std::size_t>(rng_() % bound); }

  MultiValue value(const Alphabet& alpha, CellKind kind) {
    const std::size_t n = alpha.size();
    switch (kind) {
      case CellKind::single:
        return MultiValue::single(static_cast<Residue>(below(n)));
      case CellKind::partial: {
        const std::size_t pick = below(n + 1);
        return pick == n ? MultiValue::empty() : MultiValue::single(static_cast<Residue>(pick));
      }
      case CellKind::multi:
        return MultiValue::from_bits(static_cast<std::uint32_t>(rng_() & MultiValue::full(n).bits()));
    }
    return MultiValue::empty();
  }

  DiscreteFunction function(const Alphabet& alpha, std::size_t arity, CellKind kind) {
    std::vector<MultiValue> cells(ipow(alpha.size(), arity));
    for (auto& c : cells) c = value(alpha, kind);
    return DiscreteFunction(alpha, arity, std::move(cells));
  }

 private:
  std::mt19937_64 rng_;
};

/// Every unary function whose cells are of `kind`, in a fixed order.
inline std::vector<DiscreteFunction> all_unary(const Alphabet& alpha, CellKind kind) {
  const std::size_t n = alpha.size();
  std::vector<MultiValue> choices;
  if (kind == CellKind::multi) {
    for (std::uint32_t bits = 0; bits < (std::uint32_t{1} << n); ++bits) choices.push_back(MultiValue::from_bits(bits));
  } else {
    for (Residue r = 0; r < n; ++r) choices.push_back(MultiValue::single(r));
    if (kind == CellKind::partial) choices.push_back(MultiValue::empty());
  }
  const std::size_t count = ipow(choices.size(), n);
  std::vector<DiscreteFunction> out;
  out.reserve(count);
  for (std::size_t code = 0; code < count; ++code) {
    std::vector<MultiValue> cells(n);
    std::size_t rest = code;
    for (std::size_t x = 0; x < n; ++x) {
      cells[x] = choices[rest % choices.size()];
      rest /= choices.size();
    }
    out.emplace_back(alpha, 1, std::move(cells));
  }
  return out;
}

}  // namespace dfun
