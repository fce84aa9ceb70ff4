#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "btp/errors.hpp"

namespace btp {

inline constexpr int kMaxDimension = 64;

/// A point of the Hamming cube {0,1}^n, n <= 64.
///
/// Bit i of the feature is bit i of `bits()`. The text form lists bit 0
/// first, so "0101100" has bits 1, 3 and 4 set.
class FeatureElement {
 public:
  constexpr FeatureElement() = default;
  FeatureElement(std::uint64_t bits, int dimension);

  static FeatureElement zeros(int dimension) { return FeatureElement(0, dimension); }
  static FeatureElement from_string(std::string_view text);

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr int dimension() const { return dimension_; }
  constexpr bool bit(int i) const { return ((bits_ >> i) & 1U) != 0; }
  constexpr int weight() const { return std::popcount(bits_); }

  std::string to_string() const;

  /// Cyclic shift: bit i of the result is bit (i - offset) mod n of this.
  FeatureElement rotated(int offset) const;

  FeatureElement operator^(const FeatureElement& other) const;

  friend constexpr bool operator==(const FeatureElement&, const FeatureElement&) = default;
  friend constexpr auto operator<=>(const FeatureElement&, const FeatureElement&) = default;

 private:
  std::uint64_t bits_ = 0;
  int dimension_ = 0;
};

/// Mask with the low `dimension` bits set.
constexpr std::uint64_t dimension_mask(int dimension) {
  return dimension >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << dimension) - 1;
}

/// Number of differing positions. Throws DimensionError on length mismatch.
int hamming_distance(const FeatureElement& a, const FeatureElement& b);

void require_same_dimension(const FeatureElement& a, const FeatureElement& b);

}  // namespace btp
