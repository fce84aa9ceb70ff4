#include "btp/feature.hpp"

namespace btp {

FeatureElement::FeatureElement(std::uint64_t bits, int dimension)
    : bits_(bits), dimension_(dimension) {
  if (dimension < 1 || dimension > kMaxDimension) {
    throw DimensionError("feature dimension must be in [1, 64], got " + std::to_string(dimension));
  }
  if ((bits & ~dimension_mask(dimension)) != 0) {
    throw DimensionError("feature bits exceed dimension " + std::to_string(dimension));
  }
}

FeatureElement FeatureElement::from_string(std::string_view text) {
  if (text.empty() || text.size() > kMaxDimension) {
    throw DimensionError("bitstring length must be in [1, 64]");
  }
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '1') {
      bits |= std::uint64_t{1} << i;
    } else if (text[i] != '0') {
      throw ConfigError("bitstring may only contain '0' and '1': " + std::string(text));
    }
  }
  return FeatureElement(bits, static_cast<int>(text.size()));
}

std::string FeatureElement::to_string() const {
  std::string out(static_cast<std::size_t>(dimension_), '0');
  for (int i = 0; i < dimension_; ++i) {
    if (bit(i)) out[static_cast<std::size_t>(i)] = '1';
  }
  return out;
}

FeatureElement FeatureElement::rotated(int offset) const {
  const int n = dimension_;
  const int shift = ((offset % n) + n) % n;
  if (shift == 0) return *this;
  const std::uint64_t mask = dimension_mask(n);
  const std::uint64_t out = ((bits_ << shift) | (bits_ >> (n - shift))) & mask;
  return FeatureElement(out, n);
}

FeatureElement FeatureElement::operator^(const FeatureElement& other) const {
  require_same_dimension(*this, other);
  return FeatureElement(bits_ ^ other.bits_, dimension_);
}

void require_same_dimension(const FeatureElement& a, const FeatureElement& b) {
  if (a.dimension() != b.dimension()) {
    throw DimensionError("dimension mismatch: " + std::to_string(a.dimension()) + " vs " +
                         std::to_string(b.dimension()));
  }
}

int hamming_distance(const FeatureElement& a, const FeatureElement& b) {
  require_same_dimension(a, b);
  return std::popcount(a.bits() ^ b.bits());
}

}  // namespace btp
