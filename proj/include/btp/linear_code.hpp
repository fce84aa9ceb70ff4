#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "btp/feature.hpp"

namespace btp {

/// Binary [n, k] linear code with bounded-distance decoding by exhaustive
/// nearest-codeword search. All 2^k codewords are tabulated at construction.
class LinearCode {
 public:
  static constexpr int kMaxMessageBits = 16;

  /// `generator` holds the k rows of the generator matrix. A negative `radius`
  /// selects the largest t with 2t + 1 <= d_min.
  LinearCode(std::vector<FeatureElement> generator, int radius = -1);

  /// The [7,4,3] Hamming code, t = 1.
  static LinearCode hamming74();
  static LinearCode from_rows(const std::vector<std::string>& rows, int radius = -1);

  int length() const { return n_; }
  int message_bits() const { return k_; }
  int min_distance() const { return min_distance_; }
  int radius() const { return radius_; }
  std::size_t size() const { return codewords_.size(); }
  const std::vector<FeatureElement>& generator() const { return generator_; }
  const std::vector<FeatureElement>& codewords() const { return codewords_; }

  FeatureElement encode(std::uint64_t message) const;
  bool is_codeword(const FeatureElement& y) const;

  /// The unique codeword within distance t of y, if any.
  std::optional<FeatureElement> decode(const FeatureElement& y) const;

 private:
  std::vector<FeatureElement> generator_;
  std::vector<FeatureElement> codewords_;
  int n_ = 0;
  int k_ = 0;
  int min_distance_ = 0;
  int radius_ = 0;
};

std::optional<FeatureElement> bounded_distance_decode(const LinearCode& code, const FeatureElement& y);

}  // namespace btp
