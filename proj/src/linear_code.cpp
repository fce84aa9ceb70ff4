#include "btp/linear_code.hpp"

#include <algorithm>

#include "btp/errors.hpp"

namespace btp {

LinearCode::LinearCode(std::vector<FeatureElement> generator, int radius)
    : generator_(std::move(generator)) {
  if (generator_.empty()) throw ConfigError("generator matrix has no rows");
  k_ = static_cast<int>(generator_.size());
  n_ = generator_.front().dimension();
  if (k_ > kMaxMessageBits) {
    throw ConfigError("message length " + std::to_string(k_) + " exceeds 16 bits");
  }
  if (k_ > n_) throw ConfigError("code dimension k exceeds length n");
  for (const auto& row : generator_) {
    if (row.dimension() != n_) throw ConfigError("generator rows differ in length");
  }
  const std::uint64_t count = std::uint64_t{1} << k_;
  codewords_.reserve(count);
  min_distance_ = n_ + 1;
  for (std::uint64_t m = 0; m < count; ++m) {
    std::uint64_t word = 0;
    for (int i = 0; i < k_; ++i) {
      if ((m >> i) & 1U) word ^= generator_[static_cast<std::size_t>(i)].bits();
    }
    codewords_.emplace_back(word, n_);
    if (m != 0) min_distance_ = std::min(min_distance_, codewords_.back().weight());
  }
  if (min_distance_ == 0) throw ConfigError("generator matrix is not of full rank");
  const int max_radius = (min_distance_ - 1) / 2;
  radius_ = radius < 0 ? max_radius : radius;
  if (radius_ > max_radius) {
    throw ConfigError("decoding radius " + std::to_string(radius_) +
                      " violates 2t + 1 <= d_min = " + std::to_string(min_distance_));
  }
}

LinearCode LinearCode::hamming74() {
  return from_rows({"1000110", "0100101", "0010011", "0001111"});
}

LinearCode LinearCode::from_rows(const std::vector<std::string>& rows, int radius) {
  std::vector<FeatureElement> generator;
  generator.reserve(rows.size());
  for (const auto& r : rows) generator.push_back(FeatureElement::from_string(r));
  return LinearCode(std::move(generator), radius);
}

FeatureElement LinearCode::encode(std::uint64_t message) const {
  if (message >= codewords_.size()) throw ContractError("message out of range");
  return codewords_[message];
}

bool LinearCode::is_codeword(const FeatureElement& y) const {
  if (y.dimension() != n_) throw DimensionError("word length differs from code length");
  return std::find(codewords_.begin(), codewords_.end(), y) != codewords_.end();
}

std::optional<FeatureElement> LinearCode::decode(const FeatureElement& y) const {
  if (y.dimension() != n_) throw DimensionError("word length differs from code length");
  for (const auto& w : codewords_) {
    if (std::popcount(w.bits() ^ y.bits()) <= radius_) return w;
  }
  return std::nullopt;
}

std::optional<FeatureElement> bounded_distance_decode(const LinearCode& code, const FeatureElement& y) {
  return code.decode(y);
}

}  // namespace btp
