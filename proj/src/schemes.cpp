#include "btp/schemes.hpp"

#include <sodium.h>

#include <array>
#include <stdexcept>

#include "btp/errors.hpp"

namespace btp {

Digest128 blake2b_128(std::span<const std::uint8_t> data) {
  static const bool ready = sodium_init() >= 0;
  if (!ready) throw std::runtime_error("libsodium initialisation failed");
  Digest128 out;
  crypto_generichash(out.bytes.data(), out.bytes.size(), data.data(), data.size(), nullptr, 0);
  return out;
}

// ---------------------------------------------------------------------------
// Fuzzy commitment

FuzzyCommitment::FuzzyCommitment(LinearCode code, DigestFunction hash)
    : code_(std::move(code)), hash_(std::move(hash)) {
  if (!hash_) throw ConfigError("fuzzy commitment needs a digest function");
}

Digest128 FuzzyCommitment::digest(const FeatureElement& codeword) const {
  std::array<std::uint8_t, 9> buf{};
  for (int i = 0; i < 8; ++i) buf[static_cast<std::size_t>(i)] = (codeword.bits() >> (8 * i)) & 0xff;
  buf[8] = static_cast<std::uint8_t>(codeword.dimension());
  return hash_(buf);
}

ProtectedTemplate FuzzyCommitment::encode_with(const FeatureElement& x, std::uint64_t r) const {
  check_probe(x);
  const FeatureElement w = code_.encode(r);
  return {digest(w), x ^ w};
}

Identifier FuzzyCommitment::recover(const AuxData& alpha, const FeatureElement& probe) const {
  check_probe(probe);
  const auto* helper = std::get_if<FeatureElement>(&alpha);
  if (helper == nullptr || helper->dimension() != dimension()) {
    throw ContractError("fuzzy commitment AD must be a helper string of the code length");
  }
  const auto w = code_.decode(probe ^ *helper);
  if (!w) return RejectId{};
  return digest(*w);
}

Decision FuzzyCommitment::compare(const Identifier& pi, const Identifier& pi_prime) const {
  const auto* a = std::get_if<Digest128>(&pi);
  const auto* b = std::get_if<Digest128>(&pi_prime);
  return (a != nullptr && b != nullptr && *a == *b) ? Decision::kMatch : Decision::kNonMatch;
}

// ---------------------------------------------------------------------------
// Rotation

namespace {

Decision threshold_compare(const Identifier& pi, const Identifier& pi_prime, int threshold) {
  const auto* a = std::get_if<FeatureElement>(&pi);
  const auto* b = std::get_if<FeatureElement>(&pi_prime);
  if (a == nullptr || b == nullptr || a->dimension() != b->dimension()) return Decision::kNonMatch;
  return hamming_distance(*a, *b) <= threshold ? Decision::kMatch : Decision::kNonMatch;
}

}  // namespace

RotationScheme::RotationScheme(int n, int threshold) : n_(n), threshold_(threshold) {
  if (n < 1 || n > kMaxDimension) throw ConfigError("rotation scheme needs 1 <= n <= 64");
  if (threshold < 0) throw ConfigError("rotation threshold must be nonnegative");
}

ProtectedTemplate RotationScheme::encode_with(const FeatureElement& x, std::uint64_t r) const {
  check_probe(x);
  if (r >= randomness_size()) throw ContractError("rotation offset out of range");
  return {x.rotated(static_cast<int>(r)), static_cast<std::uint32_t>(r)};
}

Identifier RotationScheme::recover(const AuxData& alpha, const FeatureElement& probe) const {
  check_probe(probe);
  const auto* offset = std::get_if<std::uint32_t>(&alpha);
  if (offset == nullptr) throw ContractError("rotation AD must be an offset");
  return probe.rotated(static_cast<int>(*offset));
}

Decision RotationScheme::compare(const Identifier& pi, const Identifier& pi_prime) const {
  return threshold_compare(pi, pi_prime, threshold_);
}

// ---------------------------------------------------------------------------
// Plaintext

PlaintextScheme::PlaintextScheme(int n, int threshold) : n_(n), threshold_(threshold) {
  if (n < 1 || n > kMaxDimension) throw ConfigError("plaintext scheme needs 1 <= n <= 64");
  if (threshold < 0) throw ConfigError("plaintext threshold must be nonnegative");
}

ProtectedTemplate PlaintextScheme::encode_with(const FeatureElement& x, std::uint64_t) const {
  check_probe(x);
  return {x, NoAux{}};
}

Identifier PlaintextScheme::recover(const AuxData&, const FeatureElement& probe) const {
  check_probe(probe);
  return probe;
}

Decision PlaintextScheme::compare(const Identifier& pi, const Identifier& pi_prime) const {
  return threshold_compare(pi, pi_prime, threshold_);
}

// ---------------------------------------------------------------------------
// Constant comparators

ConstantScheme::ConstantScheme(int n, Decision decision) : n_(n), decision_(decision) {
  if (n < 1 || n > kMaxDimension) throw ConfigError("scheme needs 1 <= n <= 64");
}

std::string ConstantScheme::name() const {
  return decision_ == Decision::kMatch ? "always-match" : "never-match";
}

ProtectedTemplate ConstantScheme::encode_with(const FeatureElement& x, std::uint64_t) const {
  check_probe(x);
  return {x, NoAux{}};
}

Identifier ConstantScheme::recover(const AuxData&, const FeatureElement& probe) const {
  check_probe(probe);
  return probe;
}

// ---------------------------------------------------------------------------

std::unique_ptr<BtpScheme> make_scheme(const SchemeConfig& config) {
  if (config.name == "fc") {
    if (!config.generator.empty()) {
      auto code = LinearCode::from_rows(config.generator, config.code_radius);
      if (code.length() != config.n || code.message_bits() != config.code_k) {
        throw ConfigError("generator shape differs from the configured [n, k]");
      }
      return std::make_unique<FuzzyCommitment>(std::move(code));
    }
    if (config.n == 7 && config.code_k == 4) {
      auto rows = LinearCode::hamming74().generator();
      return std::make_unique<FuzzyCommitment>(LinearCode(rows, config.code_radius));
    }
    throw ConfigError("fc with [" + std::to_string(config.n) + ", " + std::to_string(config.code_k) +
                      "] needs an explicit generator matrix");
  }
  if (config.name == "rot") return std::make_unique<RotationScheme>(config.n, config.threshold);
  if (config.name == "plain") return std::make_unique<PlaintextScheme>(config.n, config.threshold);
  if (config.name == "always-match") return std::make_unique<ConstantScheme>(config.n, Decision::kMatch);
  if (config.name == "never-match") return std::make_unique<ConstantScheme>(config.n, Decision::kNonMatch);
  throw ConfigError("unknown scheme '" + config.name + "'");
}

std::vector<std::string> scheme_names() {
  return {"fc", "rot", "plain", "always-match", "never-match"};
}

}  // namespace btp
