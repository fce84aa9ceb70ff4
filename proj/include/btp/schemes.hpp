#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "btp/linear_code.hpp"
#include "btp/scheme.hpp"

namespace btp {

using DigestFunction = std::function<Digest128(std::span<const std::uint8_t>)>;

/// BLAKE2b with a 16-byte output (libsodium).
Digest128 blake2b_128(std::span<const std::uint8_t> data);

/// Fuzzy commitment over a binary linear code.
///
/// PIE draws a uniform codeword w and returns (H(w), x ^ w). PIR decodes
/// x' ^ alpha and hashes the result; a decoding failure yields RejectId.
/// PIC is equality of two non-reject identifiers.
class FuzzyCommitment final : public BtpScheme {
 public:
  explicit FuzzyCommitment(LinearCode code, DigestFunction hash = blake2b_128);

  std::string name() const override { return "fc"; }
  int dimension() const override { return code_.length(); }
  std::uint64_t randomness_size() const override { return code_.size(); }
  ProtectedTemplate encode_with(const FeatureElement& x, std::uint64_t r) const override;
  Identifier recover(const AuxData& alpha, const FeatureElement& probe) const override;
  Decision compare(const Identifier& pi, const Identifier& pi_prime) const override;
  bool threshold_compatible(int tau) const override { return tau <= code_.radius(); }

  const LinearCode& code() const { return code_; }
  Digest128 digest(const FeatureElement& codeword) const;

 private:
  LinearCode code_;
  DigestFunction hash_;
};

/// Cancelable transform by cyclic rotation. The key is the offset, stored as AD.
class RotationScheme final : public BtpScheme {
 public:
  RotationScheme(int n, int threshold);

  std::string name() const override { return "rot"; }
  int dimension() const override { return n_; }
  std::uint64_t randomness_size() const override { return static_cast<std::uint64_t>(n_); }
  ProtectedTemplate encode_with(const FeatureElement& x, std::uint64_t r) const override;
  Identifier recover(const AuxData& alpha, const FeatureElement& probe) const override;
  Decision compare(const Identifier& pi, const Identifier& pi_prime) const override;
  bool threshold_compatible(int tau) const override { return tau <= threshold_; }

  int threshold() const { return threshold_; }

 private:
  int n_;
  int threshold_;
};

/// No protection: PI is the feature itself, comparison is d <= tau.
class PlaintextScheme final : public BtpScheme {
 public:
  PlaintextScheme(int n, int threshold);

  std::string name() const override { return "plain"; }
  int dimension() const override { return n_; }
  std::uint64_t randomness_size() const override { return 1; }
  ProtectedTemplate encode_with(const FeatureElement& x, std::uint64_t r) const override;
  Identifier recover(const AuxData& alpha, const FeatureElement& probe) const override;
  Decision compare(const Identifier& pi, const Identifier& pi_prime) const override;
  bool threshold_compatible(int tau) const override { return tau <= threshold_; }

  int threshold() const { return threshold_; }

 private:
  int n_;
  int threshold_;
};

/// Plaintext encoding with a constant comparator. "always-match" accepts
/// everything; "never-match" rejects everything, including the enrolled feature.
class ConstantScheme final : public BtpScheme {
 public:
  ConstantScheme(int n, Decision decision);

  std::string name() const override;
  int dimension() const override { return n_; }
  std::uint64_t randomness_size() const override { return 1; }
  ProtectedTemplate encode_with(const FeatureElement& x, std::uint64_t r) const override;
  Identifier recover(const AuxData& alpha, const FeatureElement& probe) const override;
  Decision compare(const Identifier&, const Identifier&) const override { return decision_; }
  bool threshold_compatible(int) const override { return decision_ == Decision::kMatch; }

 private:
  int n_;
  Decision decision_;
};

struct SchemeConfig {
  std::string name = "fc";
  /// Feature dimension; for "fc" it must equal the code length.
  int n = 7;
  int code_k = 4;
  /// Decoding radius; negative selects the maximum the code allows.
  int code_radius = -1;
  std::vector<std::string> generator;
  /// Comparator threshold for "rot" and "plain".
  int threshold = 1;
};

/// Registry keyed by "fc", "rot", "plain", "always-match", "never-match".
std::unique_ptr<BtpScheme> make_scheme(const SchemeConfig& config);
std::vector<std::string> scheme_names();

}  // namespace btp
