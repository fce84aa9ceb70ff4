#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "btp/feature.hpp"
#include "btp/random.hpp"

namespace btp {

/// 128-bit digest used as an opaque pseudonymous identifier.
struct Digest128 {
  std::array<std::uint8_t, 16> bytes{};
  friend auto operator<=>(const Digest128&, const Digest128&) = default;
};

/// Reserved verification identifier returned by PIR when it cannot rebuild a
/// codeword. It never matches anything, including itself.
struct RejectId {
  friend auto operator<=>(const RejectId&, const RejectId&) = default;
};

/// Enrollment PI (pi) and verification PI (pi'). The verification space is the
/// enrollment space plus the reject value.
using Identifier = std::variant<FeatureElement, Digest128, RejectId>;

struct NoAux {
  friend auto operator<=>(const NoAux&, const NoAux&) = default;
};

/// Auxiliary data: empty, a helper bit string, or a small integer key.
using AuxData = std::variant<NoAux, FeatureElement, std::uint32_t>;

struct ProtectedTemplate {
  Identifier pi;
  AuxData alpha;
  friend auto operator<=>(const ProtectedTemplate&, const ProtectedTemplate&) = default;
};

enum class Decision { kNonMatch, kMatch };

/// Nonempty subset of {PI, AD}.
class LambdaSet {
 public:
  LambdaSet(bool pi, bool ad);

  static LambdaSet pi_only() { return {true, false}; }
  static LambdaSet ad_only() { return {false, true}; }
  static LambdaSet both() { return {true, true}; }
  /// "pi", "ad" or "pi+ad" (also accepts "ad+pi").
  static LambdaSet parse(const std::string& text);

  bool has_pi() const { return pi_; }
  bool has_ad() const { return ad_; }
  bool is_full() const { return pi_ && ad_; }
  std::string to_string() const;

  friend bool operator==(const LambdaSet&, const LambdaSet&) = default;

 private:
  bool pi_;
  bool ad_;
};

/// The Lambda-subset of a PT as handed to an adversary.
struct LambdaView {
  std::optional<Identifier> pi;
  std::optional<AuxData> alpha;
  friend bool operator==(const LambdaView&, const LambdaView&) = default;
};

LambdaView lambda_project(const ProtectedTemplate& pt, const LambdaSet& lambda);
/// Projection of an existing view; a field requested but absent is a contract error.
LambdaView lambda_project(const LambdaView& view, const LambdaSet& lambda);

/// A BTP algorithm: PIE (randomized), PIR and PIC (deterministic).
///
/// PIE randomness is a uniform index in [0, randomness_size()), which makes the
/// output distribution enumerable for the exact oracles.
class BtpScheme {
 public:
  virtual ~BtpScheme() = default;

  virtual std::string name() const = 0;
  virtual int dimension() const = 0;
  virtual std::uint64_t randomness_size() const = 0;

  /// PIE with its randomness fixed to `r`.
  virtual ProtectedTemplate encode_with(const FeatureElement& x, std::uint64_t r) const = 0;
  /// PIR.
  virtual Identifier recover(const AuxData& alpha, const FeatureElement& probe) const = 0;
  /// PIC.
  virtual Decision compare(const Identifier& pi, const Identifier& pi_prime) const = 0;

  /// Whether the scheme promises d(x, x') <= tau => match.
  virtual bool threshold_compatible(int tau) const = 0;

  /// PIE.
  ProtectedTemplate encode(const FeatureElement& x, Rng& rng) const {
    return encode_with(x, uniform_below(rng, randomness_size()));
  }

  /// PIC(pi, PIR(alpha, probe)) == match.
  bool accepts(const ProtectedTemplate& pt, const FeatureElement& probe) const {
    return compare(pt.pi, recover(pt.alpha, probe)) == Decision::kMatch;
  }

  /// Whether some PIE randomness maps x to a template whose Lambda-subset is `view`.
  bool consistent(const LambdaView& view, const LambdaSet& lambda, const FeatureElement& x) const;

 protected:
  void check_probe(const FeatureElement& x) const;
};

std::string to_string(const Identifier& id);
std::string to_string(const AuxData& alpha);
std::uint64_t fingerprint(const Identifier& id);
std::uint64_t fingerprint(const AuxData& alpha);

}  // namespace btp
