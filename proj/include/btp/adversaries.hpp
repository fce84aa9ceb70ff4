#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "btp/games.hpp"
#include "btp/metrics.hpp"

namespace btp {

/// Parameters of the repeated-sampling PAL adversary.
struct PalSamplerConfig {
  double delta = 0.16;
  double gamma = 0.5;
  /// mu = MR_Pi - sigma / sqrt(delta)
  double mu = 0.0;
  /// Smallest N with (1 - mu)^N < (gamma - delta) / (1 - delta).
  std::uint64_t n_delta = 0;

  /// Validates C^2 < delta < gamma < 1 and 0 < mu < 1. Throws
  /// VariationError when delta <= C^2 and ConfigError otherwise.
  static PalSamplerConfig make(double delta, double gamma, const MatchRateStats& stats);
};

/// Raised when the measured variation coefficient leaves no admissible delta.
class VariationError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Smallest N >= 1 with (1 - mu)^N < target.
std::uint64_t sampler_repetitions(double mu, double target);

/// Ignores the view and answers a fixed feature element (the argmax of
/// MR_{d<=tau} or rMR_Pi).
IrrFactory blind_argmax_adversary(const Extremum& target);

/// Draws x' <- Samp(v) for uniform v up to N_delta times and returns the first
/// x' the leaked PT accepts, else the last draw. Needs Lambda = {PI, AD}.
IrrFactory pal_sampler_adversary(const PalSamplerConfig& cfg);

/// Samples x, x0, x1 from three uniform users; answers 0 if PT' rejects x1,
/// else 1 if PT' rejects x0, else a coin flip. Needs Lambda = {PI, AD}.
UnlinkFactory unlink_match_adversary();

using CrossRuleFn = std::function<int(const BtpScheme& scheme, const LambdaView& view, const LambdaView& view_prime,
                                      const UnlinkChoice& choice, Rng& coins)>;

struct CrossRule {
  std::string name;
  CrossRuleFn decide;
};

/// "pic-threshold" (default), "always-0" or "always-1".
CrossRule cross_rule(const std::string& name);

/// Samples u twice and v != u once, then applies `rule` to the two views.
UnlinkFactory cross_comparator_adversary(CrossRule rule = cross_rule("pic-threshold"));

/// Turns an AL_tau inverter into an UNLINK adversary: invert PT' and answer
/// the side whose tau-ball contains the guess; coin flip when the balls of x0
/// and x1 intersect or neither contains it.
UnlinkFactory reduction_unlink_adversary(IrrFactory inner, int tau);

/// Returns the PI when it is a feature element (plaintext-like schemes).
IrrFactory read_pi_adversary();
/// Returns the AD when it is a feature element (e.g. the fuzzy-commitment offset).
IrrFactory read_alpha_adversary();
/// Draws from X(U) until a sample is consistent with the view (at most
/// `tries` draws), returning the last draw otherwise.
IrrFactory view_sampler_adversary(std::uint64_t tries = 64);
/// Samples three uniform users and guesses with a fair coin.
UnlinkFactory coin_flip_adversary();

/// Everything a registry lookup may need to build an adversary.
struct AdversaryContext {
  const BtpScheme* scheme = nullptr;
  const Population* population = nullptr;
  GameKind game = GameKind::kAlIrr;
  LambdaSet lambda = LambdaSet::both();
  int tau = 1;
  double delta = 0.16;
  double gamma = 0.5;
  std::uint64_t seed = 1;
  /// Overrides the measured MR_Pi statistics for pal-sampler.
  std::optional<MatchRateStats> stats;
};

/// Irreversibility adversaries: "blind", "pal-sampler", "read-pi", "read-alpha",
/// "view-sampler". Throws ConfigError for unknown names or unsupported Lambda.
IrrFactory make_irr_adversary(const std::string& name, const AdversaryContext& ctx);

/// Unlinkability adversaries: "appendix-b", "cross-comparator",
/// "cross-comparator(rule=...)", "coin-flip", "reduction(inner=...)".
UnlinkFactory make_unlink_adversary(const std::string& name, const AdversaryContext& ctx);

std::vector<std::string> irr_adversary_names();
std::vector<std::string> unlink_adversary_names();

/// MR_Pi, sigma and C from the exact model when it applies, otherwise from
/// pt_match_stats with 2000 x 500 draws.
MatchRateStats scheme_match_rate_stats(const BtpScheme& scheme, const Population& pop,
                                       const EstimatorOptions& opts = {});

}  // namespace btp
