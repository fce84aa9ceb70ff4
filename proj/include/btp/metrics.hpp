#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "btp/exact.hpp"
#include "btp/population.hpp"
#include "btp/scheme.hpp"
#include "btp/stats.hpp"

namespace btp {

/// Shared knobs of every Monte Carlo estimator. Results depend only on
/// (inputs, seed, trials), never on `jobs`.
struct EstimatorOptions {
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  std::uint64_t query_budget = kDefaultQueryBudget;
  double confidence = 0.95;
  IntervalMethod interval = wilson_interval;
};

struct BaselineEstimates {
  AdvantageEstimate fnmr;
  AdvantageEstimate fmr;
};

/// FNMR_{d<=tau} over mated pairs and FMR_{d<=tau} over distinct-user pairs.
BaselineEstimates est_baseline_rates(const Population& pop, int tau, const EstimatorOptions& opts = {});

/// FNMR_Pi: probe x <- X_u against PT <- PIE(X_u) from an independent sample.
AdvantageEstimate est_scheme_fnmr(const BtpScheme& scheme, const Population& pop,
                                  const EstimatorOptions& opts = {});

enum class SecondFactor { kAD, kPI };

/// FMR^TP with the genuine user's AD (kAD: pi' of v against PIR(alpha_u, x_u))
/// or PI (kPI: pi_u against PIR(alpha'_v, x_u)).
AdvantageEstimate est_fmr_tp(const BtpScheme& scheme, const Population& pop, SecondFactor factor,
                             const EstimatorOptions& opts = {});

/// FMR^BP: impostor sample of u against PT <- PIE(X_v), v != u.
AdvantageEstimate est_fmr_bp(const BtpScheme& scheme, const Population& pop,
                             const EstimatorOptions& opts = {});

struct DiversityEstimate {
  AdvantageEstimate fmr;
  /// -log2 of the estimate; absent when the estimate is 0.
  std::optional<double> entropy_bits;
};

/// FMR^Div: probe with an old AD of u against a freshly enrolled PI of u.
DiversityEstimate est_fmr_div(const BtpScheme& scheme, const Population& pop,
                              const EstimatorOptions& opts = {});

/// -log2(rate), or nullopt when rate <= 0.
std::optional<double> diversity_entropy(double rate);

/// Monte Carlo MR_{d<=tau}(x) for any n.
AdvantageEstimate est_mr_of_feature(const Population& pop, const FeatureElement& x, int tau,
                                    const EstimatorOptions& opts = {});

/// rMR_Pi(x): Pr over PT <- PIE(X(U)) that PT accepts x.
AdvantageEstimate rmr_of_feature(const BtpScheme& scheme, const Population& pop, const FeatureElement& x,
                                 const EstimatorOptions& opts = {});

/// MR_Pi(pi, alpha): Pr over x' <- X(U) that the PT accepts x'.
AdvantageEstimate pt_match_rate(const BtpScheme& scheme, const Population& pop, const ProtectedTemplate& pt,
                                const EstimatorOptions& opts = {});

/// Monte Carlo P_tau(x) = Pr over x' <- X(U) of d(x, x') <= 2 tau.
AdvantageEstimate est_overlap_probability(const Population& pop, const FeatureElement& x, int tau,
                                          const EstimatorOptions& opts = {});

struct MatchRateStats {
  double mean = 0.0;
  double std_dev = 0.0;
  double variation_coeff = 0.0;

  /// MR_Pi - sigma / sqrt(delta); by Chebyshev at least a 1 - delta fraction
  /// of PTs have a match rate above it.
  double chebyshev_threshold(double delta) const;
};

/// Builds the triple; a zero mean leaves C undefined and throws UndefinedError.
MatchRateStats make_match_rate_stats(double mean, double std_dev);

struct MatchRateSample {
  MatchRateStats stats;
  Interval mean_ci;
  Interval std_dev_ci;
  std::uint64_t outer = 0;
  std::uint64_t inner = 0;
  std::uint64_t queries = 0;
  /// Estimated MR_Pi of each sampled PT, in trial order.
  std::vector<double> rates;

  double fraction_above(double threshold) const;
};

/// Draws `outer` PTs from PIE(X(U)) and rates each with `inner` probes.
///
/// sigma is the population SD of the per-PT rates with the inner binomial
/// noise removed from the variance, so it targets the SD of the true rates.
MatchRateSample pt_match_stats(const BtpScheme& scheme, const Population& pop, std::uint64_t outer,
                               std::uint64_t inner, const EstimatorOptions& opts = {});

struct Extremum {
  double value = 0.0;
  FeatureElement witness;
  /// Set when the maximum was taken over a candidate set only.
  bool lower_bound = false;
};

/// Candidate features sampled in approximate mode besides the centers.
inline constexpr std::size_t kCandidateSamples = 64;

/// m_{d<=tau} with its witness: full scan for n <= 12, candidate set otherwise.
Extremum extremal_mr(const Population& pop, int tau, const EstimatorOptions& opts = {});

/// m_Pi with its witness: exact model when it applies, candidate set otherwise.
Extremum extremal_rmr(const BtpScheme& scheme, const Population& pop, const EstimatorOptions& opts = {});

/// Whether ExactModel accepts this (scheme, population) pair.
bool exact_model_applies(const BtpScheme& scheme, const Population& pop);

}  // namespace btp
