#pragma once

#include <cstdint>
#include <optional>

namespace btp {

struct Interval {
  double low = 0.0;
  double high = 0.0;
  double half_width() const { return 0.5 * (high - low); }
  bool contains(double v) const { return low <= v && v <= high; }
};

/// Two-sided standard normal quantile for the given confidence, e.g. 0.95 -> 1.959964.
double normal_quantile(double confidence);

/// Wilson score interval for `successes` out of `trials`.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z);
/// Normal-approximation (Wald) interval, clamped to [0, 1].
Interval wald_interval(std::uint64_t successes, std::uint64_t trials, double z);

using IntervalMethod = Interval (*)(std::uint64_t, std::uint64_t, double);

/// A probability or advantage estimate with its 95% (by default) interval.
struct AdvantageEstimate {
  double point = 0.0;
  std::uint64_t trials = 0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t queries_used = 0;
  /// Binomial standard error of the underlying proportion, scaled like `point`.
  double std_error = 0.0;
  std::optional<double> exact;

  Interval ci() const { return {ci_low, ci_high}; }
};

/// Rate estimate for `successes` out of `trials`.
AdvantageEstimate proportion_estimate(std::uint64_t successes, std::uint64_t trials,
                                      double confidence = 0.95,
                                      IntervalMethod method = wilson_interval);

/// Shifts a rate estimate by a constant baseline: advantage = rate - baseline.
AdvantageEstimate shifted(const AdvantageEstimate& rate, double baseline);

/// Maps a win-rate estimate through r -> |2r - 1|.
AdvantageEstimate distinguishing_advantage(const AdvantageEstimate& win_rate);

/// sqrt(r (1 - r) / N).
double binomial_std_error(double rate, std::uint64_t trials);

}  // namespace btp
