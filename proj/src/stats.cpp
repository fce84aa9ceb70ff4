#include "btp/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/normal.hpp>

#include "btp/errors.hpp"

namespace btp {

double normal_quantile(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw ConfigError("confidence level must lie in (0, 1)");
  }
  return boost::math::quantile(boost::math::normal(), 0.5 + confidence / 2.0);
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (phat + z2 / (2 * n)) / denom;
  const double half = z * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n)) / denom;
  return {std::max(0.0, std::min(centre - half, phat)), std::min(1.0, std::max(centre + half, phat))};
}

Interval wald_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double half = z * std::sqrt(phat * (1 - phat) / n);
  return {std::max(0.0, phat - half), std::min(1.0, phat + half)};
}

double binomial_std_error(double rate, std::uint64_t trials) {
  if (trials == 0) return 0.0;
  return std::sqrt(std::max(0.0, rate * (1 - rate)) / static_cast<double>(trials));
}

AdvantageEstimate proportion_estimate(std::uint64_t successes, std::uint64_t trials,
                                      double confidence, IntervalMethod method) {
  if (successes > trials) throw ContractError("successes exceed trials");
  AdvantageEstimate est;
  est.trials = trials;
  est.point = trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials);
  const Interval ci = method(successes, trials, normal_quantile(confidence));
  est.ci_low = ci.low;
  est.ci_high = ci.high;
  est.std_error = binomial_std_error(est.point, trials);
  return est;
}

AdvantageEstimate shifted(const AdvantageEstimate& rate, double baseline) {
  AdvantageEstimate out = rate;
  out.point -= baseline;
  out.ci_low -= baseline;
  out.ci_high -= baseline;
  if (out.exact) *out.exact -= baseline;
  return out;
}

AdvantageEstimate distinguishing_advantage(const AdvantageEstimate& win_rate) {
  AdvantageEstimate out = win_rate;
  auto fold = [](double r) { return std::abs(2 * r - 1); };
  out.point = fold(win_rate.point);
  const double lo = fold(win_rate.ci_low);
  const double hi = fold(win_rate.ci_high);
  if (win_rate.ci_low <= 0.5 && 0.5 <= win_rate.ci_high) {
    out.ci_low = 0.0;
    out.ci_high = std::max(lo, hi);
  } else {
    out.ci_low = std::min(lo, hi);
    out.ci_high = std::max(lo, hi);
  }
  out.std_error = 2 * win_rate.std_error;
  if (out.exact) *out.exact = fold(*win_rate.exact);
  return out;
}

}  // namespace btp
