#include "btp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "btp/errors.hpp"

namespace btp {

namespace {

// Distinct tags keep the streams of different metrics apart under one seed.
enum class Tag : std::uint64_t {
  kFnmrBaseline = 11,
  kFmrBaseline,
  kSchemeFnmr,
  kTpAd,
  kTpPi,
  kBp,
  kDiv,
  kMrFeature,
  kRmrFeature,
  kPtRate,
  kOverlap,
  kPtStats,
  kCandidates,
};

struct TrialOutcome {
  bool hit = false;
  std::uint64_t queries = 0;
};

// Runs `fn(oracle, coins)` once per trial with per-index streams and turns
// the hit count into a rate estimate.
template <typename Fn>
AdvantageEstimate count_hits(const Population& pop, const EstimatorOptions& opts, Tag tag, Fn&& fn) {
  if (opts.trials < 1) throw ConfigError("trials must be at least 1");
  const std::uint64_t base = derive_seed(opts.seed, static_cast<std::uint64_t>(tag), Stream::kEstimator);
  auto outcomes = run_indexed<TrialOutcome>(opts.trials, opts.jobs, [&](std::uint64_t i) {
    SamplingOracle oracle(pop, make_rng(base, i, Stream::kChallengerOracle), opts.query_budget);
    Rng coins = make_rng(base, i, Stream::kEncoder);
    const bool hit = fn(oracle, coins);
    return TrialOutcome{hit, oracle.queries()};
  });
  std::uint64_t hits = 0;
  std::uint64_t queries = 0;
  for (const auto& o : outcomes) {
    hits += o.hit ? 1 : 0;
    queries += o.queries;
  }
  AdvantageEstimate est = proportion_estimate(hits, opts.trials, opts.confidence, opts.interval);
  est.queries_used = queries;
  return est;
}

std::size_t uniform_user(const Population& pop, Rng& rng) { return uniform_below(rng, pop.size()); }

// (u, v) uniform over ordered pairs of distinct users.
std::pair<std::size_t, std::size_t> distinct_pair(const Population& pop, Rng& rng) {
  if (pop.size() < 2) throw ConfigError("distinct-user metrics need U >= 2");
  const std::size_t u = uniform_below(rng, pop.size());
  std::size_t v = uniform_below(rng, pop.size() - 1);
  if (v >= u) ++v;
  return {u, v};
}

void require_match(const BtpScheme& scheme, const Population& pop) {
  if (scheme.dimension() != pop.dimension()) {
    throw DimensionError("scheme and population dimensions differ");
  }
}

}  // namespace

BaselineEstimates est_baseline_rates(const Population& pop, int tau, const EstimatorOptions& opts) {
  if (tau < 0) throw ContractError("tau must be nonnegative");
  BaselineEstimates out;
  out.fnmr = count_hits(pop, opts, Tag::kFnmrBaseline, [&](SamplingOracle& oracle, Rng& coins) {
    const std::size_t u = uniform_user(pop, coins);
    return hamming_distance(oracle.sample(u), oracle.sample(u)) > tau;
  });
  out.fmr = count_hits(pop, opts, Tag::kFmrBaseline, [&](SamplingOracle& oracle, Rng& coins) {
    const auto [u, v] = distinct_pair(pop, coins);
    return hamming_distance(oracle.sample(u), oracle.sample(v)) <= tau;
  });
  return out;
}

AdvantageEstimate est_scheme_fnmr(const BtpScheme& scheme, const Population& pop, const EstimatorOptions& opts) {
  require_match(scheme, pop);
  return count_hits(pop, opts, Tag::kSchemeFnmr, [&](SamplingOracle& oracle, Rng& coins) {
    const std::size_t u = uniform_user(pop, coins);
    const FeatureElement probe = oracle.sample(u);
    const ProtectedTemplate pt = scheme.encode(oracle.sample(u), coins);
    return !scheme.accepts(pt, probe);
  });
}

AdvantageEstimate est_fmr_tp(const BtpScheme& scheme, const Population& pop, SecondFactor factor,
                             const EstimatorOptions& opts) {
  require_match(scheme, pop);
  const Tag tag = factor == SecondFactor::kAD ? Tag::kTpAd : Tag::kTpPi;
  return count_hits(pop, opts, tag, [&](SamplingOracle& oracle, Rng& coins) {
    const auto [u, v] = distinct_pair(pop, coins);
    const FeatureElement x = oracle.sample(u);
    const ProtectedTemplate own = scheme.encode(oracle.sample(u), coins);
    const ProtectedTemplate other = scheme.encode(oracle.sample(v), coins);
    if (factor == SecondFactor::kAD) {
      return scheme.compare(other.pi, scheme.recover(own.alpha, x)) == Decision::kMatch;
    }
    return scheme.compare(own.pi, scheme.recover(other.alpha, x)) == Decision::kMatch;
  });
}

AdvantageEstimate est_fmr_bp(const BtpScheme& scheme, const Population& pop, const EstimatorOptions& opts) {
  require_match(scheme, pop);
  return count_hits(pop, opts, Tag::kBp, [&](SamplingOracle& oracle, Rng& coins) {
    const auto [u, v] = distinct_pair(pop, coins);
    const FeatureElement x = oracle.sample(u);
    const ProtectedTemplate pt = scheme.encode(oracle.sample(v), coins);
    return scheme.accepts(pt, x);
  });
}

std::optional<double> diversity_entropy(double rate) {
  if (!(rate > 0.0)) return std::nullopt;
  return -std::log2(rate);
}

DiversityEstimate est_fmr_div(const BtpScheme& scheme, const Population& pop, const EstimatorOptions& opts) {
  require_match(scheme, pop);
  DiversityEstimate out;
  out.fmr = count_hits(pop, opts, Tag::kDiv, [&](SamplingOracle& oracle, Rng& coins) {
    const std::size_t u = uniform_user(pop, coins);
    const FeatureElement x = oracle.sample(u);
    const ProtectedTemplate fresh = scheme.encode(oracle.sample(u), coins);
    const ProtectedTemplate old = scheme.encode(oracle.sample(u), coins);
    return scheme.compare(fresh.pi, scheme.recover(old.alpha, x)) == Decision::kMatch;
  });
  out.entropy_bits = diversity_entropy(out.fmr.point);
  return out;
}

AdvantageEstimate est_mr_of_feature(const Population& pop, const FeatureElement& x, int tau,
                                    const EstimatorOptions& opts) {
  if (tau < 0) throw ContractError("tau must be nonnegative");
  if (x.dimension() != pop.dimension()) throw DimensionError("feature and population dimensions differ");
  return count_hits(pop, opts, Tag::kMrFeature, [&](SamplingOracle& oracle, Rng&) {
    return hamming_distance(x, oracle.sample_random_user()) <= tau;
  });
}

AdvantageEstimate rmr_of_feature(const BtpScheme& scheme, const Population& pop, const FeatureElement& x,
                                 const EstimatorOptions& opts) {
  require_match(scheme, pop);
  return count_hits(pop, opts, Tag::kRmrFeature, [&](SamplingOracle& oracle, Rng& coins) {
    const ProtectedTemplate pt = scheme.encode(oracle.sample_random_user(), coins);
    return scheme.accepts(pt, x);
  });
}

AdvantageEstimate pt_match_rate(const BtpScheme& scheme, const Population& pop, const ProtectedTemplate& pt,
                                const EstimatorOptions& opts) {
  require_match(scheme, pop);
  return count_hits(pop, opts, Tag::kPtRate, [&](SamplingOracle& oracle, Rng&) {
    return scheme.accepts(pt, oracle.sample_random_user());
  });
}

AdvantageEstimate est_overlap_probability(const Population& pop, const FeatureElement& x, int tau,
                                          const EstimatorOptions& opts) {
  if (tau < 0) throw ContractError("tau must be nonnegative");
  return count_hits(pop, opts, Tag::kOverlap, [&](SamplingOracle& oracle, Rng&) {
    return neighborhood_overlap(x, oracle.sample_random_user(), tau);
  });
}

double MatchRateStats::chebyshev_threshold(double delta) const {
  if (!(delta > 0.0 && delta <= 1.0)) throw ContractError("delta must lie in (0, 1]");
  return mean - std_dev / std::sqrt(delta);
}

MatchRateStats make_match_rate_stats(double mean, double std_dev) {
  if (!(mean > 0.0)) throw UndefinedError("variation coefficient undefined: MR_Pi is 0");
  return {mean, std_dev, std_dev / mean};
}

double MatchRateSample::fraction_above(double threshold) const {
  if (rates.empty()) return 0.0;
  const auto above = std::count_if(rates.begin(), rates.end(), [&](double r) { return r > threshold; });
  return static_cast<double>(above) / static_cast<double>(rates.size());
}

MatchRateSample pt_match_stats(const BtpScheme& scheme, const Population& pop, std::uint64_t outer,
                               std::uint64_t inner, const EstimatorOptions& opts) {
  require_match(scheme, pop);
  if (outer < 2 || inner < 2) throw ConfigError("pt_match_stats needs at least 2 outer and 2 inner trials");
  const std::uint64_t base = derive_seed(opts.seed, static_cast<std::uint64_t>(Tag::kPtStats), Stream::kEstimator);
  MatchRateSample out;
  out.outer = outer;
  out.inner = inner;
  out.rates = run_indexed<double>(outer, opts.jobs, [&](std::uint64_t i) {
    SamplingOracle oracle(pop, make_rng(base, i, Stream::kChallengerOracle), opts.query_budget);
    Rng coins = make_rng(base, i, Stream::kEncoder);
    const ProtectedTemplate pt = scheme.encode(oracle.sample_random_user(), coins);
    std::uint64_t hits = 0;
    for (std::uint64_t j = 0; j < inner; ++j) hits += scheme.accepts(pt, oracle.sample_random_user()) ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(inner);
  });
  out.queries = outer * (inner + 1);

  const double k = static_cast<double>(outer);
  const double mean = std::accumulate(out.rates.begin(), out.rates.end(), 0.0) / k;
  double m2 = 0.0;
  double m4 = 0.0;
  double noise = 0.0;
  for (double r : out.rates) {
    const double c = r - mean;
    m2 += c * c;
    m4 += c * c * c * c;
    noise += r * (1.0 - r);
  }
  m2 /= k;
  m4 /= k;
  // r_hat (1 - r_hat) / (inner - 1) is unbiased for the inner binomial variance.
  noise /= k * static_cast<double>(inner - 1);
  const double var = std::max(0.0, m2 - noise);

  const double z = normal_quantile(opts.confidence);
  const double se_mean = std::sqrt(m2 / (k - 1.0));
  out.mean_ci = {std::max(0.0, mean - z * se_mean), std::min(1.0, mean + z * se_mean)};
  const double se_var = std::sqrt(std::max(0.0, m4 - m2 * m2) / k);
  out.std_dev_ci = {std::sqrt(std::max(0.0, var - z * se_var)), std::sqrt(var + z * se_var)};
  out.stats = make_match_rate_stats(mean, std::sqrt(var));
  return out;
}

bool exact_model_applies(const BtpScheme& scheme, const Population& pop) {
  return pop.dimension() <= kMaxExactDimension && scheme.dimension() == pop.dimension() &&
         scheme.randomness_size() <= kMaxExactRandomness;
}

namespace {

// Centers plus kCandidateSamples draws from X(U).
std::vector<FeatureElement> candidate_features(const Population& pop, std::uint64_t seed) {
  std::vector<FeatureElement> out = pop.centers();
  SamplingOracle oracle(pop, make_rng(seed, static_cast<std::uint64_t>(Tag::kCandidates), Stream::kCandidates),
                        kCandidateSamples);
  for (std::size_t i = 0; i < kCandidateSamples; ++i) out.push_back(oracle.sample_random_user());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

template <typename Value>
Extremum maximize(const std::vector<FeatureElement>& candidates, Value&& value) {
  Extremum best;
  best.value = -1.0;
  for (const auto& x : candidates) {
    const double v = value(x);
    if (v > best.value) {
      best.value = v;
      best.witness = x;
    }
  }
  best.lower_bound = true;
  return best;
}

}  // namespace

Extremum extremal_mr(const Population& pop, int tau, const EstimatorOptions& opts) {
  if (tau < 0) throw ContractError("tau must be nonnegative");
  const int n = pop.dimension();
  if (n <= kMaxExactDimension) {
    Extremum best;
    best.value = -1.0;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
      const FeatureElement x(bits, n);
      const double v = mr_of_feature(pop, x, tau);
      if (v > best.value) {
        best.value = v;
        best.witness = x;
      }
    }
    return best;
  }
  const auto candidates = candidate_features(pop, opts.seed);
  if (n <= kMaxClosedFormDimension) {
    return maximize(candidates, [&](const FeatureElement& x) { return mr_of_feature(pop, x, tau); });
  }
  return maximize(candidates, [&](const FeatureElement& x) { return est_mr_of_feature(pop, x, tau, opts).point; });
}

Extremum extremal_rmr(const BtpScheme& scheme, const Population& pop, const EstimatorOptions& opts) {
  require_match(scheme, pop);
  if (exact_model_applies(scheme, pop)) {
    const ExactModel<double> model(scheme, pop);
    const auto rates = model.reverse_match_rates();
    Eigen::Index arg = 0;
    const double value = rates.maxCoeff(&arg);
    return {value, model.feature(static_cast<std::size_t>(arg)), false};
  }
  const auto candidates = candidate_features(pop, opts.seed);
  return maximize(candidates, [&](const FeatureElement& x) { return rmr_of_feature(scheme, pop, x, opts).point; });
}

}  // namespace btp
