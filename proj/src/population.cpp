#include "btp/population.hpp"

#include <cmath>
#include <string>

namespace btp {

Population::Population(int n, double flip_prob, std::vector<FeatureElement> centers,
                       std::uint64_t seed)
    : n_(n), flip_prob_(flip_prob), centers_(std::move(centers)), seed_(seed) {
  if (n < 1 || n > kMaxDimension) {
    throw ConfigError("population dimension must be in [1, 64]");
  }
  if (centers_.size() < 2) {
    throw ConfigError("population needs at least 2 users, got " + std::to_string(centers_.size()));
  }
  if (!(flip_prob >= 0.0 && flip_prob < 0.5)) {
    throw ConfigError("flip probability must lie in [0, 0.5)");
  }
  for (const auto& c : centers_) {
    if (c.dimension() != n) throw ConfigError("center length differs from n");
  }
}

const FeatureElement& Population::center(std::size_t u) const {
  if (u >= centers_.size()) {
    throw IndexError("unknown user " + std::to_string(u));
  }
  return centers_[u];
}

FeatureElement Population::draw(std::size_t u, Rng& rng) const {
  const FeatureElement& c = center(u);
  if (flip_prob_ == 0.0) return c;
  std::bernoulli_distribution flip(flip_prob_);
  std::uint64_t noise = 0;
  for (int i = 0; i < n_; ++i) {
    if (flip(rng)) noise |= std::uint64_t{1} << i;
  }
  return FeatureElement(c.bits() ^ noise, n_);
}

Population generate_population(const PopulationConfig& config) {
  if (config.n < 1 || config.n > kMaxDimension) {
    throw ConfigError("population dimension must be in [1, 64]");
  }
  if (config.users < 2) throw ConfigError("population needs at least 2 users");
  if (!(config.flip_prob >= 0.0 && config.flip_prob < 0.5)) {
    throw ConfigError("flip probability must lie in [0, 0.5)");
  }
  if (config.centers) {
    if (config.centers->size() != config.users) {
      throw ConfigError("number of listed centers differs from U");
    }
    return Population(config.n, config.flip_prob, *config.centers, config.seed);
  }
  Rng rng(derive_seed(config.seed, 0, Stream::kCandidates));
  std::vector<FeatureElement> centers;
  centers.reserve(config.users);
  const std::uint64_t mask = dimension_mask(config.n);
  for (std::size_t u = 0; u < config.users; ++u) {
    centers.emplace_back(rng() & mask, config.n);
  }
  return Population(config.n, config.flip_prob, std::move(centers), config.seed);
}

SamplingOracle::SamplingOracle(const Population& population, Rng rng, std::uint64_t budget)
    : population_(&population), rng_(std::move(rng)), budget_(budget) {}

FeatureElement SamplingOracle::sample(std::size_t u) {
  if (u >= population_->size()) {
    throw IndexError("unknown user " + std::to_string(u));
  }
  if (queries_ >= budget_) {
    throw BudgetError("sampling oracle budget of " + std::to_string(budget_) + " exhausted");
  }
  ++queries_;
  return population_->draw(u, rng_);
}

FeatureElement SamplingOracle::sample_random_user() {
  const auto u = static_cast<std::size_t>(uniform_below(rng_, population_->size()));
  return sample(u);
}

double feature_probability(const Population& pop, std::size_t u, const FeatureElement& x) {
  const int d = hamming_distance(x, pop.center(u));
  const double p = pop.flip_prob();
  const int n = pop.dimension();
  return std::pow(p, d) * std::pow(1.0 - p, n - d);
}

bool neighborhood_overlap(const FeatureElement& x0, const FeatureElement& x1, int tau) {
  if (tau < 0) throw ContractError("tau must be nonnegative");
  return hamming_distance(x0, x1) <= 2 * tau;
}

}  // namespace btp
