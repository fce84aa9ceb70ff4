#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "btp/feature.hpp"
#include "btp/random.hpp"

namespace btp {

inline constexpr std::uint64_t kDefaultQueryBudget = 1'000'000;

struct PopulationConfig {
  int n = 7;
  std::size_t users = 16;
  double flip_prob = 0.03;
  std::uint64_t seed = 1;
  /// Explicit centers; when present they replace the random draw.
  std::optional<std::vector<FeatureElement>> centers;
};

/// The user set with one noisy feature distribution per user: X_u flips each
/// bit of the center c_u independently with probability p.
///
/// Immutable after construction and safe to share between worker threads.
class Population {
 public:
  Population(int n, double flip_prob, std::vector<FeatureElement> centers, std::uint64_t seed = 0);

  int dimension() const { return n_; }
  std::size_t size() const { return centers_.size(); }
  double flip_prob() const { return flip_prob_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<FeatureElement>& centers() const { return centers_; }
  const FeatureElement& center(std::size_t u) const;

  /// One draw from X_u.
  FeatureElement draw(std::size_t u, Rng& rng) const;

 private:
  int n_;
  double flip_prob_;
  std::vector<FeatureElement> centers_;
  std::uint64_t seed_;
};

/// Draws U uniform centers from {0,1}^n (or adopts the configured ones).
/// Deterministic in `config.seed`.
Population generate_population(const PopulationConfig& config);

/// Query-counted access to X_u. Owns its random stream; one oracle per game
/// role and trial.
class SamplingOracle {
 public:
  SamplingOracle(const Population& population, Rng rng,
                 std::uint64_t budget = kDefaultQueryBudget);

  FeatureElement sample(std::size_t u);
  /// Draws u uniformly and then x <- X_u, i.e. one draw from X(U).
  FeatureElement sample_random_user();

  std::uint64_t queries() const { return queries_; }
  std::uint64_t budget() const { return budget_; }
  std::uint64_t remaining() const { return budget_ - queries_; }
  const Population& population() const { return *population_; }

 private:
  const Population* population_;
  Rng rng_;
  std::uint64_t budget_;
  std::uint64_t queries_ = 0;
};

/// P(X_u = x) = p^d (1-p)^(n-d) with d = d(x, c_u).
double feature_probability(const Population& pop, std::size_t u, const FeatureElement& x);

/// True iff the tau-balls around x0 and x1 intersect. On the Hamming cube this
/// is exactly d(x0, x1) <= 2 tau.
bool neighborhood_overlap(const FeatureElement& x0, const FeatureElement& x1, int tau);

}  // namespace btp
