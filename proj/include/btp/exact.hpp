#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <vector>

#include "btp/population.hpp"
#include "btp/scheme.hpp"

namespace btp {

/// Largest n for which all 2^n features are scanned.
inline constexpr int kMaxExactDimension = 12;
/// Largest n accepted by the closed-form per-feature match rate.
inline constexpr int kMaxClosedFormDimension = 20;
/// Largest PIE randomness space the exact model enumerates (2^16 codewords).
inline constexpr std::uint64_t kMaxExactRandomness = std::uint64_t{1} << 16;

/// Binomial(n, p) probability mass function as a dense vector of length n + 1.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> binomial_pmf(int n, Scalar p);

/// Pr[d(x, X_u) <= radius], evaluated from the two binomial flip counts.
double ball_probability(const Population& pop, std::size_t u, const FeatureElement& x, int radius);

/// MR_{d<=tau}(x): probability that a draw from X(U) lands within tau of x.
/// Throws ModeError for n > 20.
double mr_of_feature(const Population& pop, const FeatureElement& x, int tau);

/// P_tau(x): probability that the tau-balls of x and x' <- X(U) intersect.
double overlap_probability(const Population& pop, const FeatureElement& x, int tau);

struct BaselineRates {
  double fnmr = 0.0;
  double fmr = 0.0;
};

/// FNMR_{d<=tau} and FMR_{d<=tau} in closed form.
BaselineRates exact_baseline_rates(const Population& pop, int tau);

struct OverlapRates {
  double p = 0.0;  ///< max_x P_tau(x)
  double q = 0.0;  ///< min_x P_tau(x)
  FeatureElement argmax;
  FeatureElement argmin;
};

/// p_tau and q_tau by scanning the whole cube (n <= 12).
OverlapRates overlap_rates(const Population& pop, int tau);

/// Exact enumeration twin of every scheme-level metric.
///
/// Everything reduces to dense products of
///   F  (U x 2^n)    F(u, x) = P(X_u = x)
///   G  (2^n x 2^n)  G(x0, x) = Pr_PIE[PIC(pi, PIR(alpha, x)) = match | PT <- PIE(x0)]
/// plus the marginal PI / AD distributions of each user for the two-template
/// metrics. Requires n <= 12 and at most 2^16 PIE outcomes per feature.
template <typename Scalar = double>
class ExactModel {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  ExactModel(const BtpScheme& scheme, const Population& pop);

  std::size_t feature_count() const { return static_cast<std::size_t>(features_.cols()); }
  FeatureElement feature(std::size_t index) const;

  /// F and the mixture w = mean_u F(u, .) describing X(U).
  const Matrix& feature_probabilities() const { return features_; }
  const Vector& mixture() const { return mixture_; }
  /// G.
  const Matrix& acceptance() const { return acceptance_; }

  Scalar fnmr() const;
  Scalar fmr_bp() const;
  Scalar fmr_tp_ad() const;
  Scalar fmr_tp_pi() const;
  Scalar fmr_div() const;

  /// rMR_Pi(x) for every x, indexed by feature bits.
  Vector reverse_match_rates() const;

  /// MR_Pi(pi, alpha) for one template.
  Scalar pt_match_rate(const ProtectedTemplate& pt) const;

  /// Every PIE outcome under X(U) as (probability, MR_Pi(pi, alpha)).
  const std::vector<std::pair<Scalar, Scalar>>& template_rates() const { return template_rates_; }

  /// Mean and population standard deviation of MR_Pi(pi, alpha) under X(U).
  Scalar match_rate_mean() const;
  Scalar match_rate_std_dev() const;

 private:
  const BtpScheme* scheme_;
  int n_;
  std::uint64_t randomness_;
  Matrix features_;
  Vector mixture_;
  Matrix acceptance_;
  Matrix pi_marginals_;   // U x #PI values
  Matrix ad_marginals_;   // U x #AD values
  Matrix comparisons_;    // #PI values x #verification ids, 0/1
  std::vector<std::vector<int>> recovered_;  // [AD value][x] -> verification id index
  std::vector<std::pair<Scalar, Scalar>> template_rates_;
};

extern template class ExactModel<double>;
extern template class ExactModel<long double>;

}  // namespace btp
