#include "btp/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "btp/errors.hpp"

namespace btp {

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> binomial_pmf(int n, Scalar p) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> pmf(n + 1);
  Scalar coeff = 1;
  for (int k = 0; k <= n; ++k) {
    pmf(k) = coeff * std::pow(p, Scalar(k)) * std::pow(Scalar(1) - p, Scalar(n - k));
    coeff = coeff * Scalar(n - k) / Scalar(k + 1);
  }
  return pmf;
}

template Eigen::Matrix<double, Eigen::Dynamic, 1> binomial_pmf<double>(int, double);
template Eigen::Matrix<long double, Eigen::Dynamic, 1> binomial_pmf<long double>(int, long double);

namespace {

// Pr[Bin(a, pa) + Bin(b, pb) <= limit].
double convolved_cdf(int a, double pa, int b, double pb, int limit) {
  if (limit < 0) return 0.0;
  const auto fa = binomial_pmf(a, pa);
  const auto fb = binomial_pmf(b, pb);
  double total = 0.0;
  for (int i = 0; i <= a && i <= limit; ++i) {
    total += fa(i) * fb.head(std::min(b, limit - i) + 1).sum();
  }
  return std::min(total, 1.0);
}

void require_scan(const Population& pop) {
  if (pop.dimension() > kMaxExactDimension) {
    throw ModeError("exact scan needs n <= " + std::to_string(kMaxExactDimension) + ", got n = " +
                    std::to_string(pop.dimension()));
  }
}

}  // namespace

double ball_probability(const Population& pop, std::size_t u, const FeatureElement& x, int radius) {
  // Positions where x and c_u differ stay different unless flipped; equal
  // positions become different when flipped.
  const int d = hamming_distance(x, pop.center(u));
  const int n = pop.dimension();
  const double p = pop.flip_prob();
  double total = 0.0;
  const auto keep = binomial_pmf(d, 1.0 - p);  // still-differing count among the d positions
  const auto fresh = binomial_pmf(n - d, p);
  for (int i = 0; i <= d && i <= radius; ++i) {
    total += keep(i) * fresh.head(std::min(n - d, radius - i) + 1).sum();
  }
  return std::min(total, 1.0);
}

double mr_of_feature(const Population& pop, const FeatureElement& x, int tau) {
  if (pop.dimension() > kMaxClosedFormDimension) {
    throw ModeError("closed-form match rate needs n <= 20; use the Monte Carlo estimator");
  }
  if (tau < 0) throw ContractError("tau must be nonnegative");
  double total = 0.0;
  for (std::size_t u = 0; u < pop.size(); ++u) total += ball_probability(pop, u, x, tau);
  return total / static_cast<double>(pop.size());
}

double overlap_probability(const Population& pop, const FeatureElement& x, int tau) {
  if (tau < 0) throw ContractError("tau must be nonnegative");
  return mr_of_feature(pop, x, 2 * tau);
}

BaselineRates exact_baseline_rates(const Population& pop, int tau) {
  if (tau < 0) throw ContractError("tau must be nonnegative");
  const int n = pop.dimension();
  const double p = pop.flip_prob();
  // Two independent noisy copies of one bit disagree with probability q.
  const double q = 2 * p * (1 - p);
  BaselineRates out;
  out.fnmr = 1.0 - convolved_cdf(n, q, 0, 0.0, tau);
  const std::size_t users = pop.size();
  double fmr = 0.0;
  for (std::size_t u = 0; u < users; ++u) {
    for (std::size_t v = 0; v < users; ++v) {
      if (u == v) continue;
      const int d = hamming_distance(pop.center(u), pop.center(v));
      fmr += convolved_cdf(d, 1 - q, n - d, q, tau);
    }
  }
  out.fmr = fmr / static_cast<double>(users * (users - 1));
  return out;
}

OverlapRates overlap_rates(const Population& pop, int tau) {
  require_scan(pop);
  const int n = pop.dimension();
  OverlapRates out;
  out.p = -1.0;
  out.q = 2.0;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    const FeatureElement x(bits, n);
    const double value = overlap_probability(pop, x, tau);
    if (value > out.p) {
      out.p = value;
      out.argmax = x;
    }
    if (value < out.q) {
      out.q = value;
      out.argmin = x;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

template <typename Scalar>
ExactModel<Scalar>::ExactModel(const BtpScheme& scheme, const Population& pop)
    : scheme_(&scheme), n_(pop.dimension()), randomness_(scheme.randomness_size()) {
  require_scan(pop);
  if (scheme.dimension() != n_) throw DimensionError("scheme and population dimensions differ");
  if (randomness_ > kMaxExactRandomness) {
    throw ModeError("exact model enumerates at most 2^16 PIE outcomes per feature");
  }
  const std::size_t users = pop.size();
  const std::size_t count = std::size_t{1} << n_;
  const Scalar p = static_cast<Scalar>(pop.flip_prob());

  // F(u, x) from a power table indexed by distance.
  Vector by_distance(n_ + 1);
  for (int d = 0; d <= n_; ++d) by_distance(d) = std::pow(p, Scalar(d)) * std::pow(1 - p, Scalar(n_ - d));
  features_.resize(static_cast<Eigen::Index>(users), static_cast<Eigen::Index>(count));
  for (std::size_t u = 0; u < users; ++u) {
    const std::uint64_t c = pop.center(u).bits();
    for (std::size_t x = 0; x < count; ++x) {
      features_(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(x)) = by_distance(std::popcount(c ^ x));
    }
  }
  mixture_ = features_.colwise().mean().transpose();

  // Enumerate PIE outcomes and intern their PI / AD values.
  std::map<Identifier, int> pi_index;
  std::map<AuxData, int> ad_index;
  std::vector<int> outcome_pi(count * randomness_);
  std::vector<int> outcome_ad(count * randomness_);
  std::vector<AuxData> ad_values;
  std::vector<Identifier> pi_values;
  for (std::size_t x0 = 0; x0 < count; ++x0) {
    const FeatureElement feature(x0, n_);
    for (std::uint64_t r = 0; r < randomness_; ++r) {
      ProtectedTemplate pt = scheme.encode_with(feature, r);
      auto [pit, pi_new] = pi_index.try_emplace(pt.pi, static_cast<int>(pi_values.size()));
      if (pi_new) pi_values.push_back(pt.pi);
      auto [adt, ad_new] = ad_index.try_emplace(pt.alpha, static_cast<int>(ad_values.size()));
      if (ad_new) ad_values.push_back(pt.alpha);
      outcome_pi[x0 * randomness_ + r] = pit->second;
      outcome_ad[x0 * randomness_ + r] = adt->second;
    }
  }

  // PIR table over every AD value and probe.
  std::map<Identifier, int> id_index;
  std::vector<Identifier> id_values;
  recovered_.assign(ad_values.size(), std::vector<int>(count));
  for (std::size_t a = 0; a < ad_values.size(); ++a) {
    for (std::size_t x = 0; x < count; ++x) {
      Identifier id = scheme.recover(ad_values[a], FeatureElement(x, n_));
      auto [it, fresh] = id_index.try_emplace(id, static_cast<int>(id_values.size()));
      if (fresh) id_values.push_back(std::move(id));
      recovered_[a][x] = it->second;
    }
  }

  comparisons_.resize(static_cast<Eigen::Index>(pi_values.size()), static_cast<Eigen::Index>(id_values.size()));
  for (std::size_t i = 0; i < pi_values.size(); ++i) {
    for (std::size_t j = 0; j < id_values.size(); ++j) {
      comparisons_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          scheme.compare(pi_values[i], id_values[j]) == Decision::kMatch ? Scalar(1) : Scalar(0);
    }
  }

  // G, the per-outcome match rates, and PI / AD incidence of each feature.
  const Scalar share = Scalar(1) / static_cast<Scalar>(randomness_);
  acceptance_ = Matrix::Zero(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(count));
  Matrix pi_incidence = Matrix::Zero(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(pi_values.size()));
  Matrix ad_incidence = Matrix::Zero(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(ad_values.size()));
  template_rates_.reserve(count * randomness_);
  for (std::size_t x0 = 0; x0 < count; ++x0) {
    const auto row = static_cast<Eigen::Index>(x0);
    for (std::uint64_t r = 0; r < randomness_; ++r) {
      const int pi = outcome_pi[x0 * randomness_ + r];
      const int ad = outcome_ad[x0 * randomness_ + r];
      Scalar rate = 0;
      for (std::size_t x = 0; x < count; ++x) {
        const Scalar hit = comparisons_(pi, recovered_[static_cast<std::size_t>(ad)][x]);
        acceptance_(row, static_cast<Eigen::Index>(x)) += share * hit;
        rate += mixture_(static_cast<Eigen::Index>(x)) * hit;
      }
      template_rates_.emplace_back(mixture_(row) * share, rate);
      pi_incidence(row, pi) += share;
      ad_incidence(row, ad) += share;
    }
  }
  pi_marginals_ = features_ * pi_incidence;
  ad_marginals_ = features_ * ad_incidence;
}

template <typename Scalar>
FeatureElement ExactModel<Scalar>::feature(std::size_t index) const {
  return FeatureElement(index, n_);
}

namespace {

template <typename Matrix>
auto off_diagonal_mean(const Matrix& m) {
  const auto k = m.rows();
  return (m.sum() - m.trace()) / static_cast<typename Matrix::Scalar>(k * (k - 1));
}

}  // namespace

template <typename Scalar>
Scalar ExactModel<Scalar>::fnmr() const {
  // K(v, u): probe from u against a template enrolled from v.
  const Matrix k = features_ * acceptance_ * features_.transpose();
  return Scalar(1) - k.trace() / static_cast<Scalar>(k.rows());
}

template <typename Scalar>
Scalar ExactModel<Scalar>::fmr_bp() const {
  const Matrix k = features_ * acceptance_ * features_.transpose();
  return off_diagonal_mean(k);
}

template <typename Scalar>
Scalar ExactModel<Scalar>::fmr_tp_ad() const {
  // recovered(u, id): distribution of PIR(alpha, x) with alpha and x both from u.
  const auto users = features_.rows();
  Matrix recovered = Matrix::Zero(users, comparisons_.cols());
  for (Eigen::Index u = 0; u < users; ++u) {
    for (std::size_t a = 0; a < recovered_.size(); ++a) {
      const Scalar pa = ad_marginals_(u, static_cast<Eigen::Index>(a));
      if (pa == Scalar(0)) continue;
      for (std::size_t x = 0; x < recovered_[a].size(); ++x) {
        recovered(u, recovered_[a][x]) += pa * features_(u, static_cast<Eigen::Index>(x));
      }
    }
  }
  // T(v, u): reference PI from v, verification identifier from u.
  const Matrix t = pi_marginals_ * comparisons_ * recovered.transpose();
  return off_diagonal_mean(t);
}

namespace {

// Y(u, a) = Pr[PIC(pi, PIR(a, x)) = match] with pi and x drawn for user u.
template <typename Scalar, typename Matrix>
Matrix reference_acceptance(const Matrix& features, const Matrix& pi_marginals,
                            const Matrix& comparisons, const std::vector<std::vector<int>>& recovered) {
  const Matrix support = pi_marginals * comparisons;  // U x #ids
  const auto users = features.rows();
  Matrix y(users, static_cast<Eigen::Index>(recovered.size()));
  for (Eigen::Index u = 0; u < users; ++u) {
    for (std::size_t a = 0; a < recovered.size(); ++a) {
      Scalar total = 0;
      for (std::size_t x = 0; x < recovered[a].size(); ++x) {
        total += features(u, static_cast<Eigen::Index>(x)) * support(u, recovered[a][x]);
      }
      y(u, static_cast<Eigen::Index>(a)) = total;
    }
  }
  return y;
}

}  // namespace

template <typename Scalar>
Scalar ExactModel<Scalar>::fmr_tp_pi() const {
  const Matrix y = reference_acceptance<Scalar>(features_, pi_marginals_, comparisons_, recovered_);
  // M(u, v): PI and probe from u, AD from v.
  const Matrix m = y * ad_marginals_.transpose();
  return off_diagonal_mean(m);
}

template <typename Scalar>
Scalar ExactModel<Scalar>::fmr_div() const {
  const Matrix y = reference_acceptance<Scalar>(features_, pi_marginals_, comparisons_, recovered_);
  const Matrix m = y * ad_marginals_.transpose();
  return m.trace() / static_cast<Scalar>(m.rows());
}

template <typename Scalar>
typename ExactModel<Scalar>::Vector ExactModel<Scalar>::reverse_match_rates() const {
  return acceptance_.transpose() * mixture_;
}

template <typename Scalar>
Scalar ExactModel<Scalar>::pt_match_rate(const ProtectedTemplate& pt) const {
  Scalar total = 0;
  for (Eigen::Index x = 0; x < mixture_.size(); ++x) {
    if (scheme_->accepts(pt, FeatureElement(static_cast<std::uint64_t>(x), n_))) total += mixture_(x);
  }
  return total;
}

template <typename Scalar>
Scalar ExactModel<Scalar>::match_rate_mean() const {
  return mixture_.dot(acceptance_ * mixture_);
}

template <typename Scalar>
Scalar ExactModel<Scalar>::match_rate_std_dev() const {
  const Scalar mean = match_rate_mean();
  Scalar var = 0;
  for (const auto& [weight, rate] : template_rates_) var += weight * (rate - mean) * (rate - mean);
  return std::sqrt(std::max(var, Scalar(0)));
}

template class ExactModel<double>;
template class ExactModel<long double>;

}  // namespace btp
