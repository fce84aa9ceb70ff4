// Brute-force reference computations used as test oracles. Everything here is
// plain nested loops over the whole cube, written independently of the
// library's closed forms and of its matrix-based exact model.
#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "btp/population.hpp"
#include "btp/scheme.hpp"
#include "btp/schemes.hpp"

namespace oracle {

using btp::FeatureElement;

inline btp::Population default_population(std::uint64_t seed = 1) {
  btp::PopulationConfig cfg;
  cfg.seed = seed;
  return btp::generate_population(cfg);
}

inline std::unique_ptr<btp::BtpScheme> default_scheme() { return btp::make_scheme(btp::SchemeConfig{}); }

inline std::unique_ptr<btp::BtpScheme> scheme(const std::string& name, int n = 7, int threshold = 1) {
  btp::SchemeConfig cfg;
  cfg.name = name;
  cfg.n = n;
  cfg.threshold = threshold;
  return btp::make_scheme(cfg);
}

inline btp::Population population(int n, std::size_t users, double p, std::uint64_t seed = 1) {
  btp::PopulationConfig cfg;
  cfg.n = n;
  cfg.users = users;
  cfg.flip_prob = p;
  cfg.seed = seed;
  return btp::generate_population(cfg);
}

inline btp::Population population_with_centers(int n, double p, const std::vector<std::string>& centers) {
  std::vector<FeatureElement> cs;
  for (const auto& c : centers) cs.push_back(FeatureElement::from_string(c));
  return btp::Population(n, p, cs, 0);
}

/// P(X_u = x) by counting flipped bits one at a time.
inline double prob(const btp::Population& pop, std::size_t u, std::uint64_t x) {
  const int n = pop.dimension();
  double out = 1.0;
  for (int i = 0; i < n; ++i) {
    const bool differs = ((pop.center(u).bits() ^ x) >> i) & 1U;
    out *= differs ? pop.flip_prob() : 1.0 - pop.flip_prob();
  }
  return out;
}

inline std::uint64_t cube(const btp::Population& pop) { return std::uint64_t{1} << pop.dimension(); }

inline int dist(std::uint64_t a, std::uint64_t b) { return std::popcount(a ^ b); }

/// Mixture weight of x under X(U).
inline std::vector<double> mixture(const btp::Population& pop) {
  std::vector<double> w(cube(pop), 0.0);
  for (std::uint64_t x = 0; x < cube(pop); ++x) {
    for (std::size_t u = 0; u < pop.size(); ++u) w[x] += prob(pop, u, x);
    w[x] /= static_cast<double>(pop.size());
  }
  return w;
}

struct Baseline {
  double fnmr = 0.0;
  double fmr = 0.0;
};

inline Baseline baseline(const btp::Population& pop, int tau) {
  const std::size_t users = pop.size();
  Baseline out;
  for (std::size_t u = 0; u < users; ++u) {
    for (std::size_t v = 0; v < users; ++v) {
      double mass = 0.0;
      for (std::uint64_t x = 0; x < cube(pop); ++x) {
        for (std::uint64_t y = 0; y < cube(pop); ++y) {
          if (u == v ? dist(x, y) > tau : dist(x, y) <= tau) mass += prob(pop, u, x) * prob(pop, v, y);
        }
      }
      (u == v ? out.fnmr : out.fmr) += mass;
    }
  }
  out.fnmr /= static_cast<double>(users);
  out.fmr /= static_cast<double>(users * (users - 1));
  return out;
}

inline double mr_of_feature(const btp::Population& pop, std::uint64_t x, int tau) {
  const auto w = mixture(pop);
  double out = 0.0;
  for (std::uint64_t y = 0; y < cube(pop); ++y) {
    if (dist(x, y) <= tau) out += w[y];
  }
  return out;
}

/// P_tau(x) via explicit ball intersection: some z lies within tau of both.
inline double overlap(const btp::Population& pop, std::uint64_t x, int tau) {
  const auto w = mixture(pop);
  double out = 0.0;
  for (std::uint64_t y = 0; y < cube(pop); ++y) {
    for (std::uint64_t z = 0; z < cube(pop); ++z) {
      if (dist(x, z) <= tau && dist(y, z) <= tau) {
        out += w[y];
        break;
      }
    }
  }
  return out;
}

/// Every scheme-level metric by enumerating features and PIE randomness.
class SchemeOracle {
 public:
  SchemeOracle(const btp::BtpScheme& scheme, const btp::Population& pop)
      : scheme_(scheme), pop_(pop), size_(cube(pop)), r_(scheme.randomness_size()) {
    w_ = mixture(pop);
    accept_.assign(size_ * r_, std::vector<char>(size_));
    for (std::uint64_t x0 = 0; x0 < size_; ++x0) {
      for (std::uint64_t r = 0; r < r_; ++r) {
        const auto pt = scheme.encode_with(FeatureElement(x0, pop.dimension()), r);
        templates_.push_back(pt);
        for (std::uint64_t x = 0; x < size_; ++x) {
          accept_[x0 * r_ + r][x] = scheme.accepts(pt, FeatureElement(x, pop.dimension())) ? 1 : 0;
        }
      }
    }
  }

  double fnmr() const {
    double miss = 0.0;
    for (std::size_t u = 0; u < pop_.size(); ++u) miss += 1.0 - enrolled_accepts(u, u);
    return miss / static_cast<double>(pop_.size());
  }

  double fmr_bp() const {
    double hit = 0.0;
    for (std::size_t u = 0; u < pop_.size(); ++u)
      for (std::size_t v = 0; v < pop_.size(); ++v)
        if (u != v) hit += enrolled_accepts(v, u);
    return hit / static_cast<double>(pop_.size() * (pop_.size() - 1));
  }

  /// PIC(pi' of v, PIR(alpha of u, x of u)).
  double fmr_tp_ad() const {
    double hit = 0.0;
    for (std::size_t u = 0; u < pop_.size(); ++u) {
      const auto recovered = recovered_distribution(u);
      for (std::size_t v = 0; v < pop_.size(); ++v) {
        if (u == v) continue;
        for (const auto& [pi, ppi] : pi_distribution(v)) {
          for (const auto& [id, pid] : recovered) {
            if (scheme_.compare(pi, id) == btp::Decision::kMatch) hit += ppi * pid;
          }
        }
      }
    }
    return hit / static_cast<double>(pop_.size() * (pop_.size() - 1));
  }

  /// PIC(pi of u, PIR(alpha' of v, x of u)); v = u gives FMR^Div.
  double cross_pi(bool same_user) const {
    double hit = 0.0;
    std::size_t pairs = 0;
    for (std::size_t u = 0; u < pop_.size(); ++u) {
      const auto pis = pi_distribution(u);
      for (std::size_t v = 0; v < pop_.size(); ++v) {
        if ((u == v) != same_user) continue;
        ++pairs;
        for (const auto& [alpha, pa] : alpha_distribution(v)) {
          for (std::uint64_t x = 0; x < size_; ++x) {
            const double px = prob(pop_, u, x);
            if (px == 0.0) continue;
            const auto id = scheme_.recover(alpha, FeatureElement(x, pop_.dimension()));
            for (const auto& [pi, ppi] : pis) {
              if (scheme_.compare(pi, id) == btp::Decision::kMatch) hit += pa * px * ppi;
            }
          }
        }
      }
    }
    return hit / static_cast<double>(pairs);
  }

  double fmr_tp_pi() const { return cross_pi(false); }
  double fmr_div() const { return cross_pi(true); }

  double rmr(std::uint64_t x) const {
    double out = 0.0;
    for (std::uint64_t x0 = 0; x0 < size_; ++x0)
      for (std::uint64_t r = 0; r < r_; ++r) out += w_[x0] / static_cast<double>(r_) * accept_[x0 * r_ + r][x];
    return out;
  }

  double max_rmr() const {
    double best = 0.0;
    for (std::uint64_t x = 0; x < size_; ++x) best = std::max(best, rmr(x));
    return best;
  }

  double pt_rate(std::size_t index) const {
    double out = 0.0;
    for (std::uint64_t x = 0; x < size_; ++x) out += w_[x] * accept_[index][x];
    return out;
  }

  double mr_mean() const {
    double out = 0.0;
    for (std::uint64_t x0 = 0; x0 < size_; ++x0)
      for (std::uint64_t r = 0; r < r_; ++r) out += w_[x0] / static_cast<double>(r_) * pt_rate(x0 * r_ + r);
    return out;
  }

  double mr_std_dev() const {
    const double mean = mr_mean();
    double var = 0.0;
    for (std::uint64_t x0 = 0; x0 < size_; ++x0)
      for (std::uint64_t r = 0; r < r_; ++r) {
        const double d = pt_rate(x0 * r_ + r) - mean;
        var += w_[x0] / static_cast<double>(r_) * d * d;
      }
    return std::sqrt(var);
  }

  const std::vector<btp::ProtectedTemplate>& templates() const { return templates_; }
  const std::vector<double>& weights() const { return w_; }

 private:
  // Pr[PT <- PIE(X_v) accepts x <- X_u].
  double enrolled_accepts(std::size_t v, std::size_t u) const {
    double out = 0.0;
    for (std::uint64_t x0 = 0; x0 < size_; ++x0) {
      const double p0 = prob(pop_, v, x0);
      for (std::uint64_t r = 0; r < r_; ++r)
        for (std::uint64_t x = 0; x < size_; ++x)
          if (accept_[x0 * r_ + r][x]) out += p0 / static_cast<double>(r_) * prob(pop_, u, x);
    }
    return out;
  }

  std::map<btp::Identifier, double> pi_distribution(std::size_t u) const {
    std::map<btp::Identifier, double> out;
    for (std::uint64_t x0 = 0; x0 < size_; ++x0)
      for (std::uint64_t r = 0; r < r_; ++r)
        out[templates_[x0 * r_ + r].pi] += prob(pop_, u, x0) / static_cast<double>(r_);
    return out;
  }

  std::map<btp::AuxData, double> alpha_distribution(std::size_t u) const {
    std::map<btp::AuxData, double> out;
    for (std::uint64_t x0 = 0; x0 < size_; ++x0)
      for (std::uint64_t r = 0; r < r_; ++r)
        out[templates_[x0 * r_ + r].alpha] += prob(pop_, u, x0) / static_cast<double>(r_);
    return out;
  }

  // Distribution of PIR(alpha, x) with alpha from PIE(X_u) and x <- X_u.
  std::map<btp::Identifier, double> recovered_distribution(std::size_t u) const {
    std::map<btp::Identifier, double> out;
    for (const auto& [alpha, pa] : alpha_distribution(u)) {
      for (std::uint64_t x = 0; x < size_; ++x) {
        const double px = prob(pop_, u, x);
        if (px == 0.0) continue;
        out[scheme_.recover(alpha, FeatureElement(x, pop_.dimension()))] += pa * px;
      }
    }
    return out;
  }

  const btp::BtpScheme& scheme_;
  const btp::Population& pop_;
  std::uint64_t size_;
  std::uint64_t r_;
  std::vector<double> w_;
  std::vector<btp::ProtectedTemplate> templates_;
  std::vector<std::vector<char>> accept_;
};

}  // namespace oracle
