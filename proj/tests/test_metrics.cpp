#include <doctest.h>

#include <cmath>

#include "btp/exact.hpp"
#include "btp/metrics.hpp"
#include "oracles.hpp"

using namespace btp;

namespace {

EstimatorOptions options(std::uint64_t trials, std::uint64_t seed, unsigned jobs = 1) {
  EstimatorOptions o;
  o.trials = trials;
  o.seed = seed;
  o.jobs = jobs;
  o.confidence = 0.999;
  return o;
}

}  // namespace

TEST_CASE("monte carlo estimators cover the exact values") {
  const auto scheme = oracle::default_scheme();
  const auto pop = oracle::default_population();
  const ExactModel<double> model(*scheme, pop);
  const auto base = exact_baseline_rates(pop, 1);
  const auto o = options(20000, 3, 4);

  const auto b = est_baseline_rates(pop, 1, o);
  CHECK(b.fnmr.ci().contains(base.fnmr));
  CHECK(b.fmr.ci().contains(base.fmr));
  CHECK(est_scheme_fnmr(*scheme, pop, o).ci().contains(model.fnmr()));
  CHECK(est_fmr_bp(*scheme, pop, o).ci().contains(model.fmr_bp()));
  CHECK(est_fmr_tp(*scheme, pop, SecondFactor::kAD, o).ci().contains(model.fmr_tp_ad()));
  CHECK(est_fmr_tp(*scheme, pop, SecondFactor::kPI, o).ci().contains(model.fmr_tp_pi()));
  CHECK(est_fmr_div(*scheme, pop, o).fmr.ci().contains(model.fmr_div()));

  const FeatureElement x = pop.center(0);
  CHECK(est_mr_of_feature(pop, x, 1, o).ci().contains(mr_of_feature(pop, x, 1)));
  CHECK(rmr_of_feature(*scheme, pop, x, o).ci().contains(model.reverse_match_rates()(x.bits())));
  CHECK(est_overlap_probability(pop, x, 1, o).ci().contains(overlap_probability(pop, x, 1)));
  const auto pt = scheme->encode_with(x, 7);
  CHECK(pt_match_rate(*scheme, pop, pt, o).ci().contains(model.pt_match_rate(pt)));
}

TEST_CASE("estimators depend on seed and trials, not on jobs") {
  const auto scheme = oracle::default_scheme();
  const auto pop = oracle::default_population();
  const auto a = est_fmr_tp(*scheme, pop, SecondFactor::kPI, options(3000, 11, 1));
  const auto b = est_fmr_tp(*scheme, pop, SecondFactor::kPI, options(3000, 11, 7));
  const auto c = est_fmr_tp(*scheme, pop, SecondFactor::kPI, options(3000, 12, 1));
  CHECK(a.point == b.point);
  CHECK(a.ci_low == b.ci_low);
  CHECK(a.point != c.point);
  const auto s1 = pt_match_stats(*scheme, pop, 200, 50, options(0, 5, 1));
  const auto s2 = pt_match_stats(*scheme, pop, 200, 50, options(0, 5, 3));
  CHECK(s1.rates == s2.rates);
  CHECK(s1.stats.std_dev == s2.stats.std_dev);
}

TEST_CASE("different metrics use separate streams under one seed") {
  const auto pop = oracle::default_population();
  const auto scheme = oracle::scheme("plain", 7, 1);
  // FNMR_Pi of the plaintext scheme and the baseline FNMR have the same law;
  // distinct streams make their hit counts differ.
  const auto a = est_scheme_fnmr(*scheme, pop, options(5000, 1));
  const auto b = est_baseline_rates(pop, 1, options(5000, 1)).fnmr;
  CHECK(a.point != b.point);
}

TEST_CASE("queries are reported") {
  const auto pop = oracle::default_population();
  const auto est = est_baseline_rates(pop, 1, options(1000, 1));
  CHECK(est.fnmr.trials == 1000);
  CHECK(est.fnmr.queries_used == 2000);
}

TEST_CASE("match rate statistics against the exact model") {
  const auto scheme = oracle::default_scheme();
  const auto pop = oracle::default_population();
  const ExactModel<double> model(*scheme, pop);
  auto o = options(0, 21, 4);
  const auto s = pt_match_stats(*scheme, pop, 4000, 400, o);
  CHECK(s.mean_ci.contains(model.match_rate_mean()));
  CHECK(s.std_dev_ci.contains(model.match_rate_std_dev()));
  CHECK(s.rates.size() == 4000);
  CHECK(s.queries == 4000 * 401);
  CHECK(s.stats.variation_coeff == doctest::Approx(s.stats.std_dev / s.stats.mean));
}

TEST_CASE("always-match scheme has unit match rate and no spread") {
  const auto s = pt_match_stats(*oracle::scheme("always-match", 7), oracle::default_population(), 100, 20,
                                options(0, 1));
  CHECK(s.stats.mean == 1.0);
  CHECK(s.stats.std_dev == 0.0);
  CHECK(s.stats.variation_coeff == 0.0);
  CHECK_THROWS_AS(pt_match_stats(*oracle::scheme("never-match", 7), oracle::default_population(), 100, 20,
                                 options(0, 1)),
                  UndefinedError);
  CHECK_THROWS_AS(make_match_rate_stats(0.0, 0.1), UndefinedError);
}

TEST_CASE("chebyshev threshold holds on exact template distributions") {
  const auto s = make_match_rate_stats(0.5, 0.1);
  CHECK(s.variation_coeff == doctest::Approx(0.2));
  CHECK(s.chebyshev_threshold(0.25) == doctest::Approx(0.3));
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const auto pop = oracle::population(7, 6 + seed, 0.05, seed);
    const ExactModel<double> model(*oracle::default_scheme(), pop);
    const auto stats = make_match_rate_stats(model.match_rate_mean(), model.match_rate_std_dev());
    for (double delta : {0.1, 0.25, 0.5, 0.9}) {
      const double threshold = stats.chebyshev_threshold(delta);
      double above = 0.0;
      for (const auto& [w, rate] : model.template_rates())
        if (rate > threshold) above += w;
      CHECK(above >= 1.0 - delta - 1e-12);
    }
  }
}

TEST_CASE("sampled chebyshev fraction") {
  const auto s = pt_match_stats(*oracle::default_scheme(), oracle::default_population(), 2000, 200, options(0, 2));
  CHECK(s.fraction_above(s.stats.chebyshev_threshold(0.25)) >= 0.75);
}

TEST_CASE("extremal match rates equal the full scan maxima") {
  const auto pop = oracle::default_population();
  for (int tau = 0; tau <= 3; ++tau) {
    double best = 0.0;
    for (std::uint64_t x = 0; x < 128; ++x) best = std::max(best, oracle::mr_of_feature(pop, x, tau));
    const auto m = extremal_mr(pop, tau);
    CHECK(m.value == doctest::Approx(best).epsilon(1e-12));
    CHECK_FALSE(m.lower_bound);
    CHECK(mr_of_feature(pop, m.witness, tau) == doctest::Approx(m.value));
  }
  const auto scheme = oracle::default_scheme();
  const oracle::SchemeOracle ref(*scheme, pop);
  const auto m = extremal_rmr(*scheme, pop);
  CHECK(m.value == doctest::Approx(ref.max_rmr()).epsilon(1e-12));
  CHECK(ref.rmr(m.witness.bits()) == doctest::Approx(m.value));
}

TEST_CASE("m values are nondecreasing in tau and bound every feature") {
  const auto pop = oracle::default_population(4);
  double prev = 0.0;
  for (int tau = 0; tau <= 7; ++tau) {
    const auto m = extremal_mr(pop, tau);
    CHECK(m.value >= prev - 1e-15);
    prev = m.value;
    for (std::uint64_t x = 0; x < 128; x += 3) CHECK(mr_of_feature(pop, FeatureElement(x, 7), tau) <= m.value + 1e-15);
  }
  CHECK(prev == doctest::Approx(1.0));
}

TEST_CASE("degenerate shared-center population") {
  const auto pop = oracle::population_with_centers(5, 0.0, {"10110", "10110", "10110"});
  const auto m = extremal_mr(pop, 0);
  CHECK(m.value == 1.0);
  CHECK(m.witness == FeatureElement::from_string("10110"));
}

TEST_CASE("plaintext PT match rate with distinct noiseless centers") {
  const auto pop = oracle::population_with_centers(6, 0.0, {"000000", "100000", "110000", "111111"});
  const auto plain = oracle::scheme("plain", 6, 1);
  const auto pt = plain->encode_with(pop.center(0), 0);
  CHECK(pt_match_rate(*plain, pop, pt, options(4000, 1)).ci().contains(0.5));
  const auto rot = oracle::scheme("rot", 6, 6);
  CHECK(pt_match_rate(*rot, pop, rot->encode_with(pop.center(2), 3), options(500, 1)).point == 1.0);
}

TEST_CASE("large dimensions fall back to candidate maxima") {
  const auto pop = oracle::population(24, 8, 0.05, 2);
  const auto m = extremal_mr(pop, 2, options(4000, 1));
  CHECK(m.lower_bound);
  CHECK(m.value > 0.0);
  CHECK_FALSE(exact_model_applies(*oracle::scheme("plain", 24, 2), pop));
  CHECK(exact_model_applies(*oracle::default_scheme(), oracle::default_population()));
}

TEST_CASE("diversity entropy") {
  CHECK(diversity_entropy(0.0) == std::nullopt);
  CHECK(*diversity_entropy(0.0625) == doctest::Approx(4.0));
  const auto d = est_fmr_div(*oracle::default_scheme(), oracle::default_population(), options(2000, 1));
  REQUIRE(d.entropy_bits.has_value());
  CHECK(*d.entropy_bits == doctest::Approx(-std::log2(d.fmr.point)));
}
