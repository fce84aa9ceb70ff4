// Acceptance run: one PASS/FAIL line per primary criterion. Tolerances are
// fixed here; the exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "btp/adversaries.hpp"
#include "btp/cli.hpp"
#include "btp/exact.hpp"
#include "btp/games.hpp"
#include "btp/metrics.hpp"
#include "btp/population.hpp"
#include "btp/schemes.hpp"
#include "btp/verify.hpp"

using namespace btp;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c, d);
  return buf;
}

Population population(std::uint64_t seed = 1) {
  PopulationConfig cfg;
  cfg.seed = seed;
  return generate_population(cfg);
}

std::unique_ptr<BtpScheme> fuzzy_commitment() { return make_scheme(SchemeConfig{}); }

VerifyOptions verify_options(std::uint64_t trials, std::uint64_t seed) {
  VerifyOptions o;
  o.trials = trials;
  o.seed = seed;
  return o;
}

int dist(std::uint64_t a, std::uint64_t b) { return std::popcount(a ^ b); }

// 1. Appendix-B adversary reaches advantage 1 - MR_Pi on the default config.
Outcome criterion_unlink() {
  const auto fc = fuzzy_commitment();
  const auto pop = population();
  const auto start = std::chrono::steady_clock::now();
  bool exhaustive = false;
  const bool hypothesis = own_feature_always_matches(*fc, pop, &exhaustive);
  const auto v = check_thm_unarch_unlink(*fc, pop, verify_options(20000, 1));
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double gap = std::abs(v.lhs - v.rhs);
  const bool ok = hypothesis && exhaustive && v.status == VerdictStatus::kPass && gap <= 0.03 && seconds <= 60.0;
  return {ok, fmt("Adv=%.4f 1-MR=%.4f |diff|=%.4f<=0.03 time=%.1fs<=60s", v.lhs, v.rhs, gap, seconds) +
                  (exhaustive ? " hypothesis=exhaustive" : " hypothesis=sampled")};
}

// 2. Sampler wins the {PI,AD}-PAL game; N_delta minimality on random configs.
Outcome criterion_pal() {
  // Population seed 1 has C^2 = 0.164 > 0.16; seed 2 satisfies the hypothesis.
  const auto fc = fuzzy_commitment();
  const auto pop = population(2);
  const auto stats = scheme_match_rate_stats(*fc, pop);
  const double c2 = stats.variation_coeff * stats.variation_coeff;
  const auto v = check_thm_unarch_pal_irr(*fc, pop, 0.16, 0.5, verify_options(5000, 1));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int checked = 0;
  int minimal = 0;
  while (checked < 1000) {
    const double mean = 0.01 + 0.98 * unit(rng);
    const double c = 0.99 * unit(rng);
    const double delta = c * c + (1 - c * c) * unit(rng);
    const double gamma = delta + (1 - delta) * unit(rng);
    if (!(c * c < delta && delta < gamma && gamma < 1)) continue;
    const auto cfg = PalSamplerConfig::make(delta, gamma, make_match_rate_stats(mean, c * mean));
    const double target = (gamma - delta) / (1 - delta);
    const double n = static_cast<double>(cfg.n_delta);
    const bool ok = cfg.n_delta >= 1 && std::pow(1 - cfg.mu, n) < target &&
                    (cfg.n_delta == 1 || std::pow(1 - cfg.mu, n - 1) >= target);
    minimal += ok ? 1 : 0;
    ++checked;
  }
  const bool ok = c2 < 0.16 && v.status == VerdictStatus::kPass && minimal == checked;
  return {ok, fmt("pop seed 2: C^2=%.4f<0.16 win=%.4f>0.5-%.4f", c2, v.lhs, v.tolerance) +
                  " N_delta minimal " + std::to_string(minimal) + "/" + std::to_string(checked)};
}

// 3. UNLINK-IRR bound for plaintext/{PI}/tau=0 and fuzzy commitment/{AD}/tau=1.
Outcome criterion_bound() {
  const auto pop = population();
  SchemeConfig plain_cfg;
  plain_cfg.name = "plain";
  plain_cfg.threshold = 0;
  const auto plain = make_scheme(plain_cfg);
  const auto a = check_thm_unlink_irr_bound(*plain, pop, LambdaSet::pi_only(), 0, read_pi_adversary(),
                                            verify_options(10000, 1));
  const auto fc = fuzzy_commitment();
  const auto b = check_thm_unlink_irr_bound(*fc, pop, LambdaSet::ad_only(), 1, view_sampler_adversary(),
                                            verify_options(10000, 1));
  const bool ok = a.status == VerdictStatus::kPass && b.status == VerdictStatus::kPass;
  return {ok, fmt("plain: Adv_B=%.4f >= %.4f - %.4f; ", a.lhs, a.rhs, a.tolerance) +
                  fmt("fc/AD: Adv_B=%.4f >= %.4f - %.4f", b.lhs, b.rhs, b.tolerance)};
}

// 4. Coupled inclusions AL_0 wins <= AL_1 wins <= PAL wins, zero tolerance.
Outcome criterion_couplings() {
  const auto fc = fuzzy_commitment();
  const auto pop = population();
  GameOptions o;
  o.trials = 10000;
  bool ok = true;
  std::string detail;
  for (const auto& lambda : {LambdaSet::pi_only(), LambdaSet::ad_only(), LambdaSet::both()}) {
    const auto c = run_coupled_irr_trials(*fc, pop, lambda, 1, view_sampler_adversary(), o);
    ok = ok && c.outcomes.size() == 10000 && c.full_not_authorized == 0 && c.authorized_not_pseudo == 0;
    detail += lambda.to_string() + ": FL=" + std::to_string(c.full_wins) + " AL1=" +
              std::to_string(c.authorized_wins) + " PAL=" + std::to_string(c.pseudo_wins) + " violations=" +
              std::to_string(c.full_not_authorized + c.authorized_not_pseudo) + "; ";
  }
  return {ok, detail};
}

// 5. Every estimator covers its exact value at 99% in at least 95 of 100 runs.
Outcome criterion_estimators() {
  const auto fc = fuzzy_commitment();
  const auto pop = population();
  const ExactModel<double> model(*fc, pop);
  const auto base = exact_baseline_rates(pop, 1);
  const auto m_tau = extremal_mr(pop, 1);
  const auto m_pi = extremal_rmr(*fc, pop);
  const auto overlap = overlap_rates(pop, 1);
  const auto rmr = model.reverse_match_rates();
  const FeatureElement other = pop.center(3);

  struct Check {
    std::string name;
    std::function<bool(const EstimatorOptions&)> covered;
  };
  const std::vector<Check> checks = {
      {"fnmr_baseline", [&](const auto& o) { return est_baseline_rates(pop, 1, o).fnmr.ci().contains(base.fnmr); }},
      {"fmr_baseline", [&](const auto& o) { return est_baseline_rates(pop, 1, o).fmr.ci().contains(base.fmr); }},
      {"fnmr", [&](const auto& o) { return est_scheme_fnmr(*fc, pop, o).ci().contains(model.fnmr()); }},
      {"fmr_tp_ad",
       [&](const auto& o) { return est_fmr_tp(*fc, pop, SecondFactor::kAD, o).ci().contains(model.fmr_tp_ad()); }},
      {"fmr_tp_pi",
       [&](const auto& o) { return est_fmr_tp(*fc, pop, SecondFactor::kPI, o).ci().contains(model.fmr_tp_pi()); }},
      {"fmr_bp", [&](const auto& o) { return est_fmr_bp(*fc, pop, o).ci().contains(model.fmr_bp()); }},
      {"fmr_div", [&](const auto& o) { return est_fmr_div(*fc, pop, o).fmr.ci().contains(model.fmr_div()); }},
      {"mr_feature",
       [&](const auto& o) { return est_mr_of_feature(pop, m_tau.witness, 1, o).ci().contains(m_tau.value); }},
      {"rmr_argmax", [&](const auto& o) { return rmr_of_feature(*fc, pop, m_pi.witness, o).ci().contains(m_pi.value); }},
      {"rmr_center",
       [&](const auto& o) { return rmr_of_feature(*fc, pop, other, o).ci().contains(rmr(other.bits())); }},
      {"p_tau",
       [&](const auto& o) { return est_overlap_probability(pop, overlap.argmax, 1, o).ci().contains(overlap.p); }},
      {"q_tau",
       [&](const auto& o) { return est_overlap_probability(pop, overlap.argmin, 1, o).ci().contains(overlap.q); }},
      {"mr_pi_mean",
       [&](const auto& o) {
         return pt_match_stats(*fc, pop, 400, 200, o).mean_ci.contains(model.match_rate_mean());
       }},
      {"mr_pi_sigma",
       [&](const auto& o) {
         return pt_match_stats(*fc, pop, 400, 200, o).std_dev_ci.contains(model.match_rate_std_dev());
       }},
  };

  bool ok = true;
  std::string detail;
  for (const auto& check : checks) {
    int covered = 0;
    for (std::uint64_t run = 1; run <= 100; ++run) {
      EstimatorOptions o;
      o.trials = 2000;
      o.seed = 1000 + run;
      o.confidence = 0.99;
      covered += check.covered(o) ? 1 : 0;
    }
    ok = ok && covered >= 95;
    detail += check.name + "=" + std::to_string(covered) + " ";
  }
  return {ok, "covered/100 at 99%: " + detail};
}

// 6. Structural laws, exhaustive at n <= 8.
Outcome criterion_structure() {
  int violations = 0;
  std::uint64_t cases = 0;
  auto expect = [&](bool cond) {
    ++cases;
    if (!cond) ++violations;
  };

  const auto fc = fuzzy_commitment();
  for (std::uint64_t x = 0; x < 128; ++x)
    for (std::uint64_t r = 0; r < fc->randomness_size(); ++r) {
      const auto pt = fc->encode_with(FeatureElement(x, 7), r);
      for (std::uint64_t y = 0; y < 128; ++y) expect(fc->accepts(pt, FeatureElement(y, 7)) == (dist(x, y) <= 1));
      const auto both = lambda_project(pt, LambdaSet::both());
      const auto pi = lambda_project(pt, LambdaSet::pi_only());
      const auto ad = lambda_project(pt, LambdaSet::ad_only());
      expect(both.pi == pt.pi && both.alpha == pt.alpha);
      expect(pi.pi == pt.pi && !pi.alpha);
      expect(!ad.pi && ad.alpha == pt.alpha);
      expect(lambda_project(pi, LambdaSet::pi_only()) == pi && lambda_project(ad, LambdaSet::ad_only()) == ad &&
             lambda_project(both, LambdaSet::both()) == both);
    }

  for (int tau = 0; tau <= 4; ++tau)
    for (std::uint64_t a = 0; a < 256; ++a)
      for (std::uint64_t b = 0; b < 256; ++b)
        expect(neighborhood_overlap(FeatureElement(a, 8), FeatureElement(b, 8), tau) == (dist(a, b) <= 2 * tau));

  for (int n = 1; n <= 8; ++n)
    for (std::uint64_t seed = 1; seed <= 4; ++seed)
      for (double p : {0.0, 0.03, 0.2}) {
        PopulationConfig cfg;
        cfg.n = n;
        cfg.users = 2 + seed * 3;
        cfg.flip_prob = p;
        cfg.seed = seed;
        const auto pop = generate_population(cfg);
        const double uniform = std::ldexp(1.0, -n);
        const auto o0 = overlap_rates(pop, 0);
        expect(o0.q <= uniform + 1e-15 && uniform <= o0.p + 1e-15);
        double m_prev = 0.0, p_prev = 0.0, q_prev = 0.0;
        for (int tau = 0; tau <= n; ++tau) {
          const auto o = overlap_rates(pop, tau);
          const double m = extremal_mr(pop, tau).value;
          expect(m >= m_prev - 1e-15 && o.p >= p_prev - 1e-15 && o.q >= q_prev - 1e-15);
          m_prev = m;
          p_prev = o.p;
          q_prev = o.q;
        }
      }
  return {violations == 0, std::to_string(violations) + " violations in " + std::to_string(cases) + " cases"};
}

// 7. |1 - (FCMR + FNCMR)| agrees with the measured UNLINK advantage.
Outcome criterion_cross_match() {
  GameOptions o;
  o.trials = 10000;
  const auto r = est_cross_match_rates(*fuzzy_commitment(), population(), LambdaSet::both(),
                                       cross_comparator_adversary(), o);
  const double tol = 3 * std::hypot(r.identity_std_error, r.unlink.advantage.std_error);
  return {r.consistent, fmt("FCMR=%.4f FNCMR=%.4f identity=%.4f unlink Adv=%.4f", r.fcmr.point, r.fncmr.point,
                            r.identity, r.unlink.advantage.point) +
                            fmt(" tol=%.4f", tol)};
}

// 8. verify --theorem all --seed 42 is byte-identical across runs and job counts.
Outcome criterion_determinism() {
  auto report = [](const std::string& jobs) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli({"btpeval", "verify", "--theorem", "all", "--seed", "42", "--jobs", jobs}, out, err);
    auto j = nlohmann::ordered_json::parse(out.str());
    j.erase("timings");
    return std::make_pair(code, j.dump());
  };
  const auto a = report("1");
  const auto b = report("1");
  const auto c = report("8");
  const bool ok = a.first == 0 && a == b && a == c;
  return {ok, std::string("run1==run2: ") + (a == b ? "yes" : "no") + ", jobs1==jobs8: " + (a == c ? "yes" : "no") +
                  ", exit=" + std::to_string(a.first) + ", bytes=" + std::to_string(a.second.size())};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"UNLINK unachievability on the default fuzzy commitment", criterion_unlink},
      {"PAL unachievability via the sampler adversary", criterion_pal},
      {"UNLINK-IRR reduction bound", criterion_bound},
      {"coupled FL/AL/PAL inclusions", criterion_couplings},
      {"estimator/oracle agreement", criterion_estimators},
      {"structural laws at n <= 8", criterion_structure},
      {"FCMR/FNCMR identity", criterion_cross_match},
      {"report determinism", criterion_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << i + 1 << " " << criteria[i].first << ": " << o.detail
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
