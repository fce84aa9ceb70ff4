#include "btp/verify.hpp"

#include <cmath>

#include "btp/errors.hpp"

namespace btp {

std::string to_string(VerdictStatus status) {
  switch (status) {
    case VerdictStatus::kPass:
      return "pass";
    case VerdictStatus::kFail:
      return "fail";
    case VerdictStatus::kNotApplicable:
      return "not_applicable";
    case VerdictStatus::kVacuous:
      return "vacuous";
    case VerdictStatus::kSkipped:
      return "skipped";
  }
  return "?";
}

namespace {

enum class CheckTag : std::uint64_t { kT1 = 101, kT2, kT3, kT4Irr, kT4Unlink, kHypothesis };

GameOptions game_options(const VerifyOptions& opts, CheckTag tag) {
  GameOptions g;
  g.trials = opts.trials;
  g.seed = derive_seed(opts.seed, static_cast<std::uint64_t>(tag), Stream::kEstimator);
  g.jobs = opts.jobs;
  g.query_budget = opts.query_budget;
  return g;
}

nlohmann::ordered_json snapshot(const BtpScheme& scheme, const Population& pop, const VerifyOptions& opts) {
  nlohmann::ordered_json j;
  j["scheme"] = scheme.name();
  j["n"] = pop.dimension();
  j["users"] = pop.size();
  j["flip_prob"] = pop.flip_prob();
  j["population_seed"] = pop.seed();
  j["trials"] = opts.trials;
  j["seed"] = opts.seed;
  return j;
}

VerdictPart inclusion_part(std::string name, std::uint64_t violations) {
  VerdictPart part;
  part.name = std::move(name);
  part.lhs = static_cast<double>(violations);
  part.rhs = 0.0;
  part.tolerance = 0.0;
  part.relation = "lhs <= rhs";
  part.status = violations == 0 ? VerdictStatus::kPass : VerdictStatus::kFail;
  return part;
}

double rate(std::uint64_t wins, std::uint64_t trials) {
  return trials == 0 ? 0.0 : static_cast<double>(wins) / static_cast<double>(trials);
}

}  // namespace

TheoremVerdict check_thm_irr_relations(const BtpScheme& scheme, const Population& pop, const LambdaSet& lambda,
                                       int tau, const IrrFactory& adversary, const VerifyOptions& opts) {
  TheoremVerdict v;
  v.id = "T1";
  v.label = lambda.to_string();
  v.relation = "lhs <= rhs";
  v.inputs = snapshot(scheme, pop, opts);
  v.inputs["lambda"] = lambda.to_string();
  v.inputs["tau"] = tau;
  v.inputs["adversary"] = adversary()->name();
  v.notes.push_back("per-adversary coupled check: FL, AL_tau and PAL wins judged on one transcript per trial");

  const CoupledTrials coupled =
      run_coupled_irr_trials(scheme, pop, lambda, tau, adversary, game_options(opts, CheckTag::kT1));
  EstimatorOptions eo;
  eo.seed = opts.seed;
  const Extremum m0 = extremal_mr(pop, 0, eo);
  const Extremum mt = extremal_mr(pop, tau, eo);
  const std::uint64_t n = coupled.outcomes.size();
  const double s_fl = rate(coupled.full_wins, n);
  const double s_al = rate(coupled.authorized_wins, n);
  const double s_pal = rate(coupled.pseudo_wins, n);

  v.parts.push_back(inclusion_part("fl_wins_not_al_wins", coupled.full_not_authorized));
  {
    // Adv_FL <= Adv_AL + (m_tau - m_0) follows from the inclusion.
    VerdictPart adv;
    adv.name = "adv_fl_vs_adv_al";
    adv.lhs = s_fl - m0.value;
    adv.rhs = (s_al - mt.value) + (mt.value - m0.value);
    adv.relation = "lhs <= rhs";
    adv.status = adv.lhs <= adv.rhs + 1e-12 ? VerdictStatus::kPass : VerdictStatus::kFail;
    v.parts.push_back(adv);
  }
  std::uint64_t violations = coupled.full_not_authorized;
  if (scheme.threshold_compatible(tau)) {
    v.parts.push_back(inclusion_part("al_wins_not_pal_wins", coupled.authorized_not_pseudo));
    violations += coupled.authorized_not_pseudo;
    EstimatorOptions peo;
    peo.seed = opts.seed;
    const Extremum mpi = extremal_rmr(scheme, pop, peo);
    VerdictPart adv;
    adv.name = "adv_al_vs_adv_pal";
    adv.lhs = s_al - mt.value;
    adv.rhs = (s_pal - mpi.value) + (mpi.value - mt.value);
    adv.relation = "lhs <= rhs";
    adv.status = adv.lhs <= adv.rhs + 1e-12 ? VerdictStatus::kPass : VerdictStatus::kFail;
    v.parts.push_back(adv);
  } else {
    VerdictPart skipped;
    skipped.name = "al_wins_not_pal_wins";
    skipped.status = VerdictStatus::kSkipped;
    skipped.relation = "lhs <= rhs";
    v.parts.push_back(skipped);
    v.notes.push_back("scheme is not threshold-compatible at tau = " + std::to_string(tau) +
                      "; AL_tau -> PAL inclusion skipped");
  }
  if (mt.lower_bound || m0.lower_bound) v.notes.push_back("m-values are candidate-set lower bounds");
  v.lhs = static_cast<double>(violations);
  v.rhs = 0.0;
  v.tolerance = 0.0;
  v.status = VerdictStatus::kPass;
  for (const auto& part : v.parts) {
    if (part.status == VerdictStatus::kFail) v.status = VerdictStatus::kFail;
  }
  return v;
}

TheoremVerdict check_thm_unarch_pal_irr(const BtpScheme& scheme, const Population& pop, double delta, double gamma,
                                        const VerifyOptions& opts) {
  TheoremVerdict v;
  v.id = "T2";
  v.label = "pi+ad";
  v.relation = "lhs > rhs - tolerance";
  v.inputs = snapshot(scheme, pop, opts);
  v.inputs["lambda"] = "pi+ad";
  v.inputs["delta"] = delta;
  v.inputs["gamma"] = gamma;
  v.inputs["adversary"] = "pal-sampler";
  v.rhs = 1.0 - gamma;

  EstimatorOptions eo;
  eo.seed = opts.seed;
  eo.jobs = opts.jobs;
  MatchRateStats stats;
  try {
    stats = scheme_match_rate_stats(scheme, pop, eo);
  } catch (const UndefinedError& e) {
    v.status = VerdictStatus::kNotApplicable;
    v.notes.push_back(std::string("hypothesis fails: ") + e.what());
    return v;
  }
  v.inputs["mr_pi"] = stats.mean;
  v.inputs["sigma"] = stats.std_dev;
  v.inputs["variation_coeff"] = stats.variation_coeff;
  if (!(stats.variation_coeff < 1.0) || !(stats.variation_coeff * stats.variation_coeff < delta)) {
    v.status = VerdictStatus::kNotApplicable;
    v.notes.push_back("hypothesis fails: C^2 = " + std::to_string(stats.variation_coeff * stats.variation_coeff) +
                      " is not below delta = " + std::to_string(delta));
    return v;
  }
  const PalSamplerConfig cfg = PalSamplerConfig::make(delta, gamma, stats);
  v.inputs["mu"] = cfg.mu;
  v.inputs["n_delta"] = cfg.n_delta;
  const GameResult game = run_pal_irr_game(scheme, pop, LambdaSet::both(), pal_sampler_adversary(cfg),
                                           game_options(opts, CheckTag::kT2));
  v.lhs = game.success.point;
  v.tolerance = opts.sigmas * game.success.std_error;
  v.status = v.lhs > v.rhs - v.tolerance ? VerdictStatus::kPass : VerdictStatus::kFail;
  if (game.aborted > 0) v.notes.push_back(std::to_string(game.aborted) + " trials aborted on the query budget");
  return v;
}

bool own_feature_always_matches(const BtpScheme& scheme, const Population& pop, bool* exhaustive,
                                std::uint64_t samples, std::uint64_t seed) {
  const int n = scheme.dimension();
  const bool full = exact_model_applies(scheme, pop);
  if (exhaustive) *exhaustive = full;
  if (full) {
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
      const FeatureElement x(bits, n);
      for (std::uint64_t r = 0; r < scheme.randomness_size(); ++r) {
        if (!scheme.accepts(scheme.encode_with(x, r), x)) return false;
      }
    }
    return true;
  }
  Rng rng = make_rng(seed, static_cast<std::uint64_t>(CheckTag::kHypothesis), Stream::kCandidates);
  const std::uint64_t mask = dimension_mask(n);
  for (std::uint64_t i = 0; i < samples; ++i) {
    const FeatureElement x(rng() & mask, n);
    if (!scheme.accepts(scheme.encode(x, rng), x)) return false;
  }
  return true;
}

TheoremVerdict check_thm_unarch_unlink(const BtpScheme& scheme, const Population& pop, const VerifyOptions& opts) {
  TheoremVerdict v;
  v.id = "T3";
  v.label = "pi+ad";
  v.relation = "|lhs - rhs| <= tolerance";
  v.inputs = snapshot(scheme, pop, opts);
  v.inputs["lambda"] = "pi+ad";
  v.inputs["adversary"] = "appendix-b";

  bool exhaustive = false;
  const bool hypothesis = own_feature_always_matches(scheme, pop, &exhaustive, 100000, opts.seed);
  v.inputs["hypothesis_check"] = exhaustive ? "exhaustive" : "sampled";
  if (!hypothesis) {
    v.status = VerdictStatus::kNotApplicable;
    v.notes.push_back("hypothesis fails: some PT rejects its own feature element");
    return v;
  }

  double mr = 0.0;
  double mr_se = 0.0;
  if (exact_model_applies(scheme, pop)) {
    mr = ExactModel<double>(scheme, pop).match_rate_mean();
    v.inputs["mr_pi_source"] = "exact";
  } else {
    EstimatorOptions eo;
    eo.seed = opts.seed;
    eo.jobs = opts.jobs;
    const MatchRateSample s = pt_match_stats(scheme, pop, 2000, 500, eo);
    mr = s.stats.mean;
    mr_se = s.mean_ci.half_width() / normal_quantile(eo.confidence);
    v.inputs["mr_pi_source"] = "monte_carlo";
  }
  v.inputs["mr_pi"] = mr;
  const GameResult game = run_unlink_game(scheme, pop, LambdaSet::both(), unlink_match_adversary(),
                                          game_options(opts, CheckTag::kT3));
  v.lhs = game.advantage.point;
  v.rhs = 1.0 - mr;
  v.tolerance = opts.sigmas * std::hypot(game.advantage.std_error, mr_se);
  v.status = std::abs(v.lhs - v.rhs) <= v.tolerance ? VerdictStatus::kPass : VerdictStatus::kFail;
  if (game.trials_by_bit[0] > 0 && game.trials_by_bit[1] > 0) {
    v.inputs["win_rate_b0"] = rate(game.wins_by_bit[0], game.trials_by_bit[0]);
    v.inputs["win_rate_b1"] = rate(game.wins_by_bit[1], game.trials_by_bit[1]);
  }
  return v;
}

TheoremVerdict check_thm_unlink_irr_bound(const BtpScheme& scheme, const Population& pop, const LambdaSet& lambda,
                                          int tau, const IrrFactory& inner, const VerifyOptions& opts) {
  TheoremVerdict v;
  v.id = "T4";
  v.label = lambda.to_string();
  v.relation = "lhs >= rhs - tolerance";
  v.inputs = snapshot(scheme, pop, opts);
  v.inputs["lambda"] = lambda.to_string();
  v.inputs["tau"] = tau;
  const UnlinkFactory reduction = reduction_unlink_adversary(inner, tau);
  v.inputs["adversary"] = reduction()->name();

  if (pop.dimension() > kMaxExactDimension) {
    v.status = VerdictStatus::kNotApplicable;
    v.notes.push_back("exact p_tau and q_tau need n <= 12");
    return v;
  }
  const OverlapRates overlap = overlap_rates(pop, tau);
  v.inputs["p_tau"] = overlap.p;
  v.inputs["q_tau"] = overlap.q;
  if (overlap.p >= 1.0) {
    v.status = VerdictStatus::kVacuous;
    v.notes.push_back("p_tau = 1: the bound carries no information");
    return v;
  }
  EstimatorOptions eo;
  eo.seed = opts.seed;
  const Extremum mt = extremal_mr(pop, tau, eo);
  v.inputs["m_tau"] = mt.value;

  const GameResult a =
      run_al_irr_game(scheme, pop, lambda, tau, inner, game_options(opts, CheckTag::kT4Irr), mt);
  const GameResult b = run_unlink_game(scheme, pop, lambda, reduction, game_options(opts, CheckTag::kT4Unlink));
  v.inputs["adv_a"] = a.advantage.point;
  v.lhs = b.advantage.point;
  v.rhs = (1.0 - overlap.p) * a.advantage.point - (overlap.p - overlap.q) * mt.value;
  v.tolerance = opts.sigmas * std::hypot(b.advantage.std_error, (1.0 - overlap.p) * a.advantage.std_error);
  v.status = v.lhs >= v.rhs - v.tolerance ? VerdictStatus::kPass : VerdictStatus::kFail;
  return v;
}

std::vector<TheoremVerdict> run_verify_suite(const BtpScheme& scheme, const Population& pop, const std::string& which,
                                             const VerifySuiteConfig& cfg, const VerifyOptions& opts) {
  if (which != "t1" && which != "t2" && which != "t3" && which != "t4" && which != "all") {
    throw ConfigError("unknown theorem '" + which + "' (expected t1, t2, t3, t4 or all)");
  }
  const bool all = which == "all";
  std::vector<TheoremVerdict> out;

  auto skipped = [&](const std::string& id, const LambdaSet& lambda, const std::string& why) {
    TheoremVerdict v;
    v.id = id;
    v.label = lambda.to_string();
    v.status = VerdictStatus::kSkipped;
    v.inputs = snapshot(scheme, pop, opts);
    v.inputs["lambda"] = lambda.to_string();
    v.notes.push_back(why);
    return v;
  };
  auto irr_adversary = [&](const std::string& name, const LambdaSet& lambda) {
    AdversaryContext ctx;
    ctx.scheme = &scheme;
    ctx.population = &pop;
    ctx.game = GameKind::kAlIrr;
    ctx.lambda = lambda;
    ctx.tau = cfg.tau;
    ctx.delta = cfg.delta;
    ctx.gamma = cfg.gamma;
    ctx.seed = opts.seed;
    return make_irr_adversary(name, ctx);
  };

  const LambdaSet variants[] = {LambdaSet::pi_only(), LambdaSet::ad_only()};
  if (all || which == "t1") {
    for (const auto& lambda : variants) {
      IrrFactory adversary;
      try {
        adversary = irr_adversary(cfg.irr_adversary, lambda);
      } catch (const ConfigError& e) {
        out.push_back(skipped("T1", lambda, e.what()));
        continue;
      }
      out.push_back(check_thm_irr_relations(scheme, pop, lambda, cfg.tau, adversary, opts));
    }
  }
  if (all || which == "t2") out.push_back(check_thm_unarch_pal_irr(scheme, pop, cfg.delta, cfg.gamma, opts));
  if (all || which == "t3") out.push_back(check_thm_unarch_unlink(scheme, pop, opts));
  if (all || which == "t4") {
    for (const auto& lambda : variants) {
      IrrFactory inner;
      try {
        inner = irr_adversary(cfg.reduction_inner, lambda);
      } catch (const ConfigError& e) {
        out.push_back(skipped("T4", lambda, e.what()));
        continue;
      }
      out.push_back(check_thm_unlink_irr_bound(scheme, pop, lambda, cfg.tau, inner, opts));
    }
  }
  return out;
}

}  // namespace btp
