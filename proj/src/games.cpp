#include "btp/games.hpp"

#include <cmath>
#include <limits>

#include "btp/errors.hpp"

namespace btp {

std::string to_string(GameKind kind) {
  switch (kind) {
    case GameKind::kAlIrr:
      return "al-irr";
    case GameKind::kPalIrr:
      return "pal-irr";
    case GameKind::kUnlink:
      return "unlink";
  }
  return "?";
}

GameKind parse_game_kind(const std::string& text) {
  if (text == "al-irr") return GameKind::kAlIrr;
  if (text == "pal-irr") return GameKind::kPalIrr;
  if (text == "unlink") return GameKind::kUnlink;
  throw ConfigError("unknown game '" + text + "' (expected al-irr, pal-irr or unlink)");
}

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_mix(std::uint64_t& h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xff;
    h *= kFnvPrime;
  }
}

void protocol_check(bool ok, const std::string& what) {
  if (!ok) throw ProtocolError("transcript violates the game schema: " + what);
}

GameParams make_params(const BtpScheme& scheme, const Population& pop, const LambdaSet& lambda,
                       std::optional<int> tau) {
  if (scheme.dimension() != pop.dimension()) throw DimensionError("scheme and population dimensions differ");
  return GameParams{&scheme, pop.size(), pop.dimension(), lambda, tau};
}

void require_feature(const FeatureElement& x, int n, const char* who) {
  if (x.dimension() != n) {
    throw ProtocolError(std::string(who) + " returned a feature element of dimension " +
                        std::to_string(x.dimension()) + ", expected " + std::to_string(n));
  }
}

// Steps 1-4 of the IRR games; the caller applies the win rule.
TrialTranscript play_irr(const BtpScheme& scheme, const Population& pop, const GameParams& params,
                         const IrrFactory& factory, const GameOptions& opts, std::uint64_t i) {
  TrialTranscript t;
  // The query budget limits the adversary only.
  SamplingOracle challenger(pop, make_rng(opts.seed, i, Stream::kChallengerOracle),
                            std::numeric_limits<std::uint64_t>::max());
  SamplingOracle oracle(pop, make_rng(opts.seed, i, Stream::kAdversaryOracle), opts.query_budget);
  Rng encoder = make_rng(opts.seed, i, Stream::kEncoder);
  Rng coin = make_rng(opts.seed, i, Stream::kChallengerCoin);
  Rng coins = make_rng(opts.seed, i, Stream::kAdversaryCoins);
  auto adversary = factory();

  t.steps.push_back(GameStep::kSetup);
  try {
    t.steps.push_back(GameStep::kAdversaryPhase1);
    adversary->phase1(params, oracle, coins);
    t.phase1_queries = oracle.queries();

    t.steps.push_back(GameStep::kChallenge);
    const std::size_t u = uniform_below(coin, pop.size());
    t.user = u;
    const FeatureElement x = challenger.sample(u);
    t.challenger_queries = challenger.queries();
    const ProtectedTemplate pt = scheme.encode(x, encoder);
    t.features.push_back(x);
    t.templates.push_back(pt);
    t.views.push_back(lambda_project(pt, params.lambda));

    t.steps.push_back(GameStep::kAdversaryPhase2);
    const FeatureElement guess = adversary->phase2(t.views.back(), oracle, coins);
    t.phase2_queries = oracle.queries() - t.phase1_queries;
    require_feature(guess, pop.dimension(), "adversary");
    t.features.push_back(guess);
  } catch (const BudgetError&) {
    t.aborted = true;
    t.phase2_queries = oracle.queries() - t.phase1_queries;
  }
  t.steps.push_back(GameStep::kJudge);
  return t;
}

TrialTranscript play_unlink(const BtpScheme& scheme, const Population& pop, const GameParams& params,
                            const UnlinkFactory& factory, const GameOptions& opts, std::uint64_t i) {
  TrialTranscript t;
  SamplingOracle oracle(pop, make_rng(opts.seed, i, Stream::kAdversaryOracle), opts.query_budget);
  Rng encoder = make_rng(opts.seed, i, Stream::kEncoder);
  Rng coin = make_rng(opts.seed, i, Stream::kChallengerCoin);
  Rng coins = make_rng(opts.seed, i, Stream::kAdversaryCoins);
  auto adversary = factory();

  t.steps.push_back(GameStep::kSetup);
  try {
    t.steps.push_back(GameStep::kAdversaryPhase1);
    const UnlinkChoice choice = adversary->phase1(params, oracle, coins);
    t.phase1_queries = oracle.queries();
    for (const auto* x : {&choice.x, &choice.x0, &choice.x1}) require_feature(*x, pop.dimension(), "adversary");
    t.features = {choice.x, choice.x0, choice.x1};

    t.steps.push_back(GameStep::kChallenge);
    const int b = opts.forced_bit ? *opts.forced_bit : fair_coin(coin);
    t.bit = b;
    const ProtectedTemplate pt = scheme.encode(choice.x, encoder);
    const ProtectedTemplate pt_prime = scheme.encode(b == 0 ? choice.x0 : choice.x1, encoder);
    t.templates = {pt, pt_prime};
    t.views = {lambda_project(pt, params.lambda), lambda_project(pt_prime, params.lambda)};

    t.steps.push_back(GameStep::kAdversaryPhase2);
    const int guess = adversary->phase2(t.views[0], t.views[1], oracle, coins);
    t.phase2_queries = oracle.queries() - t.phase1_queries;
    if (guess != 0 && guess != 1) {
      throw ProtocolError("adversary " + adversary->name() + " returned non-bit " + std::to_string(guess));
    }
    t.guess_bit = guess;
    t.win = guess == b;
  } catch (const BudgetError&) {
    t.aborted = true;
    t.win = false;
    t.phase2_queries = oracle.queries() - t.phase1_queries;
  }
  t.steps.push_back(GameStep::kJudge);
  return t;
}

bool al_win(const TrialTranscript& t, int tau) {
  return !t.aborted && hamming_distance(t.features[0], t.features[1]) <= tau;
}

bool pal_win(const BtpScheme& scheme, const TrialTranscript& t) {
  return !t.aborted && scheme.accepts(t.templates[0], t.features[1]);
}

GameResult collect(GameKind kind, const LambdaSet& lambda, std::string adversary, std::optional<int> tau,
                   std::vector<TrialTranscript>&& transcripts, const GameOptions& opts) {
  GameResult r;
  r.game = kind;
  r.lambda = lambda.to_string();
  r.adversary = std::move(adversary);
  r.tau = tau;
  r.trials = transcripts.size();
  for (const auto& t : transcripts) {
    r.wins += t.win ? 1 : 0;
    r.aborted += t.aborted ? 1 : 0;
    r.queries += t.challenger_queries + t.phase1_queries + t.phase2_queries;
    if (t.bit) {
      ++r.trials_by_bit[static_cast<std::size_t>(*t.bit)];
      r.wins_by_bit[static_cast<std::size_t>(*t.bit)] += t.win ? 1 : 0;
    }
    if (opts.keep_outcomes) {
      r.outcomes.push_back(t.win);
      r.transcript_hashes.push_back(transcript_hash(t));
    }
  }
  r.success = proportion_estimate(r.wins, r.trials, opts.confidence);
  r.success.queries_used = r.queries;
  if (opts.keep_transcripts) r.transcripts = std::move(transcripts);
  return r;
}

std::string adversary_name(const IrrFactory& f) { return f()->name(); }
std::string adversary_name(const UnlinkFactory& f) { return f()->name(); }

}  // namespace

std::uint64_t transcript_hash(const TrialTranscript& t) {
  std::uint64_t h = kFnvOffset;
  for (auto s : t.steps) fnv_mix(h, static_cast<std::uint64_t>(s));
  fnv_mix(h, t.user ? *t.user : ~std::uint64_t{0});
  for (const auto& x : t.features) fnv_mix(h, x.bits());
  for (const auto& pt : t.templates) {
    fnv_mix(h, fingerprint(pt.pi));
    fnv_mix(h, fingerprint(pt.alpha));
  }
  fnv_mix(h, t.bit ? static_cast<std::uint64_t>(*t.bit) : 7);
  fnv_mix(h, t.guess_bit ? static_cast<std::uint64_t>(*t.guess_bit) : 7);
  fnv_mix(h, (t.win ? 1u : 0u) | (t.aborted ? 2u : 0u));
  fnv_mix(h, t.challenger_queries);
  fnv_mix(h, t.phase1_queries);
  fnv_mix(h, t.phase2_queries);
  return h;
}

void check_transcript(GameKind kind, const BtpScheme& scheme, const LambdaSet& lambda, std::optional<int> tau,
                      const TrialTranscript& t) {
  static const std::vector<GameStep> order = {GameStep::kSetup, GameStep::kAdversaryPhase1, GameStep::kChallenge,
                                              GameStep::kAdversaryPhase2, GameStep::kJudge};
  protocol_check(!t.steps.empty() && t.steps.back() == GameStep::kJudge, "last step must be the judgement");
  if (t.aborted) {
    protocol_check(t.steps.size() >= 3, "aborted trial must still record setup and phase 1");
    for (std::size_t k = 0; k + 1 < t.steps.size(); ++k) protocol_check(t.steps[k] == order[k], "step order");
    protocol_check(!t.win, "aborted trial counted as a win");
    return;
  }
  protocol_check(t.steps == order, "step order");
  if (kind == GameKind::kUnlink) {
    protocol_check(!t.user, "UNLINK challenger picks no user");
    protocol_check(t.features.size() == 3 && t.templates.size() == 2 && t.views.size() == 2,
                   "UNLINK records (x, x0, x1), (PT, PT') and two views");
    protocol_check(t.bit && (*t.bit == 0 || *t.bit == 1), "challenge bit");
    protocol_check(t.guess_bit && (*t.guess_bit == 0 || *t.guess_bit == 1), "guess must be a bit");
    const LambdaSet full = LambdaSet::both();
    protocol_check(scheme.consistent(lambda_project(t.templates[0], full), full, t.features[0]),
                   "PT is not an encoding of x");
    protocol_check(scheme.consistent(lambda_project(t.templates[1], full), full, t.features[1 + *t.bit]),
                   "PT' is not an encoding of x_b");
    for (int k = 0; k < 2; ++k) {
      protocol_check(t.views[k] == lambda_project(t.templates[k], lambda), "view is not the Lambda-subset");
    }
    protocol_check(t.win == (*t.guess_bit == *t.bit), "win rule b' = b");
    protocol_check(t.challenger_queries == 0, "UNLINK challenger does not query Samp");
    return;
  }
  protocol_check(t.user.has_value(), "challenger must pick a user");
  protocol_check(t.features.size() == 2 && t.templates.size() == 1 && t.views.size() == 1,
                 "IRR records (x, x'), PT and one view");
  protocol_check(t.challenger_queries == 1, "challenger queries Samp exactly once");
  protocol_check(!t.bit && !t.guess_bit, "IRR games have no bits");
  protocol_check(scheme.consistent(lambda_project(t.templates[0], LambdaSet::both()), LambdaSet::both(),
                                   t.features[0]),
                 "PT is not an encoding of x");
  protocol_check(t.views[0] == lambda_project(t.templates[0], lambda), "view is not the Lambda-subset");
  if (kind == GameKind::kAlIrr) {
    protocol_check(tau.has_value(), "AL game needs tau");
    protocol_check(t.win == (hamming_distance(t.features[0], t.features[1]) <= *tau), "AL win rule d(x, x') <= tau");
  } else {
    protocol_check(t.win == scheme.accepts(t.templates[0], t.features[1]), "PAL win rule PIC(pi, PIR(alpha, x'))");
  }
}

GameResult run_al_irr_game(const BtpScheme& scheme, const Population& pop, const LambdaSet& lambda, int tau,
                           const IrrFactory& adversary, const GameOptions& opts, std::optional<Extremum> baseline) {
  if (tau < 0) throw ContractError("tau must be nonnegative");
  if (opts.trials < 1) throw ConfigError("trials must be at least 1");
  const GameParams params = make_params(scheme, pop, lambda, tau);
  auto transcripts = run_indexed<TrialTranscript>(opts.trials, opts.jobs, [&](std::uint64_t i) {
    TrialTranscript t = play_irr(scheme, pop, params, adversary, opts, i);
    t.win = al_win(t, tau);
    return t;
  });
  if (!baseline) {
    EstimatorOptions eo;
    eo.seed = opts.seed;
    baseline = extremal_mr(pop, tau, eo);
  }
  GameResult r = collect(GameKind::kAlIrr, lambda, adversary_name(adversary), tau, std::move(transcripts), opts);
  r.baseline = baseline->value;
  r.baseline_lower_bound = baseline->lower_bound;
  r.advantage = shifted(r.success, baseline->value);
  return r;
}

GameResult run_pal_irr_game(const BtpScheme& scheme, const Population& pop, const LambdaSet& lambda,
                            const IrrFactory& adversary, const GameOptions& opts, std::optional<Extremum> baseline) {
  if (opts.trials < 1) throw ConfigError("trials must be at least 1");
  const GameParams params = make_params(scheme, pop, lambda, std::nullopt);
  auto transcripts = run_indexed<TrialTranscript>(opts.trials, opts.jobs, [&](std::uint64_t i) {
    TrialTranscript t = play_irr(scheme, pop, params, adversary, opts, i);
    t.win = pal_win(scheme, t);
    return t;
  });
  if (!baseline) {
    EstimatorOptions eo;
    eo.seed = opts.seed;
    baseline = extremal_rmr(scheme, pop, eo);
  }
  GameResult r = collect(GameKind::kPalIrr, lambda, adversary_name(adversary), std::nullopt,
                         std::move(transcripts), opts);
  r.baseline = baseline->value;
  r.baseline_lower_bound = baseline->lower_bound;
  r.advantage = shifted(r.success, baseline->value);
  return r;
}

GameResult run_unlink_game(const BtpScheme& scheme, const Population& pop, const LambdaSet& lambda,
                           const UnlinkFactory& adversary, const GameOptions& opts) {
  if (opts.trials < 1) throw ConfigError("trials must be at least 1");
  if (opts.forced_bit && *opts.forced_bit != 0 && *opts.forced_bit != 1) {
    throw ContractError("forced challenge bit must be 0 or 1");
  }
  const GameParams params = make_params(scheme, pop, lambda, std::nullopt);
  auto transcripts = run_indexed<TrialTranscript>(opts.trials, opts.jobs, [&](std::uint64_t i) {
    return play_unlink(scheme, pop, params, adversary, opts, i);
  });
  GameResult r = collect(GameKind::kUnlink, lambda, adversary_name(adversary), std::nullopt,
                         std::move(transcripts), opts);
  r.advantage = distinguishing_advantage(r.success);
  return r;
}

CoupledTrials run_coupled_irr_trials(const BtpScheme& scheme, const Population& pop, const LambdaSet& lambda,
                                     int tau, const IrrFactory& adversary, const GameOptions& opts) {
  if (tau < 0) throw ContractError("tau must be nonnegative");
  if (opts.trials < 1) throw ConfigError("trials must be at least 1");
  const GameParams params = make_params(scheme, pop, lambda, tau);
  CoupledTrials out;
  out.outcomes = run_indexed<CoupledOutcome>(opts.trials, opts.jobs, [&](std::uint64_t i) {
    const TrialTranscript t = play_irr(scheme, pop, params, adversary, opts, i);
    return CoupledOutcome{al_win(t, 0), al_win(t, tau), pal_win(scheme, t), t.aborted};
  });
  for (const auto& o : out.outcomes) {
    out.full_wins += o.full ? 1 : 0;
    out.authorized_wins += o.authorized ? 1 : 0;
    out.pseudo_wins += o.pseudo ? 1 : 0;
    out.full_not_authorized += (o.full && !o.authorized) ? 1 : 0;
    out.authorized_not_pseudo += (o.authorized && !o.pseudo) ? 1 : 0;
  }
  return out;
}

CrossMatchRates est_cross_match_rates(const BtpScheme& scheme, const Population& pop, const LambdaSet& lambda,
                                      const UnlinkFactory& comparator, const GameOptions& opts) {
  if (pop.size() < 2) throw ConfigError("cross-match rates need U >= 2");
  CrossMatchRates out;
  GameOptions forced = opts;
  forced.keep_outcomes = false;
  forced.keep_transcripts = false;

  // b = 1: the comparator errs by answering 0.
  forced.forced_bit = 1;
  forced.seed = derive_seed(opts.seed, 1, Stream::kChallengerCoin);
  const GameResult non_mated = run_unlink_game(scheme, pop, lambda, comparator, forced);
  out.fcmr = proportion_estimate(non_mated.trials - non_mated.wins, non_mated.trials, opts.confidence);

  forced.forced_bit = 0;
  forced.seed = derive_seed(opts.seed, 0, Stream::kChallengerCoin);
  const GameResult mated = run_unlink_game(scheme, pop, lambda, comparator, forced);
  out.fncmr = proportion_estimate(mated.trials - mated.wins, mated.trials, opts.confidence);

  out.identity = std::abs(1.0 - (out.fcmr.point + out.fncmr.point));
  out.identity_std_error = std::hypot(out.fcmr.std_error, out.fncmr.std_error);

  GameOptions plain = opts;
  plain.forced_bit.reset();
  plain.seed = derive_seed(opts.seed, 2, Stream::kChallengerCoin);
  out.unlink = run_unlink_game(scheme, pop, lambda, comparator, plain);
  const double combined = std::hypot(out.identity_std_error, out.unlink.advantage.std_error);
  out.consistent = std::abs(out.identity - out.unlink.advantage.point) <= 3.0 * combined;
  return out;
}

}  // namespace btp
