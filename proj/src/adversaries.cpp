#include "btp/adversaries.hpp"

#include <cmath>

#include "btp/errors.hpp"

namespace btp {

namespace {

std::size_t uniform_user(const GameParams& params, Rng& coins) { return uniform_below(coins, params.users); }

void require_full_lambda(const GameParams& params, const std::string& who) {
  if (!params.lambda.is_full()) {
    throw ContractError(who + " needs Lambda = {PI, AD}, got " + params.lambda.to_string());
  }
}

ProtectedTemplate full_template(const LambdaView& view, const std::string& who) {
  if (!view.pi || !view.alpha) throw ContractError(who + " needs both PI and AD in the view");
  return {*view.pi, *view.alpha};
}

class BlindArgmax final : public IrrAdversary {
 public:
  explicit BlindArgmax(FeatureElement target) : target_(target) {}
  std::string name() const override { return "blind"; }
  void phase1(const GameParams&, SamplingOracle&, Rng&) override {}
  FeatureElement phase2(const LambdaView&, SamplingOracle&, Rng&) override { return target_; }

 private:
  FeatureElement target_;
};

class PalSampler final : public IrrAdversary {
 public:
  explicit PalSampler(PalSamplerConfig cfg) : cfg_(cfg) {}
  std::string name() const override { return "pal-sampler"; }
  void phase1(const GameParams& params, SamplingOracle&, Rng&) override {
    require_full_lambda(params, name());
    params_ = params;
  }
  FeatureElement phase2(const LambdaView& view, SamplingOracle& oracle, Rng& coins) override {
    const ProtectedTemplate pt = full_template(view, name());
    FeatureElement last;
    for (std::uint64_t i = 0; i < cfg_.n_delta; ++i) {
      last = oracle.sample(uniform_user(params_, coins));
      if (params_.scheme->accepts(pt, last)) return last;
    }
    return last;
  }

 private:
  PalSamplerConfig cfg_;
  GameParams params_;
};

class UnlinkMatch final : public UnlinkAdversary {
 public:
  std::string name() const override { return "appendix-b"; }
  UnlinkChoice phase1(const GameParams& params, SamplingOracle& oracle, Rng& coins) override {
    require_full_lambda(params, name());
    scheme_ = params.scheme;
    const std::size_t u = uniform_user(params, coins);
    const std::size_t u0 = uniform_user(params, coins);
    const std::size_t u1 = uniform_user(params, coins);
    choice_ = {oracle.sample(u), oracle.sample(u0), oracle.sample(u1)};
    return choice_;
  }
  int phase2(const LambdaView&, const LambdaView& view_prime, SamplingOracle&, Rng& coins) override {
    const ProtectedTemplate pt = full_template(view_prime, name());
    if (!scheme_->accepts(pt, choice_.x1)) return 0;
    if (!scheme_->accepts(pt, choice_.x0)) return 1;
    return fair_coin(coins);
  }

 private:
  const BtpScheme* scheme_ = nullptr;
  UnlinkChoice choice_;
};

class CrossComparator final : public UnlinkAdversary {
 public:
  explicit CrossComparator(CrossRule rule) : rule_(std::move(rule)) {}
  std::string name() const override { return "cross-comparator(rule=" + rule_.name + ")"; }
  UnlinkChoice phase1(const GameParams& params, SamplingOracle& oracle, Rng& coins) override {
    if (params.users < 2) throw ConfigError("cross-comparator needs U >= 2");
    scheme_ = params.scheme;
    const std::size_t u = uniform_user(params, coins);
    std::size_t v = uniform_below(coins, params.users - 1);
    if (v >= u) ++v;
    const FeatureElement x = oracle.sample(u);
    const FeatureElement x0 = oracle.sample(u);
    choice_ = {x, x0, oracle.sample(v)};
    return choice_;
  }
  int phase2(const LambdaView& view, const LambdaView& view_prime, SamplingOracle&, Rng& coins) override {
    return rule_.decide(*scheme_, view, view_prime, choice_, coins);
  }

 private:
  CrossRule rule_;
  const BtpScheme* scheme_ = nullptr;
  UnlinkChoice choice_;
};

class Reduction final : public UnlinkAdversary {
 public:
  Reduction(IrrFactory inner, int tau) : make_inner_(std::move(inner)), tau_(tau) {}
  std::string name() const override { return "reduction(inner=" + make_inner_()->name() + ")"; }
  UnlinkChoice phase1(const GameParams& params, SamplingOracle& oracle, Rng& coins) override {
    inner_ = make_inner_();
    GameParams inner_params = params;
    inner_params.tau = tau_;
    inner_->phase1(inner_params, oracle, coins);
    const std::size_t u = uniform_user(params, coins);
    const std::size_t u0 = uniform_user(params, coins);
    const std::size_t u1 = uniform_user(params, coins);
    choice_ = {oracle.sample(u), oracle.sample(u0), oracle.sample(u1)};
    return choice_;
  }
  int phase2(const LambdaView&, const LambdaView& view_prime, SamplingOracle& oracle, Rng& coins) override {
    if (neighborhood_overlap(choice_.x0, choice_.x1, tau_)) return fair_coin(coins);
    const FeatureElement guess = inner_->phase2(view_prime, oracle, coins);
    if (hamming_distance(choice_.x0, guess) <= tau_) return 0;
    if (hamming_distance(choice_.x1, guess) <= tau_) return 1;
    return fair_coin(coins);
  }

 private:
  IrrFactory make_inner_;
  int tau_;
  std::unique_ptr<IrrAdversary> inner_;
  UnlinkChoice choice_;
};

class ReadPi final : public IrrAdversary {
 public:
  std::string name() const override { return "read-pi"; }
  void phase1(const GameParams& params, SamplingOracle&, Rng&) override {
    if (!params.lambda.has_pi()) throw ContractError("read-pi needs PI in Lambda");
  }
  FeatureElement phase2(const LambdaView& view, SamplingOracle&, Rng&) override {
    if (!view.pi || !std::holds_alternative<FeatureElement>(*view.pi)) {
      throw ContractError("read-pi needs a PI that is a feature element");
    }
    return std::get<FeatureElement>(*view.pi);
  }
};

class ReadAlpha final : public IrrAdversary {
 public:
  std::string name() const override { return "read-alpha"; }
  void phase1(const GameParams& params, SamplingOracle&, Rng&) override {
    if (!params.lambda.has_ad()) throw ContractError("read-alpha needs AD in Lambda");
  }
  FeatureElement phase2(const LambdaView& view, SamplingOracle&, Rng&) override {
    if (!view.alpha || !std::holds_alternative<FeatureElement>(*view.alpha)) {
      throw ContractError("read-alpha needs an AD that is a feature element");
    }
    return std::get<FeatureElement>(*view.alpha);
  }
};

class ViewSampler final : public IrrAdversary {
 public:
  explicit ViewSampler(std::uint64_t tries) : tries_(tries) {}
  std::string name() const override { return "view-sampler"; }
  void phase1(const GameParams& params, SamplingOracle&, Rng&) override { params_ = params; }
  FeatureElement phase2(const LambdaView& view, SamplingOracle& oracle, Rng& coins) override {
    FeatureElement last;
    for (std::uint64_t i = 0; i < tries_; ++i) {
      last = oracle.sample(uniform_user(params_, coins));
      if (params_.scheme->consistent(view, params_.lambda, last)) return last;
    }
    return last;
  }

 private:
  std::uint64_t tries_;
  GameParams params_;
};

class CoinFlip final : public UnlinkAdversary {
 public:
  std::string name() const override { return "coin-flip"; }
  UnlinkChoice phase1(const GameParams& params, SamplingOracle& oracle, Rng& coins) override {
    const std::size_t u = uniform_user(params, coins);
    const std::size_t u0 = uniform_user(params, coins);
    const std::size_t u1 = uniform_user(params, coins);
    return {oracle.sample(u), oracle.sample(u0), oracle.sample(u1)};
  }
  int phase2(const LambdaView&, const LambdaView&, SamplingOracle&, Rng& coins) override { return fair_coin(coins); }
};

// "name(key=value)" -> value for the given key, or nullopt when `text` is
// not of that form.
std::optional<std::string> argument(const std::string& text, const std::string& name, const std::string& key) {
  const std::string prefix = name + "(" + key + "=";
  if (text.size() <= prefix.size() + 1 || text.compare(0, prefix.size(), prefix) != 0 || text.back() != ')') {
    return std::nullopt;
  }
  return text.substr(prefix.size(), text.size() - prefix.size() - 1);
}

}  // namespace

std::uint64_t sampler_repetitions(double mu, double target) {
  if (!(mu > 0.0 && mu < 1.0)) throw ConfigError("mu must lie in (0, 1)");
  if (!(target > 0.0 && target < 1.0)) throw ConfigError("repetition target must lie in (0, 1)");
  const double base = 1.0 - mu;
  auto estimate = static_cast<std::uint64_t>(std::max(1.0, std::ceil(std::log(target) / std::log(base))));
  // Settle rounding so that the minimality condition holds with pow itself.
  while (estimate > 1 && std::pow(base, static_cast<double>(estimate - 1)) < target) --estimate;
  while (!(std::pow(base, static_cast<double>(estimate)) < target)) ++estimate;
  return estimate;
}

PalSamplerConfig PalSamplerConfig::make(double delta, double gamma, const MatchRateStats& stats) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("gamma must lie in (0, 1)");
  if (!(delta > 0.0)) throw ConfigError("delta must be positive");
  const double c2 = stats.variation_coeff * stats.variation_coeff;
  if (!(delta > c2)) {
    throw VariationError("variation too high: C^2 = " + std::to_string(c2) + " >= delta = " + std::to_string(delta));
  }
  if (!(gamma > delta)) throw ConfigError("gamma must exceed delta");
  PalSamplerConfig cfg;
  cfg.delta = delta;
  cfg.gamma = gamma;
  cfg.mu = stats.chebyshev_threshold(delta);
  if (!(cfg.mu > 0.0 && cfg.mu < 1.0)) throw ConfigError("mu = MR_Pi - sigma/sqrt(delta) must lie in (0, 1)");
  cfg.n_delta = sampler_repetitions(cfg.mu, (gamma - delta) / (1.0 - delta));
  return cfg;
}

IrrFactory blind_argmax_adversary(const Extremum& target) {
  const FeatureElement x = target.witness;
  return [x] { return std::make_unique<BlindArgmax>(x); };
}

IrrFactory pal_sampler_adversary(const PalSamplerConfig& cfg) {
  return [cfg] { return std::make_unique<PalSampler>(cfg); };
}

UnlinkFactory unlink_match_adversary() {
  return [] { return std::make_unique<UnlinkMatch>(); };
}

CrossRule cross_rule(const std::string& name) {
  if (name == "pic-threshold") {
    return {name, [](const BtpScheme& scheme, const LambdaView&, const LambdaView& view_prime,
                     const UnlinkChoice& choice, Rng& coins) {
              if (!view_prime.pi || !view_prime.alpha) return fair_coin(coins);
              const ProtectedTemplate pt{*view_prime.pi, *view_prime.alpha};
              if (!scheme.accepts(pt, choice.x1)) return 0;
              if (!scheme.accepts(pt, choice.x0)) return 1;
              return fair_coin(coins);
            }};
  }
  if (name == "always-0") {
    return {name, [](const BtpScheme&, const LambdaView&, const LambdaView&, const UnlinkChoice&, Rng&) { return 0; }};
  }
  if (name == "always-1") {
    return {name, [](const BtpScheme&, const LambdaView&, const LambdaView&, const UnlinkChoice&, Rng&) { return 1; }};
  }
  throw ConfigError("unknown cross-comparator rule '" + name + "' (expected pic-threshold, always-0 or always-1)");
}

UnlinkFactory cross_comparator_adversary(CrossRule rule) {
  return [rule = std::move(rule)] { return std::make_unique<CrossComparator>(rule); };
}

UnlinkFactory reduction_unlink_adversary(IrrFactory inner, int tau) {
  if (tau < 0) throw ContractError("tau must be nonnegative");
  return [inner = std::move(inner), tau] { return std::make_unique<Reduction>(inner, tau); };
}

IrrFactory read_pi_adversary() {
  return [] { return std::make_unique<ReadPi>(); };
}

IrrFactory read_alpha_adversary() {
  return [] { return std::make_unique<ReadAlpha>(); };
}

IrrFactory view_sampler_adversary(std::uint64_t tries) {
  if (tries < 1) throw ConfigError("view-sampler needs at least one try");
  return [tries] { return std::make_unique<ViewSampler>(tries); };
}

UnlinkFactory coin_flip_adversary() {
  return [] { return std::make_unique<CoinFlip>(); };
}

MatchRateStats scheme_match_rate_stats(const BtpScheme& scheme, const Population& pop, const EstimatorOptions& opts) {
  if (exact_model_applies(scheme, pop)) {
    const ExactModel<double> model(scheme, pop);
    return make_match_rate_stats(model.match_rate_mean(), model.match_rate_std_dev());
  }
  return pt_match_stats(scheme, pop, 2000, 500, opts).stats;
}

IrrFactory make_irr_adversary(const std::string& name, const AdversaryContext& ctx) {
  if (!ctx.scheme || !ctx.population) throw ContractError("adversary context lacks scheme or population");
  const BtpScheme& scheme = *ctx.scheme;
  const Population& pop = *ctx.population;
  EstimatorOptions eo;
  eo.seed = ctx.seed;
  const ProtectedTemplate probe = scheme.encode_with(FeatureElement(0, scheme.dimension()), 0);
  if (name == "blind") {
    return blind_argmax_adversary(ctx.game == GameKind::kPalIrr ? extremal_rmr(scheme, pop, eo)
                                                                : extremal_mr(pop, ctx.tau, eo));
  }
  if (name == "pal-sampler") {
    if (!ctx.lambda.is_full()) {
      throw ConfigError("pal-sampler needs lambda pi+ad, got " + ctx.lambda.to_string());
    }
    const MatchRateStats stats = ctx.stats ? *ctx.stats : scheme_match_rate_stats(scheme, pop, eo);
    return pal_sampler_adversary(PalSamplerConfig::make(ctx.delta, ctx.gamma, stats));
  }
  if (name == "read-pi") {
    if (!ctx.lambda.has_pi()) throw ConfigError("read-pi needs PI in lambda");
    if (!std::holds_alternative<FeatureElement>(probe.pi)) {
      throw ConfigError("read-pi needs a scheme whose PI is a feature element");
    }
    return read_pi_adversary();
  }
  if (name == "read-alpha") {
    if (!ctx.lambda.has_ad()) throw ConfigError("read-alpha needs AD in lambda");
    if (!std::holds_alternative<FeatureElement>(probe.alpha)) {
      throw ConfigError("read-alpha needs a scheme whose AD is a feature element");
    }
    return read_alpha_adversary();
  }
  if (name == "view-sampler") return view_sampler_adversary();
  if (auto tries = argument(name, "view-sampler", "tries")) {
    try {
      return view_sampler_adversary(std::stoull(*tries));
    } catch (const std::logic_error&) {
      throw ConfigError("view-sampler tries must be a positive integer");
    }
  }
  throw ConfigError("unknown irreversibility adversary '" + name + "'");
}

UnlinkFactory make_unlink_adversary(const std::string& name, const AdversaryContext& ctx) {
  if (!ctx.scheme || !ctx.population) throw ContractError("adversary context lacks scheme or population");
  if (name == "appendix-b") {
    if (!ctx.lambda.is_full()) throw ConfigError("appendix-b needs lambda pi+ad, got " + ctx.lambda.to_string());
    return unlink_match_adversary();
  }
  if (name == "cross-comparator") return cross_comparator_adversary();
  if (auto rule = argument(name, "cross-comparator", "rule")) return cross_comparator_adversary(cross_rule(*rule));
  if (name == "coin-flip") return coin_flip_adversary();
  if (auto inner = argument(name, "reduction", "inner")) {
    AdversaryContext inner_ctx = ctx;
    inner_ctx.game = GameKind::kAlIrr;
    return reduction_unlink_adversary(make_irr_adversary(*inner, inner_ctx), ctx.tau);
  }
  throw ConfigError("unknown unlinkability adversary '" + name + "'");
}

std::vector<std::string> irr_adversary_names() {
  return {"blind", "pal-sampler", "read-pi", "read-alpha", "view-sampler"};
}

std::vector<std::string> unlink_adversary_names() {
  return {"appendix-b", "cross-comparator", "coin-flip", "reduction(inner=...)"};
}

}  // namespace btp
