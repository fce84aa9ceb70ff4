#include "btp/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <memory>
#include <optional>

#include "btp/adversaries.hpp"
#include "btp/config.hpp"
#include "btp/errors.hpp"
#include "btp/metrics.hpp"
#include "btp/report.hpp"
#include "btp/schemes.hpp"
#include "btp/verify.hpp"

namespace btp {

namespace {

using nlohmann::ordered_json;

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  unsigned jobs = 1;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::string> lambda;
  std::optional<int> tau;
  std::optional<std::string> adversary;
  std::string game;
  std::string theorem = "all";
};

ExperimentConfig effective_config(const Overrides& o) {
  ExperimentConfig cfg = o.config_path.empty() ? parse_config(nlohmann::json::object()) : load_config(o.config_path);
  if (o.seed) cfg.seed = *o.seed;
  if (o.trials) cfg.trials = *o.trials;
  if (o.out) cfg.out = *o.out;
  if (o.format) cfg.format = *o.format;
  if (o.lambda) {
    try {
      cfg.lambda = LambdaSet::parse(*o.lambda);
    } catch (const ContractError& e) {
      throw ConfigError(e.what());
    }
  }
  if (o.tau) cfg.tau = *o.tau;
  validate_config(cfg);
  return cfg;
}

// Scheme and population built from a config; config errors are rethrown as such.
struct Setup {
  Population population;
  std::unique_ptr<BtpScheme> scheme;
};

Setup build(const ExperimentConfig& cfg) {
  Population pop = generate_population(cfg.population);
  std::unique_ptr<BtpScheme> scheme;
  try {
    scheme = make_scheme(cfg.scheme);
  } catch (const ContractError& e) {
    throw ConfigError(e.what());
  }
  return {std::move(pop), std::move(scheme)};
}

ordered_json report_header(const std::string& command, const ExperimentConfig& cfg) {
  ordered_json r;
  r["schema_version"] = kReportSchemaVersion;
  r["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  r["command"] = command;
  r["config"] = config_to_json(cfg);
  return r;
}

ordered_json extremum_json(const Extremum& e) {
  ordered_json j;
  j["value"] = e.value;
  j["witness"] = e.witness.to_string();
  j["provenance"] = e.lower_bound ? "lower-bound" : "exact";
  return j;
}

EstimatorOptions estimator_options(const ExperimentConfig& cfg, unsigned jobs) {
  EstimatorOptions eo;
  eo.trials = cfg.trials;
  eo.seed = cfg.seed;
  eo.jobs = jobs;
  eo.query_budget = cfg.query_budget;
  return eo;
}

void cmd_metrics(const ExperimentConfig& cfg, const Setup& s, unsigned jobs, ordered_json& report) {
  const BtpScheme& scheme = *s.scheme;
  const Population& pop = s.population;
  const EstimatorOptions eo = estimator_options(cfg, jobs);
  std::optional<ExactModel<double>> model;
  if (exact_model_applies(scheme, pop)) model.emplace(scheme, pop);
  auto with_exact = [](AdvantageEstimate est, std::optional<double> exact) {
    est.exact = exact;
    return est;
  };
  auto exact_of = [&](auto fn) -> std::optional<double> {
    if (!model) return std::nullopt;
    return fn(*model);
  };

  auto& metrics = report["metrics"] = ordered_json::array();
  auto& warnings = report["warnings"];

  const BaselineRates closed = exact_baseline_rates(pop, cfg.tau);
  const BaselineEstimates base = est_baseline_rates(pop, cfg.tau, eo);
  metrics.push_back(metric_json("fnmr_baseline", with_exact(base.fnmr, closed.fnmr)));
  metrics.push_back(metric_json("fmr_baseline", with_exact(base.fmr, closed.fmr)));
  metrics.push_back(metric_json("fnmr", with_exact(est_scheme_fnmr(scheme, pop, eo),
                                                   exact_of([](const auto& m) { return m.fnmr(); }))));
  metrics.push_back(metric_json("fmr_tp_ad", with_exact(est_fmr_tp(scheme, pop, SecondFactor::kAD, eo),
                                                        exact_of([](const auto& m) { return m.fmr_tp_ad(); }))));
  metrics.push_back(metric_json("fmr_tp_pi", with_exact(est_fmr_tp(scheme, pop, SecondFactor::kPI, eo),
                                                        exact_of([](const auto& m) { return m.fmr_tp_pi(); }))));
  metrics.push_back(metric_json("fmr_bp", with_exact(est_fmr_bp(scheme, pop, eo),
                                                     exact_of([](const auto& m) { return m.fmr_bp(); }))));
  {
    const DiversityEstimate div = est_fmr_div(scheme, pop, eo);
    const auto exact = exact_of([](const auto& m) { return m.fmr_div(); });
    ordered_json j = metric_json("fmr_div", with_exact(div.fmr, exact));
    j["entropy_bits"] = div.entropy_bits ? ordered_json(*div.entropy_bits) : ordered_json(nullptr);
    if (exact) {
      const auto h = diversity_entropy(*exact);
      j["exact_entropy_bits"] = h ? ordered_json(*h) : ordered_json(nullptr);
    }
    metrics.push_back(std::move(j));
  }

  const Extremum m_tau = extremal_mr(pop, cfg.tau, eo);
  const Extremum m_0 = extremal_mr(pop, 0, eo);
  const Extremum m_pi = extremal_rmr(scheme, pop, eo);
  for (const auto* e : {&m_tau, &m_0, &m_pi}) {
    if (e->lower_bound) {
      warnings.push_back("m-values come from a candidate set and are lower bounds");
      break;
    }
  }
  {
    std::optional<double> exact;
    if (pop.dimension() <= kMaxClosedFormDimension) exact = mr_of_feature(pop, m_tau.witness, cfg.tau);
    ordered_json j =
        metric_json("mr_feature", with_exact(est_mr_of_feature(pop, m_tau.witness, cfg.tau, eo), exact));
    j["feature"] = m_tau.witness.to_string();
    metrics.push_back(std::move(j));
  }
  {
    const auto exact = exact_of([&](const auto& m) { return m.reverse_match_rates()(
        static_cast<Eigen::Index>(m_pi.witness.bits())); });
    ordered_json j = metric_json("rmr_feature", with_exact(rmr_of_feature(scheme, pop, m_pi.witness, eo), exact));
    j["feature"] = m_pi.witness.to_string();
    metrics.push_back(std::move(j));
  }
  std::optional<MatchRateStats> exact_stats;
  {
    const std::uint64_t outer = std::max<std::uint64_t>(2, cfg.trials / 10);
    const std::uint64_t inner = 100;
    ordered_json j;
    j["metric"] = "mr_pt";
    try {
      const MatchRateSample sample = pt_match_stats(scheme, pop, outer, inner, eo);
      j["estimate"] = sample.stats.mean;
      j["ci"] = {sample.mean_ci.low, sample.mean_ci.high};
      if (model) j["exact"] = model->match_rate_mean();
      j["trials"] = outer;
      j["queries"] = sample.queries;
      j["inner_trials"] = inner;
      j["std_dev"] = sample.stats.std_dev;
      j["std_dev_ci"] = {sample.std_dev_ci.low, sample.std_dev_ci.high};
      j["variation_coeff"] = sample.stats.variation_coeff;
    } catch (const UndefinedError& e) {
      j["estimate"] = 0.0;
      j["ci"] = {0.0, 0.0};
      j["trials"] = outer;
      warnings.push_back(std::string("mr_pt: ") + e.what());
    }
    metrics.push_back(std::move(j));
  }

  auto& constants = report["constants"];
  constants["tau"] = cfg.tau;
  constants["m_tau"] = extremum_json(m_tau);
  constants["m_0"] = extremum_json(m_0);
  constants["m_pi"] = extremum_json(m_pi);
  if (pop.dimension() <= kMaxExactDimension) {
    const OverlapRates o = overlap_rates(pop, cfg.tau);
    constants["p_tau"] = {{"value", o.p}, {"witness", o.argmax.to_string()}};
    constants["q_tau"] = {{"value", o.q}, {"witness", o.argmin.to_string()}};
  }
  if (model) {
    const double mean = model->match_rate_mean();
    const double sd = model->match_rate_std_dev();
    constants["mr_pi"] = mean;
    constants["sigma"] = sd;
    constants["variation_coeff"] = mean > 0 ? ordered_json(sd / mean) : ordered_json(nullptr);
  }
}

void cmd_game(const ExperimentConfig& cfg, const Setup& s, const Overrides& o, unsigned jobs, ordered_json& report) {
  const GameKind kind = parse_game_kind(o.game);
  AdversaryContext ctx;
  ctx.scheme = s.scheme.get();
  ctx.population = &s.population;
  ctx.game = kind;
  ctx.lambda = cfg.lambda;
  ctx.tau = cfg.tau;
  ctx.delta = cfg.delta;
  ctx.gamma = cfg.gamma;
  ctx.seed = cfg.seed;
  GameOptions go;
  go.trials = cfg.trials;
  go.seed = cfg.seed;
  go.jobs = jobs;
  go.query_budget = cfg.query_budget;
  GameResult result;
  if (kind == GameKind::kUnlink) {
    const std::string name = o.adversary.value_or(cfg.adversaries.unlink);
    result = run_unlink_game(*s.scheme, s.population, cfg.lambda, make_unlink_adversary(name, ctx), go);
  } else {
    const std::string name = o.adversary.value_or(cfg.adversaries.irr);
    const IrrFactory adversary = make_irr_adversary(name, ctx);
    result = kind == GameKind::kAlIrr
                 ? run_al_irr_game(*s.scheme, s.population, cfg.lambda, cfg.tau, adversary, go)
                 : run_pal_irr_game(*s.scheme, s.population, cfg.lambda, adversary, go);
    if (result.baseline_lower_bound) {
      report["warnings"].push_back("advantage baseline is a candidate-set lower bound of the m-value");
    }
  }
  report["games"] = ordered_json::array({game_json(result)});
}

bool cmd_verify(const ExperimentConfig& cfg, const Setup& s, const Overrides& o, unsigned jobs, ordered_json& report,
                std::ostream& err) {
  VerifySuiteConfig suite;
  suite.tau = cfg.tau;
  suite.delta = cfg.delta;
  suite.gamma = cfg.gamma;
  suite.irr_adversary = cfg.adversaries.t1;
  suite.reduction_inner = cfg.adversaries.t4_inner;
  VerifyOptions vo;
  vo.trials = cfg.trials;
  vo.seed = cfg.seed;
  vo.jobs = jobs;
  vo.query_budget = cfg.query_budget;
  const auto verdicts = run_verify_suite(*s.scheme, s.population, o.theorem, suite, vo);
  auto& theorems = report["theorems"] = ordered_json::array();
  bool ok = true;
  for (const auto& v : verdicts) {
    theorems.push_back(verdict_json(v));
    ok = ok && v.acceptable();
    if (v.status == VerdictStatus::kNotApplicable || v.status == VerdictStatus::kSkipped ||
        v.status == VerdictStatus::kVacuous) {
      std::string why = v.notes.empty() ? "" : ": " + v.notes.back();
      const std::string line = v.id + "(" + v.label + ") " + to_string(v.status) + why;
      report["warnings"].push_back(line);
      err << "notice: " << line << '\n';
    }
  }
  return ok;
}

void add_common_options(CLI::App& app, Overrides& o) {
  app.add_option("--config", o.config_path, "JSON experiment configuration");
  app.add_option("--seed", o.seed, "master seed for all trial streams");
  app.add_option("--trials", o.trials, "Monte Carlo trials per estimate")->check(CLI::PositiveNumber);
  app.add_option("--jobs", o.jobs, "worker threads (results do not depend on it)")->check(CLI::PositiveNumber);
  app.add_option("--out", o.out, "write the report to this file instead of stdout");
  app.add_option("--format", o.format, "report format")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Evaluate biometric template protection schemes: metrics, security games, theorem checks",
               args.empty() ? kToolName : args[0]};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  Overrides o;
  add_common_options(app, o);
  app.fallthrough();

  auto* metrics = app.add_subcommand("metrics", "recognition and protection metrics with exact twins");
  auto* game = app.add_subcommand("game", "run one security game");
  game->add_option("kind", o.game, "al-irr, pal-irr or unlink")->required()->check(
      CLI::IsMember({"al-irr", "pal-irr", "unlink"}));
  game->add_option("--lambda", o.lambda, "leaked part of the template: pi, ad or pi+ad");
  game->add_option("--adversary", o.adversary, "adversary name");
  game->add_option("--tau", o.tau, "AL threshold")->check(CLI::NonNegativeNumber);
  auto* verify = app.add_subcommand("verify", "empirical theorem checks");
  verify->add_option("--theorem", o.theorem, "t1, t2, t3, t4 or all")
      ->check(CLI::IsMember({"t1", "t2", "t3", "t4", "all"}));
  verify->add_option("--tau", o.tau, "threshold for t1 and t4")->check(CLI::NonNegativeNumber);

  std::vector<const char*> argv;
  std::vector<std::string> storage = args.empty() ? std::vector<std::string>{kToolName} : args;
  for (const auto& a : storage) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForVersion" || e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
      app.exit(e, out, err);
      return kExitOk;
    }
    app.exit(e, out, err);
    return kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  ordered_json report;
  std::string format = "json";
  std::string path;
  try {
    ExperimentConfig cfg = effective_config(o);
    format = cfg.format;
    path = cfg.out;
    const Setup s = build(cfg);
    if (const auto* fc = dynamic_cast<const FuzzyCommitment*>(s.scheme.get())) {
      cfg.scheme.code_radius = fc->code().radius();
    }
    const std::string command = metrics->parsed() ? "metrics" : game->parsed() ? "game" : "verify";
    report = report_header(command, cfg);
    report["warnings"] = ordered_json::array();
    if (metrics->parsed()) {
      cmd_metrics(cfg, s, o.jobs, report);
    } else if (game->parsed()) {
      cmd_game(cfg, s, o, o.jobs, report);
    } else {
      ok = cmd_verify(cfg, s, o, o.jobs, report, err);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report["timings"] = {{"wall_seconds", seconds}, {"jobs", o.jobs}};

  const std::string text = format == "csv" ? report_csv(report) : report.dump(2) + "\n";
  if (path.empty()) {
    out << text;
  } else {
    std::ofstream file(path);
    if (!file) {
      err << "error: cannot write report to '" << path << "'\n";
      return kExitUsage;
    }
    file << text;
  }
  if (!ok) {
    err << "verification failed: at least one check did not hold\n";
    return kExitVerificationFailed;
  }
  return kExitOk;
}

}  // namespace btp
