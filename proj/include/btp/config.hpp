#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "btp/population.hpp"
#include "btp/scheme.hpp"
#include "btp/schemes.hpp"

namespace btp {

struct AdversarySelection {
  /// Used by `game al-irr|pal-irr` when --adversary is absent.
  std::string irr = "blind";
  /// Used by `game unlink` when --adversary is absent.
  std::string unlink = "appendix-b";
  /// Witness adversary for the coupled T1 check.
  std::string t1 = "view-sampler";
  /// Inner AL_tau adversary of the T4 reduction.
  std::string t4_inner = "view-sampler";
};

/// Everything an experiment needs. Parsed from JSON; CLI flags override the
/// run-level fields (seed, trials, lambda, tau, output).
struct ExperimentConfig {
  PopulationConfig population;
  SchemeConfig scheme;
  std::uint64_t trials = 10000;
  std::uint64_t query_budget = kDefaultQueryBudget;
  std::uint64_t seed = 1;
  LambdaSet lambda = LambdaSet::both();
  int tau = 1;
  double delta = 0.16;
  double gamma = 0.5;
  AdversarySelection adversaries;
  std::string out;
  std::string format = "json";
};

/// Strict parse: unknown keys and ill-typed values raise ConfigError.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// Echo of the effective configuration for reports.
nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);

/// Checks cross-field constraints (scheme dimension, tau, format, ...).
void validate_config(const ExperimentConfig& cfg);

}  // namespace btp
