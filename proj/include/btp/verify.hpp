#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "btp/adversaries.hpp"
#include "btp/games.hpp"

namespace btp {

enum class VerdictStatus { kPass, kFail, kNotApplicable, kVacuous, kSkipped };

/// "pass", "fail", "not_applicable", "vacuous", "skipped".
std::string to_string(VerdictStatus status);

/// One inequality or inclusion inside a check.
struct VerdictPart {
  std::string name;
  VerdictStatus status = VerdictStatus::kPass;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
  std::string relation;
};

struct TheoremVerdict {
  std::string id;
  /// Distinguishes variants of one theorem, e.g. the Lambda of T1 and T4.
  std::string label;
  VerdictStatus status = VerdictStatus::kPass;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
  /// How lhs relates to rhs, e.g. "lhs >= rhs - tolerance".
  std::string relation;
  std::vector<std::string> notes;
  std::vector<VerdictPart> parts;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();

  /// Everything but a failure counts as acceptable for the exit status.
  bool acceptable() const { return status != VerdictStatus::kFail; }
};

struct VerifyOptions {
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  std::uint64_t query_budget = kDefaultQueryBudget;
  /// Width of the statistical slack in combined standard errors.
  double sigmas = 3.0;
};

/// Coupled FL / AL_tau / PAL inclusions for one adversary (zero tolerance).
/// The PAL part is skipped for schemes that are not tau-threshold-compatible.
TheoremVerdict check_thm_irr_relations(const BtpScheme& scheme, const Population& pop, const LambdaSet& lambda,
                                       int tau, const IrrFactory& adversary, const VerifyOptions& opts = {});

/// The sampler adversary wins the {PI,AD}-PAL game with rate > 1 - gamma.
/// Not applicable when the measured C^2 >= delta.
TheoremVerdict check_thm_unarch_pal_irr(const BtpScheme& scheme, const Population& pop, double delta,
                                        double gamma, const VerifyOptions& opts = {});

/// The match adversary reaches UNLINK advantage 1 - MR_Pi. Not applicable
/// unless every PT accepts its own feature element.
TheoremVerdict check_thm_unarch_unlink(const BtpScheme& scheme, const Population& pop,
                                       const VerifyOptions& opts = {});

/// Adv_B >= (1 - p_tau) Adv_A - (p_tau - q_tau) m_{d<=tau} for the reduction B
/// built from `inner`. Vacuous when p_tau = 1; not applicable for n > 12.
TheoremVerdict check_thm_unlink_irr_bound(const BtpScheme& scheme, const Population& pop, const LambdaSet& lambda,
                                          int tau, const IrrFactory& inner, const VerifyOptions& opts = {});

/// Whether PIC(pi, PIR(alpha, x)) = match for every x and every PIE outcome.
/// Exhaustive when the exact model applies, otherwise over `samples` random
/// (x, r) pairs; `exhaustive` reports which one ran.
bool own_feature_always_matches(const BtpScheme& scheme, const Population& pop, bool* exhaustive = nullptr,
                                std::uint64_t samples = 100000, std::uint64_t seed = 1);

struct VerifySuiteConfig {
  int tau = 1;
  double delta = 0.16;
  double gamma = 0.5;
  std::string irr_adversary = "view-sampler";
  std::string reduction_inner = "view-sampler";
};

/// T1 for {PI} and {AD}, T2, T3, T4 for {PI} and {AD}, in that order.
/// `which` is "t1", "t2", "t3", "t4" or "all".
std::vector<TheoremVerdict> run_verify_suite(const BtpScheme& scheme, const Population& pop, const std::string& which,
                                             const VerifySuiteConfig& cfg, const VerifyOptions& opts = {});

}  // namespace btp
