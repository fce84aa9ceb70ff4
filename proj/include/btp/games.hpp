#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "btp/metrics.hpp"
#include "btp/population.hpp"
#include "btp/scheme.hpp"
#include "btp/stats.hpp"

namespace btp {

enum class GameKind { kAlIrr, kPalIrr, kUnlink };

std::string to_string(GameKind kind);
/// "al-irr", "pal-irr" or "unlink".
GameKind parse_game_kind(const std::string& text);

/// Public parameters handed to the adversary in step 1. The population itself
/// stays with the challenger; adversaries reach it only through Samp.
struct GameParams {
  const BtpScheme* scheme = nullptr;
  std::size_t users = 0;
  int dimension = 0;
  LambdaSet lambda = LambdaSet::both();
  /// Present in the AL_tau game only.
  std::optional<int> tau;
};

/// A = (A1, A2) for the irreversibility games. The instance itself is the
/// state s passed from phase 1 to phase 2; a fresh instance serves each trial.
class IrrAdversary {
 public:
  virtual ~IrrAdversary() = default;
  virtual std::string name() const = 0;
  virtual void phase1(const GameParams& params, SamplingOracle& oracle, Rng& coins) = 0;
  virtual FeatureElement phase2(const LambdaView& view, SamplingOracle& oracle, Rng& coins) = 0;
};

struct UnlinkChoice {
  FeatureElement x;
  FeatureElement x0;
  FeatureElement x1;
};

/// A = (A1, A2) for the unlinkability game.
class UnlinkAdversary {
 public:
  virtual ~UnlinkAdversary() = default;
  virtual std::string name() const = 0;
  virtual UnlinkChoice phase1(const GameParams& params, SamplingOracle& oracle, Rng& coins) = 0;
  /// Returns the guess b'; anything other than 0 or 1 is a protocol error.
  virtual int phase2(const LambdaView& view, const LambdaView& view_prime, SamplingOracle& oracle,
                     Rng& coins) = 0;
};

using IrrFactory = std::function<std::unique_ptr<IrrAdversary>()>;
using UnlinkFactory = std::function<std::unique_ptr<UnlinkAdversary>()>;

enum class GameStep { kSetup, kAdversaryPhase1, kChallenge, kAdversaryPhase2, kJudge };

/// What happened in one trial, in protocol order.
struct TrialTranscript {
  std::vector<GameStep> steps;
  /// Challenger's user (IRR games only).
  std::optional<std::size_t> user;
  /// IRR: {x, x'}. UNLINK: {x, x0, x1}.
  std::vector<FeatureElement> features;
  /// IRR: {PT}. UNLINK: {PT, PT'}.
  std::vector<ProtectedTemplate> templates;
  std::vector<LambdaView> views;
  std::optional<int> bit;
  std::optional<int> guess_bit;
  bool win = false;
  bool aborted = false;
  std::uint64_t challenger_queries = 0;
  std::uint64_t phase1_queries = 0;
  std::uint64_t phase2_queries = 0;
};

std::uint64_t transcript_hash(const TrialTranscript& t);

/// Replays a transcript against the step schema of `kind`: step order, the
/// Lambda projections, the challenge bit and the win predicate. Throws
/// ProtocolError on the first violation.
void check_transcript(GameKind kind, const BtpScheme& scheme, const LambdaSet& lambda,
                      std::optional<int> tau, const TrialTranscript& t);

struct GameOptions {
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  std::uint64_t query_budget = kDefaultQueryBudget;
  double confidence = 0.95;
  bool keep_outcomes = false;
  bool keep_transcripts = false;
  /// UNLINK only: fix the challenger's coin instead of flipping it.
  std::optional<int> forced_bit;
};

struct GameResult {
  GameKind game = GameKind::kAlIrr;
  std::string lambda;
  std::string adversary;
  std::optional<int> tau;
  std::uint64_t wins = 0;
  std::uint64_t trials = 0;
  std::uint64_t aborted = 0;
  std::uint64_t queries = 0;
  AdvantageEstimate success;
  AdvantageEstimate advantage;
  /// m-value subtracted from the success rate (IRR games).
  std::optional<double> baseline;
  bool baseline_lower_bound = false;
  /// UNLINK: wins and trials split by the challenger's bit.
  std::array<std::uint64_t, 2> wins_by_bit{};
  std::array<std::uint64_t, 2> trials_by_bit{};
  std::vector<bool> outcomes;
  std::vector<std::uint64_t> transcript_hashes;
  std::vector<TrialTranscript> transcripts;
};

/// Lambda-AL_tau IRR game. The baseline defaults to m_{d<=tau} from extremal_mr.
GameResult run_al_irr_game(const BtpScheme& scheme, const Population& pop, const LambdaSet& lambda, int tau,
                           const IrrFactory& adversary, const GameOptions& opts = {},
                           std::optional<Extremum> baseline = std::nullopt);

/// Lambda-PAL IRR game. The baseline defaults to m_Pi from extremal_rmr.
GameResult run_pal_irr_game(const BtpScheme& scheme, const Population& pop, const LambdaSet& lambda,
                            const IrrFactory& adversary, const GameOptions& opts = {},
                            std::optional<Extremum> baseline = std::nullopt);

/// Lambda-UNLINK game; advantage = |2 r - 1|.
GameResult run_unlink_game(const BtpScheme& scheme, const Population& pop, const LambdaSet& lambda,
                           const UnlinkFactory& adversary, const GameOptions& opts = {});

/// FL, AL_tau and PAL predicates evaluated on one shared transcript.
struct CoupledOutcome {
  bool full = false;
  bool authorized = false;
  bool pseudo = false;
  bool aborted = false;
};

struct CoupledTrials {
  std::vector<CoupledOutcome> outcomes;
  std::uint64_t full_wins = 0;
  std::uint64_t authorized_wins = 0;
  std::uint64_t pseudo_wins = 0;
  /// Trials with an FL win that is not an AL_tau win (always 0 on the cube).
  std::uint64_t full_not_authorized = 0;
  /// Trials with an AL_tau win that is not a PAL win.
  std::uint64_t authorized_not_pseudo = 0;
};

/// Runs the AL_tau game once per trial and judges the same guess under the
/// FL (d = 0), AL_tau and PAL win rules.
CoupledTrials run_coupled_irr_trials(const BtpScheme& scheme, const Population& pop, const LambdaSet& lambda,
                                     int tau, const IrrFactory& adversary, const GameOptions& opts = {});

struct CrossMatchRates {
  /// Pr[b' = 0 | b = 1]
  AdvantageEstimate fcmr;
  /// Pr[b' = 1 | b = 0]
  AdvantageEstimate fncmr;
  /// |1 - (FCMR + FNCMR)| and its standard error.
  double identity = 0.0;
  double identity_std_error = 0.0;
  /// Independent UNLINK run of the same comparator.
  GameResult unlink;
  /// |identity - UNLINK advantage| within 3 combined standard errors.
  bool consistent = false;
};

/// FCMR and FNCMR from `trials` forced-b runs each, plus an independent UNLINK run.
CrossMatchRates est_cross_match_rates(const BtpScheme& scheme, const Population& pop, const LambdaSet& lambda,
                                      const UnlinkFactory& comparator, const GameOptions& opts = {});

}  // namespace btp
