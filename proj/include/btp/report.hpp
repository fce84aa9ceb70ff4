#pragma once

#include <string>

#include <json.hpp>

#include "btp/games.hpp"
#include "btp/stats.hpp"
#include "btp/verify.hpp"

namespace btp {

inline constexpr const char* kToolName = "btpeval";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kReportSchemaVersion = "1";

/// {"metric", "estimate", "ci", "exact"?, "trials", "queries"}.
nlohmann::ordered_json metric_json(const std::string& name, const AdvantageEstimate& est);

nlohmann::ordered_json game_json(const GameResult& result);

nlohmann::ordered_json verdict_json(const TheoremVerdict& verdict);

/// Tabular view of a report: one row per metric, game quantity or verdict.
std::string report_csv(const nlohmann::ordered_json& report);

}  // namespace btp
