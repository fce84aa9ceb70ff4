#include "btp/report.hpp"

#include <sstream>

namespace btp {

using nlohmann::ordered_json;

ordered_json metric_json(const std::string& name, const AdvantageEstimate& est) {
  ordered_json j;
  j["metric"] = name;
  j["estimate"] = est.point;
  j["ci"] = {est.ci_low, est.ci_high};
  if (est.exact) j["exact"] = *est.exact;
  j["trials"] = est.trials;
  j["queries"] = est.queries_used;
  return j;
}

namespace {

ordered_json estimate_json(const AdvantageEstimate& est) {
  ordered_json j;
  j["point"] = est.point;
  j["ci"] = {est.ci_low, est.ci_high};
  j["std_error"] = est.std_error;
  return j;
}

}  // namespace

ordered_json game_json(const GameResult& r) {
  ordered_json j;
  j["game"] = to_string(r.game);
  j["lambda"] = r.lambda;
  j["adversary"] = r.adversary;
  if (r.tau) j["tau"] = *r.tau;
  j["wins"] = r.wins;
  j["trials"] = r.trials;
  j["aborted"] = r.aborted;
  j["queries"] = r.queries;
  j["success"] = estimate_json(r.success);
  j["advantage"] = estimate_json(r.advantage);
  if (r.baseline) {
    j["baseline"] = *r.baseline;
    j["baseline_provenance"] = r.baseline_lower_bound ? "lower-bound" : "exact";
  }
  if (r.game == GameKind::kUnlink) {
    j["wins_by_bit"] = {r.wins_by_bit[0], r.wins_by_bit[1]};
    j["trials_by_bit"] = {r.trials_by_bit[0], r.trials_by_bit[1]};
  }
  return j;
}

ordered_json verdict_json(const TheoremVerdict& v) {
  ordered_json j;
  j["id"] = v.id;
  j["label"] = v.label;
  j["status"] = to_string(v.status);
  j["pass"] = v.status == VerdictStatus::kPass;
  j["lhs"] = v.lhs;
  j["rhs"] = v.rhs;
  j["tolerance"] = v.tolerance;
  j["relation"] = v.relation;
  j["notes"] = v.notes;
  auto& parts = j["parts"] = ordered_json::array();
  for (const auto& p : v.parts) {
    ordered_json pj;
    pj["name"] = p.name;
    pj["status"] = to_string(p.status);
    pj["lhs"] = p.lhs;
    pj["rhs"] = p.rhs;
    pj["tolerance"] = p.tolerance;
    pj["relation"] = p.relation;
    parts.push_back(std::move(pj));
  }
  j["inputs"] = v.inputs;
  return j;
}

std::string report_csv(const ordered_json& report) {
  std::ostringstream out;
  const std::string command = report.value("command", "");
  if (command == "verify") {
    out << "id,label,status,lhs,rhs,tolerance\n";
    for (const auto& v : report.at("theorems")) {
      out << v.at("id").get<std::string>() << ',' << v.at("label").get<std::string>() << ','
          << v.at("status").get<std::string>() << ',' << v.at("lhs").dump() << ',' << v.at("rhs").dump() << ','
          << v.at("tolerance").dump() << '\n';
    }
    return out.str();
  }
  out << "name,estimate,ci_low,ci_high,trials\n";
  if (command == "game") {
    for (const auto& g : report.at("games")) {
      for (const char* key : {"success", "advantage"}) {
        const auto& e = g.at(key);
        out << g.at("game").get<std::string>() << '_' << key << ',' << e.at("point").dump() << ','
            << e.at("ci")[0].dump() << ',' << e.at("ci")[1].dump() << ',' << g.at("trials").dump() << '\n';
      }
    }
    return out.str();
  }
  for (const auto& m : report.at("metrics")) {
    out << m.at("metric").get<std::string>() << ',' << m.at("estimate").dump() << ',' << m.at("ci")[0].dump() << ','
        << m.at("ci")[1].dump() << ',' << m.at("trials").dump() << '\n';
  }
  return out.str();
}

}  // namespace btp
