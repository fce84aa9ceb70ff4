#include "btp/config.hpp"

#include <fstream>
#include <set>

#include "btp/errors.hpp"

namespace btp {

namespace {

using nlohmann::json;

void only_keys(const json& j, const std::string& where, std::set<std::string> allowed) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T get(const json& j, const std::string& key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + " has the wrong type");
  }
}

std::uint64_t get_count(const json& j, const std::string& key, const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw ConfigError(where + "." + key + " must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

int get_int(const json& j, const std::string& key, const std::string& where) {
  if (!j.at(key).is_number_integer()) throw ConfigError(where + "." + key + " must be an integer");
  return j.at(key).get<int>();
}

double get_number(const json& j, const std::string& key, const std::string& where) {
  if (!j.at(key).is_number()) throw ConfigError(where + "." + key + " must be a number");
  return j.at(key).get<double>();
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  ExperimentConfig cfg;
  only_keys(j, "config",
            {"population", "scheme", "trials", "query_budget", "seed", "lambda", "tau", "delta", "gamma",
             "adversaries", "output"});
  bool scheme_n_given = false;
  if (j.contains("population")) {
    const json& p = j["population"];
    only_keys(p, "population", {"n", "users", "flip_prob", "seed", "centers"});
    if (p.contains("n")) cfg.population.n = get_int(p, "n", "population");
    if (p.contains("users")) cfg.population.users = get_count(p, "users", "population");
    if (p.contains("flip_prob")) cfg.population.flip_prob = get_number(p, "flip_prob", "population");
    if (p.contains("seed")) cfg.population.seed = get_count(p, "seed", "population");
    if (p.contains("centers")) {
      if (!p["centers"].is_array()) throw ConfigError("population.centers must be an array of bit strings");
      std::vector<FeatureElement> centers;
      for (const auto& c : p["centers"]) {
        if (!c.is_string()) throw ConfigError("population.centers must be an array of bit strings");
        try {
          centers.push_back(FeatureElement::from_string(c.get<std::string>()));
        } catch (const Error& e) {
          throw ConfigError(std::string("population.centers: ") + e.what());
        }
      }
      if (!p.contains("users")) cfg.population.users = centers.size();
      cfg.population.centers = std::move(centers);
    }
  }
  if (j.contains("scheme")) {
    const json& s = j["scheme"];
    only_keys(s, "scheme", {"name", "n", "code", "threshold"});
    if (!s.contains("name")) throw ConfigError("scheme.name is missing");
    cfg.scheme.name = get<std::string>(s, "name", "scheme");
    if (s.contains("n")) {
      cfg.scheme.n = get_int(s, "n", "scheme");
      scheme_n_given = true;
    }
    if (s.contains("threshold")) cfg.scheme.threshold = get_int(s, "threshold", "scheme");
    if (s.contains("code")) {
      const json& c = s["code"];
      only_keys(c, "scheme.code", {"n", "k", "t", "generator"});
      if (c.contains("n")) {
        cfg.scheme.n = get_int(c, "n", "scheme.code");
        scheme_n_given = true;
      }
      if (c.contains("k")) cfg.scheme.code_k = get_int(c, "k", "scheme.code");
      if (c.contains("t")) cfg.scheme.code_radius = get_int(c, "t", "scheme.code");
      if (c.contains("generator")) cfg.scheme.generator = get<std::vector<std::string>>(c, "generator", "scheme.code");
    }
  }
  if (!scheme_n_given) cfg.scheme.n = cfg.population.n;
  if (j.contains("trials")) cfg.trials = get_count(j, "trials", "config");
  if (j.contains("query_budget")) cfg.query_budget = get_count(j, "query_budget", "config");
  if (j.contains("seed")) cfg.seed = get_count(j, "seed", "config");
  if (j.contains("lambda")) {
    try {
      cfg.lambda = LambdaSet::parse(get<std::string>(j, "lambda", "config"));
    } catch (const ContractError& e) {
      throw ConfigError(e.what());
    }
  }
  if (j.contains("tau")) cfg.tau = get_int(j, "tau", "config");
  if (j.contains("delta")) cfg.delta = get_number(j, "delta", "config");
  if (j.contains("gamma")) cfg.gamma = get_number(j, "gamma", "config");
  if (j.contains("adversaries")) {
    const json& a = j["adversaries"];
    only_keys(a, "adversaries", {"irr", "unlink", "t1", "t4_inner"});
    if (a.contains("irr")) cfg.adversaries.irr = get<std::string>(a, "irr", "adversaries");
    if (a.contains("unlink")) cfg.adversaries.unlink = get<std::string>(a, "unlink", "adversaries");
    if (a.contains("t1")) cfg.adversaries.t1 = get<std::string>(a, "t1", "adversaries");
    if (a.contains("t4_inner")) cfg.adversaries.t4_inner = get<std::string>(a, "t4_inner", "adversaries");
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    only_keys(o, "output", {"path", "format"});
    if (o.contains("path")) cfg.out = get<std::string>(o, "path", "output");
    if (o.contains("format")) cfg.format = get<std::string>(o, "format", "output");
  }
  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw ConfigError("trials must be at least 1");
  if (cfg.query_budget < 1) throw ConfigError("query_budget must be at least 1");
  if (cfg.tau < 0) throw ConfigError("tau must be nonnegative");
  if (cfg.scheme.n != cfg.population.n) {
    throw ConfigError("scheme dimension " + std::to_string(cfg.scheme.n) + " differs from population n = " +
                      std::to_string(cfg.population.n));
  }
  if (cfg.format != "json" && cfg.format != "csv") throw ConfigError("format must be json or csv");
}

nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  auto& p = j["population"];
  p["n"] = cfg.population.n;
  p["users"] = cfg.population.users;
  p["flip_prob"] = cfg.population.flip_prob;
  p["seed"] = cfg.population.seed;
  if (cfg.population.centers) {
    auto& centers = p["centers"] = nlohmann::ordered_json::array();
    for (const auto& c : *cfg.population.centers) centers.push_back(c.to_string());
  }
  auto& s = j["scheme"];
  s["name"] = cfg.scheme.name;
  s["n"] = cfg.scheme.n;
  if (cfg.scheme.name == "fc") {
    auto& c = s["code"];
    c["n"] = cfg.scheme.n;
    c["k"] = cfg.scheme.code_k;
    c["t"] = cfg.scheme.code_radius;
    if (!cfg.scheme.generator.empty()) c["generator"] = cfg.scheme.generator;
  } else {
    s["threshold"] = cfg.scheme.threshold;
  }
  j["trials"] = cfg.trials;
  j["query_budget"] = cfg.query_budget;
  j["seed"] = cfg.seed;
  j["lambda"] = cfg.lambda.to_string();
  j["tau"] = cfg.tau;
  j["delta"] = cfg.delta;
  j["gamma"] = cfg.gamma;
  auto& a = j["adversaries"];
  a["irr"] = cfg.adversaries.irr;
  a["unlink"] = cfg.adversaries.unlink;
  a["t1"] = cfg.adversaries.t1;
  a["t4_inner"] = cfg.adversaries.t4_inner;
  return j;
}

}  // namespace btp
