#include "frmod/cli/config.hpp"

#include <fstream>
#include <set>

#include "frmod/errors.hpp"
#include "frmod/params.hpp"

namespace frmod::cli {
namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

double number(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
  if (!obj[key].is_number()) throw ConfigError(where + ": '" + key + "' must be a number");
  return obj[key].get<double>();
}

std::vector<double> number_list(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) return {};
  const auto& v = obj[key];
  if (!v.is_array()) throw ConfigError(where + ": '" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(where + ": '" + key + "' must be an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::uint64_t unsigned_value(const json& obj, const std::string& key, const std::string& where) {
  const auto& v = obj[key];
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) throw ConfigError(where + ": '" + key + "' must be a non-negative integer");
  return obj[key].get<std::uint64_t>();
}

FrmodSpec parse_frmod(const json& obj, const std::string& where, const std::set<std::string>& extra) {
  std::set<std::string> allowed{"kind", "d", "lambda0", "q0", "q1", "ar", "ma", "boundary_sign"};
  allowed.insert(extra.begin(), extra.end());
  check_keys(obj, allowed, where);
  FrmodSpec s;
  s.mf.d = number(obj, "d", where);
  s.mf.lambda0 = number(obj, "lambda0", where);
  s.q.q1 = number(obj, "q1", where);
  if (obj.contains("boundary_sign")) {
    if (obj.contains("q0")) throw ConfigError(where + ": give either 'q0' or 'boundary_sign', not both");
    const auto& b = obj["boundary_sign"];
    if (!b.is_number_integer() || (b.get<int>() != 1 && b.get<int>() != -1)) {
      throw ConfigError(where + ": 'boundary_sign' must be 1 or -1");
    }
    s.mf.validate();
    s.q.q0 = params::boundary_q0(s.mf.d, s.q.q1, b.get<int>());
  } else {
    s.q.q0 = number(obj, "q0", where);
  }
  s.ar = number_list(obj, "ar", where);
  s.ma = number_list(obj, "ma", where);
  return s;
}

AsymSpec parse_asym(const json& obj, const std::string& where, const std::set<std::string>& extra) {
  std::set<std::string> allowed{"kind", "lambda0", "d_plus", "d_minus", "q1_plus", "q1_minus"};
  allowed.insert(extra.begin(), extra.end());
  check_keys(obj, allowed, where);
  return {number(obj, "lambda0", where), number(obj, "d_plus", where), number(obj, "d_minus", where),
          number(obj, "q1_plus", where), number(obj, "q1_minus", where)};
}

std::string kind_of(const json& obj, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected a JSON object");
  if (!obj.contains("kind") || !obj["kind"].is_string()) throw ConfigError(where + ": missing string key 'kind'");
  return obj["kind"].get<std::string>();
}

}  // namespace

Method parse_method(const std::string& name) {
  if (name == "exact" || name == "exact-embedding") return Method::exact_embedding;
  if (name == "cholesky") return Method::cholesky;
  if (name == "truncated" || name == "truncated-linear") return Method::truncated_linear;
  if (name == "modulated" || name == "modulated-linear") return Method::modulated_linear;
  throw ConfigError("unknown simulation method '" + name + "'");
}

ModelConfig parse_config(const json& doc) {
  const std::set<std::string> common{"simulation", "grid", "hmax"};
  ModelConfig cfg;
  const std::string kind = kind_of(doc, "config");
  if (kind == "frmod") {
    cfg.model = parse_frmod(doc, "config", common);
  } else if (kind == "asym") {
    cfg.model = parse_asym(doc, "config", common);
  } else if (kind == "multifactor") {
    auto allowed = common;
    allowed.insert({"kind", "components"});
    check_keys(doc, allowed, "config");
    if (!doc.contains("components") || !doc["components"].is_array()) {
      throw ConfigError("config: 'components' must be an array");
    }
    MultiFactorSpec m;
    std::size_t i = 0;
    for (const auto& c : doc["components"]) {
      const std::string where = "components[" + std::to_string(i++) + "]";
      const std::string ck = kind_of(c, where);
      if (ck == "frmod") {
        m.components.emplace_back(parse_frmod(c, where, {}));
      } else if (ck == "asym") {
        m.components.emplace_back(parse_asym(c, where, {}));
      } else {
        throw ConfigError(where + ": kind must be 'frmod' or 'asym'");
      }
    }
    cfg.model = std::move(m);
  } else {
    throw ConfigError("config: unknown kind '" + kind + "' (expected frmod, asym or multifactor)");
  }

  if (doc.contains("hmax")) cfg.hmax = unsigned_value(doc, "hmax", "config");

  if (doc.contains("simulation")) {
    const auto& s = doc["simulation"];
    check_keys(s, {"n", "seed", "method", "replicates", "truncation"}, "simulation");
    SimulationConfig sim;
    if (s.contains("n")) sim.n = unsigned_value(s, "n", "simulation");
    if (s.contains("seed")) sim.seed = unsigned_value(s, "seed", "simulation");
    if (s.contains("replicates")) sim.replicates = unsigned_value(s, "replicates", "simulation");
    if (s.contains("truncation")) sim.truncation = unsigned_value(s, "truncation", "simulation");
    if (s.contains("method")) {
      if (!s["method"].is_string()) throw ConfigError("simulation: 'method' must be a string");
      sim.method = parse_method(s["method"].get<std::string>());
    }
    if (sim.n < 2) throw ConfigError("simulation: 'n' must be at least 2");
    if (sim.replicates < 1) throw ConfigError("simulation: 'replicates' must be at least 1");
    if ((sim.method == Method::truncated_linear || sim.method == Method::modulated_linear) &&
        !std::holds_alternative<FrmodSpec>(cfg.model)) {
      throw ConfigError("simulation: linear-representation methods need kind 'frmod'");
    }
    cfg.simulation = sim;
  }

  if (doc.contains("grid")) {
    const auto& g = doc["grid"];
    check_keys(g, {"points", "exclusion"}, "grid");
    if (g.contains("points")) cfg.grid.points = unsigned_value(g, "points", "grid");
    if (g.contains("exclusion")) cfg.grid.exclusion = number(g, "exclusion", "grid");
    if (cfg.grid.points < 16) throw ConfigError("grid: 'points' must be at least 16");
    if (!(cfg.grid.exclusion > 0.0)) throw ConfigError("grid: 'exclusion' must be positive");
  }

  try {
    validate(cfg.model);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid model: ") + e.what());
  }
  cfg.source = doc;
  return cfg;
}

ModelConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

}  // namespace frmod::cli
