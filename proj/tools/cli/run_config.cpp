#include "run_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "regimeshift/errors.hpp"

namespace regimeshift::cli {

namespace {

using json = nlohmann::ordered_json;

void reject_unknown(const json& j, std::initializer_list<const char*> keys, const char* where) {
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) throw DomainError(std::string("unknown key '") + k + "' in " + where);
  }
}

template <class T>
void read(const json& j, const char* key, T& dst) {
  if (j.contains(key)) dst = j.at(key).get<T>();
}

void check_grid(const std::vector<double>& v, const char* name) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || !(v[i] > 0.0)) {
      throw DomainError(std::string(name) + " must contain finite positive values");
    }
    if (i && !(v[i] > v[i - 1])) throw DomainError(std::string(name) + " must be strictly increasing");
  }
}

}  // namespace

Format parse_format(const std::string& text) {
  if (text == "csv") return Format::Csv;
  if (text == "json") return Format::Json;
  throw DomainError("format must be csv or json, got '" + text + "'");
}

std::string to_string(Format f) { return f == Format::Csv ? "csv" : "json"; }

void validate(const RunConfig& cfg) {
  validate(cfg.market);
  validate(cfg.option);
  validate(cfg.mc);
  check_grid(cfg.spots, "spots");
  check_grid(cfg.lambdas, "lambdas");
  const auto& g = cfg.curve;
  if (!(g.lo > 0.0) || !(g.hi > g.lo) || !std::isfinite(g.hi) || g.points < 2) {
    throw DomainError("curve grid needs 0 < lo < hi and at least 2 points");
  }
}

std::string to_json(const RunConfig& cfg) {
  const auto& m = cfg.market;
  json j = {
      {"market",
       {{"r", m.r},
        {"lambda", m.lambda},
        {"sigma_a", m.sigma_a},
        {"delta_a", m.delta_a},
        {"sigma_b", m.sigma_b},
        {"delta_b", m.delta_b}}},
      {"option", {{"kind", std::string(to_string(cfg.option.kind))}, {"strike", cfg.option.strike}}},
      {"spots", cfg.spots},
      {"curve", {{"lo", cfg.curve.lo}, {"hi", cfg.curve.hi}, {"points", cfg.curve.points}}},
      {"lambdas", cfg.lambdas},
      {"mc",
       {{"paths", cfg.mc.paths},
        {"dt", cfg.mc.dt},
        {"t_max", cfg.mc.t_max},
        {"seed", cfg.mc.seed},
        {"antithetic", cfg.mc.antithetic},
        {"threads", cfg.mc.threads}}},
      {"out", cfg.out},
      {"format", to_string(cfg.format)},
  };
  return j.dump(2) + "\n";
}

RunConfig from_json(const std::string& text) {
  RunConfig cfg;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw DomainError("config must be a JSON object");
  try {
    reject_unknown(j, {"market", "option", "spots", "curve", "lambdas", "mc", "out", "format"}, "config");
    if (j.contains("market")) {
      const auto& m = j.at("market");
      reject_unknown(m, {"r", "lambda", "sigma_a", "delta_a", "sigma_b", "delta_b"}, "market");
      read(m, "r", cfg.market.r);
      read(m, "lambda", cfg.market.lambda);
      read(m, "sigma_a", cfg.market.sigma_a);
      read(m, "delta_a", cfg.market.delta_a);
      read(m, "sigma_b", cfg.market.sigma_b);
      read(m, "delta_b", cfg.market.delta_b);
    }
    if (j.contains("option")) {
      const auto& o = j.at("option");
      reject_unknown(o, {"kind", "strike"}, "option");
      if (o.contains("kind")) cfg.option.kind = parse_option_kind(o.at("kind").get<std::string>());
      read(o, "strike", cfg.option.strike);
    }
    read(j, "spots", cfg.spots);
    if (j.contains("curve")) {
      const auto& c = j.at("curve");
      reject_unknown(c, {"lo", "hi", "points"}, "curve");
      read(c, "lo", cfg.curve.lo);
      read(c, "hi", cfg.curve.hi);
      read(c, "points", cfg.curve.points);
    }
    read(j, "lambdas", cfg.lambdas);
    if (j.contains("mc")) {
      const auto& c = j.at("mc");
      reject_unknown(c, {"paths", "dt", "t_max", "seed", "antithetic", "threads"}, "mc");
      read(c, "paths", cfg.mc.paths);
      read(c, "dt", cfg.mc.dt);
      read(c, "t_max", cfg.mc.t_max);
      read(c, "seed", cfg.mc.seed);
      read(c, "antithetic", cfg.mc.antithetic);
      read(c, "threads", cfg.mc.threads);
    }
    read(j, "out", cfg.out);
    if (j.contains("format")) cfg.format = parse_format(j.at("format").get<std::string>());
  } catch (const json::exception& e) {
    throw DomainError(std::string("bad config field: ") + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

std::vector<double> curve_spots(const RunConfig& cfg) {
  const auto& g = cfg.curve;
  const double a = std::log(g.lo);
  const double b = std::log(g.hi);
  std::vector<double> out;
  for (int i = 0; i < g.points; ++i) {
    out.push_back(cfg.option.strike * std::exp(a + (b - a) * i / (g.points - 1)));
  }
  return out;
}

}  // namespace regimeshift::cli
