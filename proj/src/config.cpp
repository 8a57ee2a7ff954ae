#include <cmath>
#include <map>
#include <set>
#include <string>

#include "renyiq/errors.hpp"
#include "renyiq/experiments.hpp"

namespace renyiq {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError(field + ": " + what);
}

double as_number(const json& v, const std::string& field) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  fail(field, "expected a number");
}

double bound_value(const json& v, const std::string& field, double if_null) {
  return v.is_null() ? if_null : as_number(v, field);
}

Interval parse_interval(const json& v) {
  Interval i;
  if (v.is_array() && v.size() == 2) {
    i = {bound_value(v[0], "interval[0]", -kInf),
         bound_value(v[1], "interval[1]", kInf)};
  } else if (v.is_object()) {
    for (const auto& [k, _] : v.items()) {
      if (k != "lo" && k != "hi") fail("interval." + k, "unknown key");
    }
    i = {v.contains("lo") ? bound_value(v["lo"], "interval.lo", -kInf) : -kInf,
         v.contains("hi") ? bound_value(v["hi"], "interval.hi", kInf) : kInf};
  } else {
    fail("interval", "expected {\"lo\": c, \"hi\": d} or [c, d]");
  }
  if (!(i.lo < i.hi)) fail("interval", "lo must be below hi");
  return i;
}

void parse_tolerances(const json& v, Tolerances& t) {
  if (!v.is_object()) fail("tolerances", "expected an object");
  const std::map<std::string, double Tolerances::*> fields = {
      {"final_ratio", &Tolerances::final_ratio},
      {"trend_slack", &Tolerances::trend_slack},
      {"entropy_ratio", &Tolerances::entropy_ratio},
      {"normalization", &Tolerances::normalization},
      {"restricted_distortion", &Tolerances::restricted_distortion},
      {"distortion_share", &Tolerances::distortion_share},
      {"coincidence", &Tolerances::coincidence},
      {"measure", &Tolerances::measure},
      {"mismatch_shift", &Tolerances::mismatch_shift},
      {"mismatch_distortion", &Tolerances::mismatch_distortion},
      {"decomposition", &Tolerances::decomposition},
      {"sanity_min_entropy", &Tolerances::sanity_min_entropy},
  };
  for (const auto& [k, val] : v.items()) {
    const auto it = fields.find(k);
    if (it == fields.end()) fail("tolerances." + k, "unknown tolerance");
    const double x = as_number(val, "tolerances." + k);
    if (!(x >= 0.0) || !std::isfinite(x)) {
      fail("tolerances." + k, "must be finite and nonnegative");
    }
    t.*(it->second) = x;
  }
}

}  // namespace

ExperimentConfig experiment_config_from_json(const json& j) {
  if (!j.is_object()) fail("config", "expected a JSON object");
  static const std::set<std::string> known = {
      "description", "source",      "mismatch_source",   "alpha",
      "r",           "moment_slack", "interval",          "n_grid",
      "refine_codepoints", "eval_points", "tolerances"};
  for (const auto& [k, _] : j.items()) {
    if (!known.count(k)) fail(k, "unknown config key");
  }
  if (!j.contains("source")) fail("source", "missing required field");

  ExperimentConfig cfg;
  cfg.source = density_from_json(j["source"], "source");
  if (j.contains("mismatch_source") && !j["mismatch_source"].is_null()) {
    cfg.mismatch_source =
        density_from_json(j["mismatch_source"], "mismatch_source");
  }
  if (j.contains("alpha")) cfg.alpha = as_number(j["alpha"], "alpha");
  if (j.contains("r")) cfg.r = as_number(j["r"], "r");
  if (j.contains("moment_slack")) {
    cfg.moment_slack = as_number(j["moment_slack"], "moment_slack");
  }
  if (j.contains("interval") && !j["interval"].is_null()) {
    cfg.interval = parse_interval(j["interval"]);
  }
  if (j.contains("n_grid")) {
    const json& g = j["n_grid"];
    if (!g.is_array() || g.empty()) fail("n_grid", "expected a nonempty array");
    cfg.n_grid.clear();
    for (std::size_t i = 0; i < g.size(); ++i) {
      const std::string field = "n_grid[" + std::to_string(i) + "]";
      if (!g[i].is_number_integer() || g[i].get<long long>() < 2) {
        fail(field, "expected an integer >= 2");
      }
      cfg.n_grid.push_back(g[i].get<std::size_t>());
      if (i > 0 && cfg.n_grid[i] <= cfg.n_grid[i - 1]) {
        fail(field, "n_grid must be strictly increasing");
      }
    }
  }
  if (j.contains("refine_codepoints")) {
    if (!j["refine_codepoints"].is_boolean()) {
      fail("refine_codepoints", "expected true or false");
    }
    cfg.refine_codepoints = j["refine_codepoints"].get<bool>();
  }
  if (j.contains("eval_points")) {
    const json& p = j["eval_points"];
    if (!p.is_array()) fail("eval_points", "expected an array of numbers");
    for (std::size_t i = 0; i < p.size(); ++i) {
      cfg.eval_points.push_back(
          as_number(p[i], "eval_points[" + std::to_string(i) + "]"));
    }
  }
  if (j.contains("tolerances")) parse_tolerances(j["tolerances"], cfg.tolerances);

  if (!(cfg.alpha >= 0.0 && cfg.alpha < 1.0)) fail("alpha", "must lie in [0, 1)");
  if (!(cfg.r > 1.0) || !std::isfinite(cfg.r)) fail("r", "must exceed 1");
  if (!(cfg.moment_slack > 0.0)) fail("moment_slack", "must be positive");
  return cfg;
}

}  // namespace renyiq
