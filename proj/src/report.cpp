#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "renyiq/experiments.hpp"

namespace renyiq {
namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json number_or_string(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

void write_csv(const ConvergenceReport& report, std::ostream& out) {
  out << "n,H_alpha,D,eRH_D,ratio";
  for (const auto& c : report.extra_columns) out << ',' << c;
  out << '\n';
  for (const auto& rec : report.records) {
    out << rec.n << ',' << fmt17(rec.entropy) << ',' << fmt17(rec.distortion)
        << ',' << fmt17(rec.normalized_distortion) << ','
        << fmt17(rec.ratio_to_limit);
    for (double v : rec.extras) out << ',' << fmt17(v);
    out << '\n';
  }
}

nlohmann::json summary_json(const ConvergenceReport& report) {
  nlohmann::json j;
  j["experiment"] = report.experiment;
  j["passed"] = report.passed();
  if (const auto it = report.limits.find("limit"); it != report.limits.end()) {
    j["limit"] = number_or_string(it->second);
  }
  nlohmann::json limits = nlohmann::json::object();
  for (const auto& [k, v] : report.limits) limits[k] = number_or_string(v);
  j["limits"] = limits;
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"value", number_or_string(c.value)},
                      {"target", number_or_string(c.target)},
                      {"tolerance", c.tolerance},
                      {"kind", c.detail},
                      {"passed", c.passed}});
  }
  j["checks"] = checks;
  nlohmann::json grid = nlohmann::json::array();
  for (const auto& rec : report.records) grid.push_back(rec.n);
  j["n_grid"] = grid;
  j["diagnostics"] = report.diagnostics;
  return j;
}

}  // namespace renyiq
