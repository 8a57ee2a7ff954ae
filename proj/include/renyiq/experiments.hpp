#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "renyiq/density.hpp"
#include "renyiq/interval.hpp"

namespace renyiq {

struct Tolerances {
  /// |ratio - 1| at the last rate point.
  double final_ratio = 0.05;
  /// Allowed increase between consecutive deviations in trend checks.
  double trend_slack = 1e-9;
  /// Absolute, on the entropy density ratio of the interval.
  double entropy_ratio = 0.02;
  /// Absolute, on Σ ratio_i μ(A_i)^α.
  double normalization = 0.02;
  /// Relative, restricted normalized distortion against Q of μ(·|I).
  double restricted_distortion = 0.05;
  /// Absolute, distortion share against μ̂(I).
  double distortion_share = 0.02;
  /// Relative, coincidence ratio against 1.
  double coincidence = 0.05;
  /// Relative, M_g^n(I) against M_g(I).
  double measure = 0.05;
  /// Absolute, empirical entropy shift against its limit.
  double mismatch_shift = 0.02;
  /// Relative, mismatched normalized distortion against its limit.
  double mismatch_distortion = 0.05;
  /// Relative identity check D = μ(A₁)D₁ + μ(A₂)D₂.
  double decomposition = 1e-9;
  /// Restricted entropies at the last rate point must exceed this (nats).
  double sanity_min_entropy = 3.0;
};

struct ExperimentConfig {
  Density source = gaussian(0.0, 1.0);
  std::optional<Density> mismatch_source;
  double alpha = 0.5;
  double r = 2.0;
  /// δ in the moment condition ∫|x|^{r+δ} dμ < ∞.
  double moment_slack = 1.0;
  std::optional<Interval> interval;
  std::vector<std::size_t> n_grid = {4,   8,   16,  32,   64,  128,
                                     256, 512, 1024, 2048, 4096};
  bool refine_codepoints = false;
  /// Points for the single-cell ratio; empty means {median, mode}.
  std::vector<double> eval_points;
  Tolerances tolerances;
};

/// One rate point. `extras` lines up with ConvergenceReport::extra_columns.
struct RateRecord {
  std::size_t n = 0;
  double entropy = 0.0;
  double distortion = 0.0;
  double normalized_distortion = 0.0;
  double ratio_to_limit = 0.0;
  std::vector<double> extras;
};

struct Check {
  std::string name;
  double value = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

struct ConvergenceReport {
  std::string experiment;
  std::vector<std::string> extra_columns;
  std::vector<RateRecord> records;
  std::map<std::string, double> limits;
  std::vector<Check> checks;
  nlohmann::json diagnostics = nlohmann::json::object();

  bool passed() const;
  /// Values of a named column across records ("n", "H_alpha", "D", "eRH_D",
  /// "ratio" or any extra column). Throws std::out_of_range if unknown.
  std::vector<double> column(const std::string& name) const;
  const Check& check(const std::string& name) const;
};

/// Weak unimodality and the r+δ moment condition; throws HypothesisError with
/// the failing diagnostic.
nlohmann::json check_hypotheses(const Density& d, double r, double moment_slack);

ConvergenceReport run_asymptotics(const ExperimentConfig& cfg);
ConvergenceReport run_entropy_density(const ExperimentConfig& cfg);
ConvergenceReport run_distortion_density(const ExperimentConfig& cfg);
ConvergenceReport run_mismatch(const ExperimentConfig& cfg);
ConvergenceReport run_sanity(const ExperimentConfig& cfg);

/// Number of worker threads for rate sweeps: hardware concurrency capped by
/// RENYI_QUANT_THREADS when set.
unsigned sweep_threads();

/// Writes the report as CSV (17 significant digits) and the JSON summary.
void write_csv(const ConvergenceReport& report, std::ostream& out);
nlohmann::json summary_json(const ConvergenceReport& report);

/// Parses an experiment config object; ConfigError names the offending field.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

}  // namespace renyiq
