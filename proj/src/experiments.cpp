#include "renyiq/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "renyiq/compander.hpp"
#include "renyiq/errors.hpp"
#include "renyiq/quantizer.hpp"
#include "renyiq/theory.hpp"

namespace renyiq {

bool ConvergenceReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.passed; });
}

std::vector<double> ConvergenceReport::column(const std::string& name) const {
  std::vector<double> out;
  out.reserve(records.size());
  const auto it = std::find(extra_columns.begin(), extra_columns.end(), name);
  for (const auto& rec : records) {
    if (name == "n") {
      out.push_back(static_cast<double>(rec.n));
    } else if (name == "H_alpha") {
      out.push_back(rec.entropy);
    } else if (name == "D") {
      out.push_back(rec.distortion);
    } else if (name == "eRH_D") {
      out.push_back(rec.normalized_distortion);
    } else if (name == "ratio") {
      out.push_back(rec.ratio_to_limit);
    } else if (it != extra_columns.end()) {
      out.push_back(rec.extras.at(static_cast<std::size_t>(
          std::distance(extra_columns.begin(), it))));
    } else {
      throw std::out_of_range("unknown report column '" + name + "'");
    }
  }
  return out;
}

const Check& ConvergenceReport::check(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("unknown check '" + name + "'");
}

unsigned sweep_threads() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("RENYI_QUANT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(cap, &end, 10);
    if (end != cap && v > 0) n = std::min(n, static_cast<unsigned>(v));
  }
  return n;
}

namespace {

// Runs body(i) for i in [0, count); results land by index so the output
// order never depends on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(sweep_threads(), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void validate(const ExperimentConfig& cfg, bool strict_alpha) {
  if (strict_alpha ? !(cfg.alpha > 0.0 && cfg.alpha < 1.0)
                   : !(cfg.alpha >= 0.0 && cfg.alpha < 1.0)) {
    throw ConfigError("alpha: must lie in (0, 1)");
  }
  if (!(cfg.r > 1.0)) throw ConfigError("r: must exceed 1");
  if (!(cfg.moment_slack > 0.0)) {
    throw ConfigError("moment_slack: must be positive");
  }
  if (cfg.n_grid.empty()) throw ConfigError("n_grid: must not be empty");
  for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) {
    if (cfg.n_grid[i] < 2) throw ConfigError("n_grid: entries must be >= 2");
    if (i > 0 && cfg.n_grid[i] <= cfg.n_grid[i - 1]) {
      throw ConfigError("n_grid: must be strictly increasing");
    }
  }
}

Interval require_interval(const ExperimentConfig& cfg) {
  if (!cfg.interval) throw ConfigError("interval: required for this experiment");
  const Interval i = *cfg.interval;
  if (i.empty()) throw ConfigError("interval: lo must be below hi");
  const double m = cfg.source.mass(i);
  if (!(m > 0.0 && m < 1.0)) {
    std::ostringstream msg;
    msg << "interval: source probability " << m << " is not in (0, 1)";
    throw ConfigError(msg.str());
  }
  return i;
}

Quantizer make_quantizer(const PointDensity& h, std::size_t n,
                         const ExperimentConfig& cfg, const Density& source) {
  Quantizer q = build_compander(h, n);
  if (cfg.refine_codepoints) q = refine_codepoints(q, source, cfg.r);
  return q;
}

Check absolute_check(std::string name, double value, double target,
                     double tol) {
  Check c{std::move(name), value, target, tol, false, "absolute"};
  c.passed = std::isfinite(value) && std::abs(value - target) <= tol;
  return c;
}

Check relative_check(std::string name, double value, double target,
                     double tol) {
  Check c{std::move(name), value, target, tol, false, "relative"};
  c.passed = std::isfinite(value) && std::abs(value / target - 1.0) <= tol;
  return c;
}

Check max_check(std::string name, double value, double tol) {
  Check c{std::move(name), value, 0.0, tol, false, "maximum"};
  c.passed = std::isfinite(value) && value <= tol;
  return c;
}

// Over the last (up to) four values, each step must move in `direction`
// (-1: down, +1: up) by more than -slack.
Check trend_check(std::string name, const std::vector<double>& values,
                  int direction, double slack) {
  Check c{std::move(name), 0.0, 0.0, slack, true, ""};
  const std::size_t start = values.size() > 4 ? values.size() - 4 : 0;
  double worst = -kInf;
  for (std::size_t i = start + 1; i < values.size(); ++i) {
    const double step = direction * (values[i - 1] - values[i]);
    worst = std::max(worst, step);
    if (!(step <= slack)) c.passed = false;
  }
  c.value = values.size() > 1 ? worst : 0.0;
  c.detail = direction < 0 ? "nonincreasing over last 4 points"
                           : "nondecreasing over last 4 points";
  return c;
}

Check strict_trend_check(std::string name, const std::vector<double>& values,
                         int direction) {
  Check c = trend_check(std::move(name), values, direction, 0.0);
  c.passed = c.passed && c.value < 0.0;
  c.detail = direction < 0 ? "strictly decreasing over last 4 points"
                           : "strictly increasing over last 4 points";
  return c;
}

std::vector<double> deviations(const std::vector<double>& ratios,
                               double target = 1.0) {
  std::vector<double> out;
  for (double v : ratios) out.push_back(std::abs(v - target));
  return out;
}

RateRecord base_record(std::size_t n, double h, double d, double r,
                       double limit) {
  RateRecord rec;
  rec.n = n;
  rec.entropy = h;
  rec.distortion = d;
  rec.normalized_distortion = std::exp(r * h) * d;
  rec.ratio_to_limit = rec.normalized_distortion / limit;
  return rec;
}

}  // namespace

nlohmann::json check_hypotheses(const Density& d, double r,
                                double moment_slack) {
  const auto uni = check_weak_unimodality(d, 64);
  nlohmann::json diag;
  diag["weakly_unimodal"] = uni.passed;
  diag["max_pdf"] = uni.max_pdf;
  if (!uni.passed) {
    std::ostringstream msg;
    msg << "source is not weakly unimodal: level set at " << *uni.failing_level
        << " is disconnected";
    throw HypothesisError(msg.str());
  }
  double moment = kInf;
  try {
    moment = absolute_moment(d, r + moment_slack);
  } catch (const DivergentIntegralError&) {
  }
  diag["moment_order"] = r + moment_slack;
  diag["moment"] = std::isfinite(moment) ? nlohmann::json(moment)
                                         : nlohmann::json("inf");
  if (!std::isfinite(moment)) {
    std::ostringstream msg;
    msg << "source moment of order " << r + moment_slack << " is infinite";
    throw HypothesisError(msg.str());
  }
  return diag;
}

ConvergenceReport run_asymptotics(const ExperimentConfig& cfg) {
  validate(cfg, true);
  ConvergenceReport rep;
  rep.experiment = "asymptotics";
  rep.diagnostics["hypotheses"] =
      check_hypotheses(cfg.source, cfg.r, cfg.moment_slack);

  const double q_limit = quantization_coefficient(cfg.source, cfg.alpha, cfg.r);
  const PointDensity h = optimal_point_density(cfg.source, cfg.alpha, cfg.r);
  const RateParams p = rate_params(cfg.alpha, cfg.r);
  rep.limits["Q"] = q_limit;
  rep.limits["limit"] = q_limit;
  rep.limits["beta1"] = p.beta1;
  rep.limits["beta2"] = p.beta2;
  rep.limits["C_r"] = p.c_r;

  rep.records.resize(cfg.n_grid.size());
  parallel_for(cfg.n_grid.size(), [&](std::size_t i) {
    const Quantizer q = make_quantizer(h, cfg.n_grid[i], cfg, cfg.source);
    rep.records[i] =
        base_record(cfg.n_grid[i], quantizer_entropy(q, cfg.source, cfg.alpha),
                    distortion(q, cfg.source, cfg.r), cfg.r, q_limit);
  });

  const auto ratios = rep.column("ratio");
  const auto& tol = cfg.tolerances;
  rep.checks.push_back(
      absolute_check("final_ratio", ratios.back(), 1.0, tol.final_ratio));
  rep.checks.push_back(
      trend_check("ratio_trend", deviations(ratios), -1, tol.trend_slack));
  return rep;
}

ConvergenceReport run_entropy_density(const ExperimentConfig& cfg) {
  validate(cfg, true);
  const Interval a1 = require_interval(cfg);
  const Region a2 = complement(a1);
  ConvergenceReport rep;
  rep.experiment = "entropy-density";
  rep.diagnostics["hypotheses"] =
      check_hypotheses(cfg.source, cfg.r, cfg.moment_slack);

  const Density& d = cfg.source;
  const double alpha = cfg.alpha;
  const double r = cfg.r;
  const double m1 = d.mass(a1);
  const double m2 = d.mass(a2);
  const Density tilted = tilted_measure(d, alpha, r);
  const double lim1 = tilted.mass(a1) * std::pow(m1, -alpha);
  const double lim2 = tilted.mass(a2) * std::pow(m2, -alpha);
  const double q_limit = quantization_coefficient(d, alpha, r);
  const double q_restricted = quantization_coefficient(restrict(d, a1), alpha, r);
  rep.limits["Q"] = q_limit;
  rep.limits["limit"] = lim1;
  rep.limits["entropy_density_limit_A1"] = lim1;
  rep.limits["entropy_density_limit_A2"] = lim2;
  rep.limits["tilted_mass_A1"] = tilted.mass(a1);
  rep.limits["mass_A1"] = m1;
  rep.limits["Q_restricted_A1"] = q_restricted;

  rep.extra_columns = {"entropy_density_ratio_A1", "entropy_density_ratio_A2",
                       "normalization",           "H_alpha_A1",
                       "restricted_eRH_D_A1",     "restricted_ratio_A1",
                       "decomposition_error"};
  const PointDensity h = optimal_point_density(d, alpha, r);
  rep.records.resize(cfg.n_grid.size());
  parallel_for(cfg.n_grid.size(), [&](std::size_t i) {
    const Quantizer q = make_quantizer(h, cfg.n_grid[i], cfg, d);
    const double hq = quantizer_entropy(q, d, alpha);
    const double dq = distortion(q, d, r);
    RateRecord rec = base_record(cfg.n_grid[i], hq, dq, r, q_limit);
    const auto r1 = restricted_metrics(q, d, a1, alpha, r);
    const auto r2 = restricted_metrics(q, d, a2, alpha, r);
    const double ratio1 = std::exp((1.0 - alpha) * (r1.entropy_restricted - hq));
    const double ratio2 = std::exp((1.0 - alpha) * (r2.entropy_restricted - hq));
    const double norm = ratio1 * std::pow(m1, alpha) + ratio2 * std::pow(m2, alpha);
    const double restricted_norm =
        std::exp(r * r1.entropy_restricted) * r1.distortion_restricted;
    const double decomposition =
        std::abs(m1 * r1.distortion_restricted + m2 * r2.distortion_restricted -
                 dq) /
        dq;
    rec.extras = {ratio1,
                  ratio2,
                  norm,
                  r1.entropy_restricted,
                  restricted_norm,
                  restricted_norm / q_restricted,
                  decomposition};
    rep.records[i] = std::move(rec);
  });

  const auto& tol = cfg.tolerances;
  const auto decomposition = rep.column("decomposition_error");
  rep.checks.push_back(absolute_check(
      "entropy_density_ratio_A1", rep.column("entropy_density_ratio_A1").back(),
      lim1, tol.entropy_ratio));
  rep.checks.push_back(absolute_check("normalization",
                                      rep.column("normalization").back(), 1.0,
                                      tol.normalization));
  rep.checks.push_back(relative_check(
      "restricted_distortion_A1", rep.column("restricted_eRH_D_A1").back(),
      q_restricted, tol.restricted_distortion));
  rep.checks.push_back(max_check(
      "decomposition_identity",
      *std::max_element(decomposition.begin(), decomposition.end()),
      tol.decomposition));
  return rep;
}

ConvergenceReport run_distortion_density(const ExperimentConfig& cfg) {
  validate(cfg, true);
  const Interval a1 = require_interval(cfg);
  const Region a2 = complement(a1);
  ConvergenceReport rep;
  rep.experiment = "distortion-density";
  rep.diagnostics["hypotheses"] =
      check_hypotheses(cfg.source, cfg.r, cfg.moment_slack);

  const Density& d = cfg.source;
  const double alpha = cfg.alpha;
  const double r = cfg.r;
  const double m1 = d.mass(a1);
  const double m2 = d.mass(a2);
  const double q_limit = quantization_coefficient(d, alpha, r);
  const double tilted_mass = tilted_measure(d, alpha, r).mass(a1);
  const double mg = limit_distortion_measure(d, a1, alpha, r);
  rep.limits["Q"] = q_limit;
  rep.limits["limit"] = tilted_mass;
  rep.limits["tilted_mass_A1"] = tilted_mass;
  rep.limits["M_g_A1"] = mg;

  rep.extra_columns = {"distortion_share", "power_sum_share",
                       "coincidence_ratio", "M_g_n_A1", "M_g_ratio",
                       "decomposition_error"};
  const PointDensity h = optimal_point_density(d, alpha, r);
  rep.records.resize(cfg.n_grid.size());
  parallel_for(cfg.n_grid.size(), [&](std::size_t i) {
    const Quantizer q = make_quantizer(h, cfg.n_grid[i], cfg, d);
    const double hq = quantizer_entropy(q, d, alpha);
    const double dq = distortion(q, d, r);
    RateRecord rec = base_record(cfg.n_grid[i], hq, dq, r, q_limit);
    const auto r1 = restricted_metrics(q, d, a1, alpha, r);
    const auto r2 = restricted_metrics(q, d, a2, alpha, r);
    const double d1 = m1 * r1.distortion_restricted;
    const double share = d1 / dq;
    const double power_share = r1.restricted_power_sum / r1.entropy_power_sum;
    const double mgn = std::exp(r * hq) * d1;
    const double decomposition =
        std::abs(d1 + m2 * r2.distortion_restricted - dq) / dq;
    rec.extras = {share, power_share, share / power_share, mgn, mgn / mg,
                  decomposition};
    rep.records[i] = std::move(rec);
  });

  const auto& tol = cfg.tolerances;
  const auto decomposition = rep.column("decomposition_error");
  rep.checks.push_back(absolute_check("distortion_share",
                                      rep.column("distortion_share").back(),
                                      tilted_mass, tol.distortion_share));
  rep.checks.push_back(relative_check("coincidence_ratio",
                                      rep.column("coincidence_ratio").back(),
                                      1.0, tol.coincidence));
  rep.checks.push_back(relative_check("distortion_measure",
                                      rep.column("M_g_n_A1").back(), mg,
                                      tol.measure));
  rep.checks.push_back(max_check(
      "decomposition_identity",
      *std::max_element(decomposition.begin(), decomposition.end()),
      tol.decomposition));
  return rep;
}

ConvergenceReport run_mismatch(const ExperimentConfig& cfg) {
  validate(cfg, true);
  if (!cfg.mismatch_source) {
    throw ConfigError("mismatch_source: required for the mismatch experiment");
  }
  const Density& g = cfg.source;
  const Density& f = *cfg.mismatch_source;
  const double alpha = cfg.alpha;
  const double r = cfg.r;
  ConvergenceReport rep;
  rep.experiment = "mismatch";
  rep.diagnostics["hypotheses"] = check_hypotheses(g, r, cfg.moment_slack);

  const auto bound = check_boundedness(g, f);
  rep.diagnostics["ratio_bound"] = {{"bounded", bound.bounded},
                                    {"bound", bound.bound},
                                    {"argmax", bound.argmax}};
  if (!bound.bounded) {
    std::ostringstream msg;
    msg << "mismatch_source: f/g is unbounded near x=" << *bound.violation;
    throw HypothesisError(msg.str());
  }

  const double shift = mismatch_entropy_shift(g, f, alpha, r);
  const double limit = mismatch_distortion_limit(g, f, alpha, r);
  const double q_f = quantization_coefficient(f, alpha, r);
  rep.limits["limit"] = limit;
  rep.limits["mismatch_distortion_limit"] = limit;
  rep.limits["mismatch_entropy_shift"] = shift;
  rep.limits["mismatch_loss"] = limit / q_f;
  rep.limits["Q_source"] = quantization_coefficient(g, alpha, r);
  rep.limits["Q_mismatch_source"] = q_f;

  rep.extra_columns = {"H_alpha_source", "mismatch_entropy_shift_empirical",
                       "mismatch_normalized_distortion", "loss_empirical"};
  const PointDensity h = optimal_point_density(g, alpha, r);
  rep.records.resize(cfg.n_grid.size());
  parallel_for(cfg.n_grid.size(), [&](std::size_t i) {
    const Quantizer q = make_quantizer(h, cfg.n_grid[i], cfg, g);
    const double h_mu = quantizer_entropy(q, g, alpha);
    const double h_nu = quantizer_entropy(q, f, alpha);
    RateRecord rec = base_record(cfg.n_grid[i], h_nu, distortion(q, f, r), r,
                                 limit);
    rec.extras = {h_mu, std::exp((1.0 - alpha) * (h_nu - h_mu)),
                  rec.normalized_distortion, rec.normalized_distortion / q_f};
    rep.records[i] = std::move(rec);
  });

  const auto& tol = cfg.tolerances;
  rep.checks.push_back(absolute_check(
      "mismatch_entropy_shift",
      rep.column("mismatch_entropy_shift_empirical").back(), shift,
      tol.mismatch_shift));
  rep.checks.push_back(relative_check(
      "mismatch_distortion", rep.column("eRH_D").back(), limit,
      tol.mismatch_distortion));
  return rep;
}

ConvergenceReport run_sanity(const ExperimentConfig& cfg) {
  validate(cfg, true);
  const Density& d = cfg.source;
  const double alpha = cfg.alpha;
  const double r = cfg.r;
  const Interval a1 = cfg.interval ? require_interval(cfg)
                                   : Interval{d.quantile(0.25), d.quantile(0.75)};
  const Region a2 = complement(a1);
  std::vector<double> points = cfg.eval_points;
  if (points.empty()) points = {d.median(), d.mode()};

  ConvergenceReport rep;
  rep.experiment = "sanity";
  const double q_limit = quantization_coefficient(d, alpha, r);
  rep.limits["Q"] = q_limit;
  rep.limits["limit"] = q_limit;
  rep.diagnostics["interval"] = {{"lo", a1.lo}, {"hi", a1.hi}};
  rep.diagnostics["eval_points"] = points;

  rep.extra_columns = {"max_cell_probability", "H_alpha_A1", "H_alpha_A2"};
  for (std::size_t j = 0; j < points.size(); ++j) {
    rep.extra_columns.push_back("cell_ratio_p" + std::to_string(j));
  }
  const PointDensity h = optimal_point_density(d, alpha, r);
  rep.records.resize(cfg.n_grid.size());
  parallel_for(cfg.n_grid.size(), [&](std::size_t i) {
    const Quantizer q = make_quantizer(h, cfg.n_grid[i], cfg, d);
    const ProbabilityVector probs = cell_probabilities(q, d);
    const double hq = renyi_entropy_vec(probs, alpha);
    RateRecord rec = base_record(cfg.n_grid[i], hq, distortion(q, d, r), r,
                                 q_limit);
    double power_sum = 0.0;
    for (double v : probs.entries()) {
      if (v > 0.0) power_sum += std::pow(v, alpha);
    }
    rec.extras = {
        *std::max_element(probs.entries().begin(), probs.entries().end()),
        restricted_metrics(q, d, a1, alpha, r).entropy_restricted,
        restricted_metrics(q, d, a2, alpha, r).entropy_restricted};
    for (double x : points) {
      rec.extras.push_back(std::pow(probs[q.cell_index(x)], alpha) / power_sum);
    }
    rep.records[i] = std::move(rec);
  });

  const auto& tol = cfg.tolerances;
  rep.checks.push_back(strict_trend_check(
      "max_cell_probability_trend", rep.column("max_cell_probability"), -1));
  for (std::size_t j = 0; j < points.size(); ++j) {
    const std::string col = "cell_ratio_p" + std::to_string(j);
    rep.checks.push_back(strict_trend_check(col + "_trend", rep.column(col), -1));
  }
  for (const std::string col : {"H_alpha_A1", "H_alpha_A2"}) {
    const auto values = rep.column(col);
    rep.checks.push_back(strict_trend_check(col + "_trend", values, 1));
    Check grows{col + "_final", values.back(), tol.sanity_min_entropy, 0.0,
                values.back() > tol.sanity_min_entropy, "minimum"};
    rep.checks.push_back(grows);
  }
  return rep;
}

}  // namespace renyiq
