#include "renyiq/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "renyiq/compander.hpp"
#include "renyiq/errors.hpp"
#include "renyiq/experiments.hpp"
#include "renyiq/quantizer.hpp"
#include "renyiq/theory.hpp"

namespace renyiq {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kConfigHelp = R"(Config file (JSON). Keys and defaults:
  source            density object, required, e.g. {"family":"gaussian","mean":0,"sigma":1}
                    families: uniform(a,b) gaussian(mean,sigma) laplacian(mean,scale)
                    exponential(rate,shift) piecewise_linear(knots) mixture(components)
                    restricted(base,lo,hi) tilted(base,beta) affine(base,scale,shift)
  mismatch_source   density object, required by `mismatch`
  alpha             0.5     Renyi order in (0,1)
  r                 2       distortion exponent, > 1
  moment_slack      1       delta in the r+delta moment condition
  interval          none    {"lo":c,"hi":d}; required by entropy-/distortion-density
  n_grid            [4,8,...,4096]
  refine_codepoints false
  eval_points       [median, mode]
  tolerances        final_ratio 0.05, trend_slack 1e-9, entropy_ratio 0.02,
                    normalization 0.02, restricted_distortion 0.05,
                    distortion_share 0.02, coincidence 0.05, measure 0.05,
                    mismatch_shift 0.02, mismatch_distortion 0.05,
                    decomposition 1e-9, sanity_min_entropy 3)";

std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

json parse_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    return text;
  }
}

json load_config(const std::string& path,
                 const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config: '" + path + "' is not valid JSON (" + e.what() +
                      ")");
  }
  apply_overrides(j, overrides);
  return j;
}

struct Invocation {
  std::string config_path;
  std::string output_dir = ".";
  std::vector<std::string> overrides;
};

using Runner = std::function<ConvergenceReport(const ExperimentConfig&)>;

int run_experiment(const std::string& name, const Runner& runner,
                   const Invocation& inv, std::ostream& out) {
  const json raw = load_config(inv.config_path, inv.overrides);
  const ExperimentConfig cfg = experiment_config_from_json(raw);
  const ConvergenceReport rep = runner(cfg);

  const fs::path dir(inv.output_dir);
  fs::create_directories(dir);
  const std::string stem =
      fs::path(inv.config_path).stem().string() + "_" + name;
  const fs::path csv = dir / (stem + ".csv");
  const fs::path summary = dir / (stem + "_summary.json");
  {
    std::ofstream f(csv);
    if (!f) throw ConfigError("output_dir: cannot write '" + csv.string() + "'");
    write_csv(rep, f);
  }
  {
    std::ofstream f(summary);
    if (!f) {
      throw ConfigError("output_dir: cannot write '" + summary.string() + "'");
    }
    f << summary_json(rep).dump(2) << '\n';
  }
  for (const auto& c : rep.checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << " value=" << fmt9(c.value)
        << " target=" << fmt9(c.target) << " tol=" << fmt9(c.tolerance) << '\n';
  }
  out << "wrote " << csv.string() << " and " << summary.string() << '\n';
  return rep.passed() ? kExitPass : kExitToleranceFailure;
}

int run_predict(const Invocation& inv, std::ostream& out) {
  const ExperimentConfig cfg =
      experiment_config_from_json(load_config(inv.config_path, inv.overrides));
  const Density& g = cfg.source;
  const double a = cfg.alpha;
  const double r = cfg.r;
  const RateParams p = rate_params(a, r);
  auto line = [&](const std::string& k, double v) {
    out << k << '=' << fmt9(v) << '\n';
  };
  line("alpha", a);
  line("r", r);
  line("beta1", p.beta1);
  line("beta2", p.beta2);
  line("C_r", p.c_r);
  line("Q", quantization_coefficient(g, a, r));
  line("renyi_differential_entropy_beta1", renyi_differential_entropy(g, p.beta1));
  if (cfg.interval) {
    const Interval i = *cfg.interval;
    line("tilted_mass", tilted_measure(g, a, r).mass(i));
    line("entropy_density_limit", entropy_density_limit(g, i, a, r));
    line("limit_distortion_measure", limit_distortion_measure(g, i, a, r));
  }
  if (cfg.mismatch_source) {
    const Density& f = *cfg.mismatch_source;
    const Density g_ar = optimal_point_density(g, a, r).density();
    line("renyi_divergence_alpha", renyi_divergence(f, g_ar, a));
    line("kl_divergence", renyi_divergence(f, g, 1.0));
    line("mismatch_entropy_shift", mismatch_entropy_shift(g, f, a, r));
    line("mismatch_distortion_limit", mismatch_distortion_limit(g, f, a, r));
    line("mismatch_loss", mismatch_loss(g, f, a, r));
    line("fixed_rate_mismatch_loss", fixed_rate_mismatch_loss(g, f, r));
    line("variable_rate_mismatch_loss", variable_rate_mismatch_loss(g, f, r));
  }
  return kExitPass;
}

int run_lemma_check(const Invocation& inv, std::ostream& out) {
  ExperimentConfig cfg;
  if (!inv.config_path.empty()) {
    cfg = experiment_config_from_json(load_config(inv.config_path, inv.overrides));
  }
  const Density& g = cfg.source;
  const double a = cfg.alpha;
  const double r = cfg.r;
  bool all = true;
  auto report = [&](const std::string& name, bool ok, const std::string& info) {
    all = all && ok;
    out << (ok ? "PASS " : "FAIL ") << name << ' ' << info << '\n';
  };

  // Strict minimizer of F(z) = A/z^γ + B/(1-z)^γ.
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int violations = 0;
  double worst_gap = kInf;
  for (int t = 0; t < 100; ++t) {
    const double A = 10.0 * unit(rng) + 1e-3;
    const double B = 10.0 * unit(rng) + 1e-3;
    const double gamma = 0.1 + 4.9 * unit(rng);
    double z = unit(rng);
    const SplitBound at0 = split_bound(A, B, gamma, 0.5);
    while (std::abs(z - at0.z0) < 1e-3 || z <= 0.0) z = unit(rng);
    const SplitBound s = split_bound(A, B, gamma, z);
    const SplitBound m = split_bound(A, B, gamma, s.z0);
    const double gap = s.f_value - s.f_min;
    worst_gap = std::min(worst_gap, gap);
    if (!(gap > 0.0) || std::abs(m.f_value / m.f_min - 1.0) > 1e-12) ++violations;
  }
  report("split_bound_strict_minimizer", violations == 0,
         "violations=" + std::to_string(violations) +
             " min_gap=" + fmt9(worst_gap));

  // Two-set identity: F_min = (∫g^{β₁})^{β₂} and z0 = μ̂(I).
  const RateParams p = rate_params(a, r);
  const Interval i =
      cfg.interval ? *cfg.interval : Interval{g.median(), g.quantile(0.9)};
  const double total = power_integral(g, p.beta1);
  const double share = tilted_measure(g, a, r).mass(i);
  const SplitBound two = split_bound(std::pow(total * share, p.beta2),
                                     std::pow(total * (1.0 - share), p.beta2),
                                     p.beta2 - 1.0, 0.5);
  const bool id_ok =
      std::abs(two.f_min / std::pow(total, p.beta2) - 1.0) <= 1e-9 &&
      std::abs(two.z0 - share) <= 1e-9;
  report("split_bound_two_set_identity", id_ok,
         "F_min=" + fmt9(two.f_min) + " z0=" + fmt9(two.z0));

  // The optimal point density attains Q; perturbations do worse.
  const double q = quantization_coefficient(g, a, r);
  const double at_opt =
      compander_performance(g, optimal_point_density(g, a, r), a, r);
  report("point_density_attains_Q", std::abs(at_opt / q - 1.0) <= 1e-8,
         "Q=" + fmt9(q) + " performance=" + fmt9(at_opt));
  bool worse = true;
  for (double factor : {0.7, 0.9, 1.1, 1.4}) {
    const PointDensity h(tilt(g, factor / p.beta2));
    worse = worse && compander_performance(g, h, a, r) > q;
  }
  const PointDensity shifted(
      affine(optimal_point_density(g, a, r).density(), 1.0, 0.25));
  worse = worse && compander_performance(g, shifted, a, r) > q;
  report("point_density_unique_minimizer", worse, "perturbations=5");

  // Fixed-rate level fraction N_n(I)/n against ∫_I g^{1/(1+r)}.
  constexpr std::size_t kLevels = 4096;
  const Quantizer qn =
      build_compander(optimal_point_density(g, 0.0, r), kLevels);
  const double fraction =
      static_cast<double>(codepoint_count_in(qn, i)) / kLevels;
  const double predicted = tilt(g, 1.0 / (1.0 + r)).mass(i);
  report("level_fraction", std::abs(fraction - predicted) <= 0.01,
         "empirical=" + fmt9(fraction) + " predicted=" + fmt9(predicted));
  return all ? kExitPass : kExitToleranceFailure;
}

}  // namespace

void apply_overrides(json& config, const std::vector<std::string>& overrides) {
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("--set '" + item + "': expected key=value");
    }
    const std::string key = item.substr(0, eq);
    json* node = &config;
    std::size_t start = 0;
    while (true) {
      const auto dot = key.find('.', start);
      const std::string part = key.substr(start, dot - start);
      if (part.empty()) throw ConfigError("--set '" + item + "': empty key part");
      if (!node->is_object()) {
        throw ConfigError(key.substr(0, start - 1) + ": not an object");
      }
      if (dot == std::string::npos) {
        (*node)[part] = parse_value(item.substr(eq + 1));
        break;
      }
      node = &(*node)[part];
      if (node->is_null()) *node = json::object();
      start = dot + 1;
    }
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Renyi-entropy-constrained scalar quantization experiments"};
  app.require_subcommand(1);
  app.footer(kConfigHelp);

  Invocation inv;
  struct Sub {
    const char* name;
    const char* help;
    Runner runner;
  };
  const std::vector<Sub> experiments = {
      {"asymptotics", "Rate sweep of e^{rH}D against the quantization coefficient",
       run_asymptotics},
      {"entropy-density", "Entropy density of an interval along the sweep",
       run_entropy_density},
      {"distortion-density", "Distortion share and distortion measure of an interval",
       run_distortion_density},
      {"mismatch", "Companders for `source` applied to `mismatch_source`",
       run_mismatch},
      {"sanity", "Vanishing cell probabilities and diverging restricted entropies",
       run_sanity},
  };
  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", inv.config_path, "JSON config file");
    if (config_required) opt->required();
    sub->add_option("--output-dir", inv.output_dir, "Directory for CSV and summary")
        ->capture_default_str();
    sub->add_option("--set", inv.overrides,
                    "Override a config entry, e.g. --set alpha=0.3 "
                    "--set tolerances.final_ratio=0.1");
  };
  for (const auto& e : experiments) add_common(app.add_subcommand(e.name, e.help), true);
  add_common(app.add_subcommand("predict", "Print theoretical limits without a sweep"),
             true);
  add_common(app.add_subcommand("lemma-check",
                                "Minimizer lemma and point-density property checks"),
             false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitError;
  }

  try {
    const CLI::App* chosen = app.get_subcommands().front();
    const std::string name = chosen->get_name();
    for (const auto& e : experiments) {
      if (name == e.name) return run_experiment(name, e.runner, inv, out);
    }
    if (name == "predict") return run_predict(inv, out);
    return run_lemma_check(inv, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
  } catch (const HypothesisError& e) {
    err << "hypothesis check failed: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitError;
}

}  // namespace renyiq
