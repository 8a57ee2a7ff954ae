#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "renyiq/interval.hpp"
#include "renyiq/quadrature.hpp"

namespace renyiq {

/// Probability mass cut from each unbounded tail when a finite integration
/// window is needed.
inline constexpr double kTailMass = 1e-12;

class DensityModel;

/// Immutable handle to a univariate probability density. Cheap to copy;
/// copies share the underlying model.
class Density {
 public:
  /// Validates normalization by quadrature; throws DomainError when the model
  /// does not integrate to one within 1e-8.
  explicit Density(std::shared_ptr<const DensityModel> model);

  std::string family() const;
  Interval support() const;
  /// Support truncated at kTailMass on each unbounded side.
  Interval core() const { return core_; }

  double pdf(double x) const;
  double log_pdf(double x) const;
  double cdf(double x) const;
  /// 1 - cdf(x), evaluated without cancellation where the family allows.
  double ccdf(double x) const;
  /// inf{x : cdf(x) >= p}; throws DomainError unless p is in (0, 1).
  double quantile(double p) const;
  /// Point with upper-tail mass q, i.e. quantile(1 - q) without cancellation.
  double upper_quantile(double q) const;
  /// Probability of the half-open interval (lo, hi].
  double mass(const Interval& i) const;
  double mass(const Region& region) const;

  /// Points where the pdf is not smooth (support endpoints, peaks, knots).
  std::vector<double> kinks() const;
  double mode() const;
  double median() const { return quantile(0.5); }

  nlohmann::json to_json() const;
  const DensityModel& model() const { return *model_; }

 private:
  std::shared_ptr<const DensityModel> model_;
  Interval core_;
};

/// Family implementation behind Density. Derived classes override the closed
/// forms they have; everything else falls back to bisection or quadrature.
class DensityModel {
 public:
  virtual ~DensityModel() = default;

  virtual std::string family() const = 0;
  virtual Interval support() const = 0;
  virtual double pdf(double x) const = 0;
  virtual double log_pdf(double x) const;
  virtual double cdf(double x) const = 0;
  virtual double ccdf(double x) const { return 1.0 - cdf(x); }
  virtual double quantile(double p) const;
  virtual double upper_quantile(double q) const;
  virtual std::vector<double> kinks() const { return {}; }
  virtual std::optional<double> mode() const { return std::nullopt; }

  /// ∫ g^beta dλ when the family has it in closed form.
  virtual std::optional<double> closed_power_integral(double /*beta*/) const {
    return std::nullopt;
  }
  /// g^beta / ∫ g^beta when it stays in a closed-form family.
  virtual std::optional<Density> closed_tilt(double /*beta*/) const {
    return std::nullopt;
  }
  /// Density of scale*X + shift (scale > 0) in a closed-form family.
  virtual std::optional<Density> closed_affine(double /*scale*/,
                                               double /*shift*/) const {
    return std::nullopt;
  }

  virtual nlohmann::json to_json() const = 0;

 protected:
  /// Finite bracket containing all but a negligible part of the mass; used by
  /// the bisection fallbacks.
  virtual Interval search_window() const;
};

// Families.
Density uniform(double a, double b);
Density gaussian(double mean, double sigma);
Density laplacian(double mean, double scale);
Density exponential(double rate, double shift = 0.0);
/// Linear interpolation between (x, y) knots; x nondecreasing (a repeated x
/// encodes a jump), y >= 0. The shape is normalized to unit mass.
Density piecewise_linear(std::vector<std::pair<double, double>> knots);
/// Weighted mixture; weights are normalized to sum to one.
Density mixture(std::vector<std::pair<double, Density>> components);
/// Density of scale*X + shift, scale > 0.
Density affine(const Density& d, double scale, double shift = 0.0);
/// g^beta / ∫ g^beta. Resolves to a closed-form family when possible.
Density tilt(const Density& d, double beta);

/// Conditional density g 1_I / μ(I). Throws EmptyConditioningError when
/// μ(I) = 0.
Density restrict(const Density& d, const Interval& i);

/// ∫ g^beta dλ for beta > 0. Closed form where available, otherwise adaptive
/// quadrature with outward tail search; a divergent integral raises
/// DivergentIntegralError.
double power_integral(const Density& d, double beta);

/// (1/(1-beta)) log ∫ g^beta dλ; beta == 1 gives the Shannon differential
/// entropy -∫ g log g by quadrature.
double renyi_differential_entropy(const Density& d, double beta);

/// ∫ |x|^r dμ for r >= 1. Throws DivergentIntegralError if infinite.
double absolute_moment(const Density& d, double r);

struct WeakUnimodalityReport {
  bool passed = true;
  double max_pdf = 0.0;
  std::optional<double> failing_level;
};

/// Samples levels l below max g on a log grid and checks that {g >= l} is a
/// single run on a dense x-grid over the truncated support.
WeakUnimodalityReport check_weak_unimodality(const Density& d,
                                             int level_grid_size);

/// Parses {"family": "gaussian", "mean": 0, "sigma": 1} and friends. `path`
/// prefixes field names in ConfigError messages.
Density density_from_json(const nlohmann::json& spec,
                          const std::string& path = "density");

}  // namespace renyiq
