#pragma once

#include <optional>

#include "renyiq/compander.hpp"
#include "renyiq/density.hpp"
#include "renyiq/interval.hpp"

namespace renyiq {

struct RateParams {
  double alpha = 0.0;
  double r = 2.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  double c_r = 0.0;
};

/// beta1 = (1-α+αr)/(1-α+r), beta2 = (1-α+r)/(1-α), c_r = 1/(2^r (1+r)).
/// Requires alpha in [0,1) and r > 1.
RateParams rate_params(double alpha, double r);

/// C(r) (∫ g^{β₁})^{β₂}.
double quantization_coefficient(const Density& d, double alpha, double r);

/// (1/(α-1)) log ∫ u^α v^{1-α}; alpha == 1 gives the Kullback-Leibler
/// divergence. Returns +inf when the integral diverges or (for alpha >= 1)
/// when u has mass outside supp(v).
double renyi_divergence(const Density& u, const Density& v, double alpha);

/// μ̂ with density g^{β₁} / ∫ g^{β₁}.
Density tilted_measure(const Density& d, double alpha, double r);

/// μ̂(I) μ(I)^{-α}; requires μ(I) in (0, 1).
double entropy_density_limit(const Density& d, const Interval& i, double alpha,
                             double r);

/// M_g(I) = C(r) ∫_I g^{β₁} (∫ g^{β₁})^{r/(1-α)}.
double limit_distortion_measure(const Density& d, const Interval& i,
                                double alpha, double r);

/// C(r) (∫ g^α h^{1-α})^{r/(1-α)} ∫ g h^{-r}. Minimized by h = g_{α,r}.
double compander_performance(const Density& d, const PointDensity& h,
                             double alpha, double r);

struct BoundednessReport {
  bool bounded = true;
  /// Largest f/g seen on the grid.
  double bound = 0.0;
  double argmax = 0.0;
  /// First point where the ratio is infinite or grows past the safety margin.
  std::optional<double> violation;
};

/// Samples f/g on a 10^4-point grid over the truncated support of f and probes
/// outward on unbounded sides; flags growth beyond 1.1 times the grid maximum.
BoundednessReport check_boundedness(const Density& g, const Density& f);

/// ∫ (f/g)^α g^{β₁} / ∫ g^{β₁}: limit of e^{(1-α)(H_ν - H_μ)}.
double mismatch_entropy_shift(const Density& g, const Density& f, double alpha,
                              double r);

/// Limit of e^{rH^α_ν(q_n)} D_ν(q_n) for companders optimal for g.
double mismatch_distortion_limit(const Density& g, const Density& f,
                                 double alpha, double r);

/// The same limit as C(r) e^{-r D_α(f||g_{α,r})} ∫ f / g_{α,r}^r.
double mismatch_distortion_limit_divergence_form(const Density& g,
                                                 const Density& f,
                                                 double alpha, double r);

/// mismatch_distortion_limit / Q_{α,r}(ν).
double mismatch_loss(const Density& g, const Density& f, double alpha,
                     double r);

/// Loss written through Rényi divergences between f, g_{α,r}, f_{α,r} and
/// f_{0,r}.
double mismatch_loss_divergence_form(const Density& g, const Density& f,
                                     double alpha, double r);

/// Fixed-rate loss e^{r D_{1+r}(f_* || g_*)}.
double fixed_rate_mismatch_loss(const Density& g, const Density& f, double r);

/// Shannon-entropy loss e^{r D(f || g)}.
double variable_rate_mismatch_loss(const Density& g, const Density& f,
                                   double r);

struct SplitBound {
  double f_value = 0.0;
  double z0 = 0.0;
  double f_min = 0.0;
};

/// F(z) = A/z^γ + B/(1-z)^γ, its minimizer z0 and minimum. Throws DomainError
/// when A = B = 0.
SplitBound split_bound(double a, double b, double gamma, double z);

}  // namespace renyiq
