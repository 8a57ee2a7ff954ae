#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "renyiq/interval.hpp"

namespace renyiq {

class Density;

struct QuadratureOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  std::size_t max_subdivisions = 1'000'000;
};

struct IntegrationResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t subdivisions = 0;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 7/15-point Gauss-Kronrod integration over a finite
/// interval. Panels are bisected in order of decreasing error estimate until
/// the summed estimate is below max(rel_tol*|value|, abs_tol).
///
/// `breakpoints` are interior points where the integrand is known to be
/// non-smooth; they seed the initial panel set. Throws DomainError for
/// infinite endpoints, NonConvergenceError when the subdivision budget runs
/// out and DivergentIntegralError when the integrand is not finite.
IntegrationResult integrate(const Integrand& f, Interval domain,
                            std::span<const double> breakpoints,
                            const QuadratureOptions& opts = {});

IntegrationResult integrate(const Integrand& f, Interval domain,
                            const QuadratureOptions& opts = {});

/// Finite window on which `f` carries all but a negligible part of its
/// integral over `support`. Starts from `core` and doubles each infinite side
/// outward while |f|*width at the edge exceeds tail_rel * (integral so far).
/// Throws DivergentIntegralError when no such window exists after 64
/// doublings.
Interval effective_domain(const Integrand& f, Interval support, Interval core,
                          const QuadratureOptions& opts = {});

/// integrate() over effective_domain(). Accepts unbounded supports.
IntegrationResult integrate_on_support(const Integrand& f, Interval support,
                                       Interval core,
                                       std::span<const double> breakpoints,
                                       const QuadratureOptions& opts = {});

/// [quantile(mass_tol), upper quantile(mass_tol)] for the infinite sides of the
/// support; finite sides are returned unchanged.
Interval truncate_support(const Density& d, double mass_tol);

}  // namespace renyiq
