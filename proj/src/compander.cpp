#include "renyiq/compander.hpp"

#include <cmath>
#include <sstream>

#include "renyiq/errors.hpp"
#include "renyiq/quadrature.hpp"

namespace renyiq {

PointDensity optimal_point_density(const Density& d, double alpha, double r) {
  if (!(alpha >= 0.0 && alpha < 1.0) || !(r > 1.0)) {
    throw DomainError("optimal_point_density: need alpha in [0,1) and r > 1");
  }
  const double beta2 = (1.0 - alpha + r) / (1.0 - alpha);
  return PointDensity(tilt(d, 1.0 / beta2));
}

Quantizer build_compander(const PointDensity& h, std::size_t n) {
  if (n < 2) throw DomainError("build_compander: need n >= 2");
  const Density& p = h.density();
  const double nn = static_cast<double>(n);
  // Upper quantiles on the right half keep the outer tail points accurate.
  auto at = [&](double num) {
    const double u = num / nn;
    return u <= 0.5 ? p.quantile(u) : p.upper_quantile((nn - num) / nn);
  };
  std::vector<double> breakpoints(n - 1);
  std::vector<double> codepoints(n);
  for (std::size_t k = 1; k < n; ++k) breakpoints[k - 1] = at(double(k));
  for (std::size_t k = 1; k <= n; ++k) {
    codepoints[k - 1] = at(double(k) - 0.5);
  }
  return Quantizer(std::move(breakpoints), std::move(codepoints));
}

namespace {

const QuadratureOptions kRefineOpts{1e-11, 1e-300, 1'000'000};

double conditional_mean(const Density& d, const Interval& cell, double mass) {
  const Interval s = intersect(cell, d.support());
  auto f = [&](double x) { return x * d.pdf(x); };
  const auto kinks = d.kinks();
  if (s.is_finite()) return integrate(f, s, kinks, kRefineOpts).value / mass;
  Interval start = s;
  const Interval core = d.core();
  if (!std::isfinite(start.lo)) start.lo = std::min(core.lo, start.hi - 1.0);
  if (!std::isfinite(start.hi)) start.hi = std::max(core.hi, start.lo + 1.0);
  return integrate_on_support(f, s, start, kinks, kRefineOpts).value / mass;
}

}  // namespace

Quantizer refine_codepoints(const Quantizer& q, const Density& d, double r) {
  if (!(r >= 1.0)) throw DomainError("refine_codepoints: need r >= 1");
  std::vector<double> codepoints = q.codepoints();
  for (std::size_t k = 0; k < q.size(); ++k) {
    const Interval cell = q.cell(k);
    const double mass = d.mass(cell);
    if (!(mass > 0.0)) {
      std::ostringstream msg;
      msg << "refine_codepoints: cell " << k << " has zero probability";
      throw DegenerateCellError(msg.str());
    }
    const Interval s = intersect(cell, d.support());
    double best;
    if (r == 2.0) {
      best = conditional_mean(d, cell, mass);
    } else {
      // Golden-section search on the convex cell cost, bracketed by the
      // cell's 1e-9 conditional quantiles when it is unbounded.
      const Density cond = restrict(d, cell);
      double a = std::isfinite(s.lo) ? s.lo : cond.quantile(1e-9);
      double b = std::isfinite(s.hi) ? s.hi : cond.upper_quantile(1e-9);
      auto cost = [&](double c) {
        const Quantizer probe(std::vector<double>{}, std::vector<double>{c});
        return cell_distortion(probe, cond, 0, r);
      };
      const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
      double x1 = b - inv_phi * (b - a);
      double x2 = a + inv_phi * (b - a);
      double f1 = cost(x1);
      double f2 = cost(x2);
      while (b - a > 1e-10 * std::max(1.0, std::abs(a) + std::abs(b))) {
        if (f1 < f2) {
          b = x2;
          x2 = x1;
          f2 = f1;
          x1 = b - inv_phi * (b - a);
          f1 = cost(x1);
        } else {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + inv_phi * (b - a);
          f2 = cost(x2);
        }
      }
      best = 0.5 * (a + b);
    }
    // Keep the codepoint interior even when the centroid rounds onto an edge.
    if (!(best > cell.lo && best < cell.hi)) best = codepoints[k];
    codepoints[k] = best;
  }
  return Quantizer(q.breakpoints(), std::move(codepoints));
}

}  // namespace renyiq
