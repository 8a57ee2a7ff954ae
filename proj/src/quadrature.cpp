#include "renyiq/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "renyiq/density.hpp"
#include "renyiq/errors.hpp"

namespace renyiq {
namespace {

// Kronrod abscissae on [0,1]; odd indices are the 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
  double abs_value = 0.0;
};

double eval(const Integrand& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y)) {
    std::ostringstream msg;
    msg << "integrand is not finite at x=" << x;
    throw DivergentIntegralError(msg.str());
  }
  return y;
}

Panel gauss_kronrod(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = eval(f, center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double abs_sum = std::abs(fc) * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = eval(f, center - dx);
    const double f2 = eval(f, center + dx);
    kronrod += kWgk[j] * (f1 + f2);
    abs_sum += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half),
          abs_sum * std::abs(half)};
}

struct WorstFirst {
  bool operator()(const Panel& x, const Panel& y) const {
    if (x.error != y.error) return x.error < y.error;
    return x.a > y.a;
  }
};

std::vector<double> panel_edges(Interval domain,
                                std::span<const double> breakpoints) {
  std::vector<double> edges{domain.lo};
  for (double p : breakpoints) {
    if (p > domain.lo && p < domain.hi) edges.push_back(p);
  }
  edges.push_back(domain.hi);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

}  // namespace

IntegrationResult integrate(const Integrand& f, Interval domain,
                            std::span<const double> breakpoints,
                            const QuadratureOptions& opts) {
  if (!domain.is_finite()) {
    throw DomainError("integrate: interval endpoints must be finite");
  }
  if (domain.lo == domain.hi) return {0.0, 0.0, 1};
  if (domain.lo > domain.hi) {
    throw DomainError("integrate: interval lower endpoint exceeds upper");
  }

  std::priority_queue<Panel, std::vector<Panel>, WorstFirst> heap;
  std::vector<Panel> frozen;
  double total = 0.0;
  double total_err = 0.0;
  double total_abs = 0.0;
  const auto edges = panel_edges(domain, breakpoints);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    Panel p = gauss_kronrod(f, edges[i], edges[i + 1]);
    total += p.value;
    total_err += p.error;
    total_abs += p.abs_value;
    heap.push(p);
  }
  std::size_t panels = heap.size();

  const double eps = std::numeric_limits<double>::epsilon();
  auto target = [&] {
    return std::max({opts.rel_tol * std::abs(total), opts.abs_tol,
                     50.0 * eps * total_abs});
  };

  while (total_err > target()) {
    if (heap.empty()) {
      throw NonConvergenceError(
          "integrate: error target unreachable at floating-point resolution");
    }
    if (panels >= opts.max_subdivisions) {
      throw NonConvergenceError("integrate: exceeded subdivision limit");
    }
    const Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      frozen.push_back(worst);
      continue;
    }
    const Panel left = gauss_kronrod(f, worst.a, mid);
    const Panel right = gauss_kronrod(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    total_abs += left.abs_value + right.abs_value - worst.abs_value;
    heap.push(left);
    heap.push(right);
    ++panels;
  }

  // Re-sum in a fixed order so the result does not depend on drift in the
  // running totals.
  std::vector<Panel> all = std::move(frozen);
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(),
            [](const Panel& x, const Panel& y) { return x.a < y.a; });
  IntegrationResult out;
  for (const Panel& p : all) {
    out.value += p.value;
    out.error_estimate += p.error;
  }
  out.subdivisions = panels;
  return out;
}

IntegrationResult integrate(const Integrand& f, Interval domain,
                            const QuadratureOptions& opts) {
  return integrate(f, domain, std::span<const double>{}, opts);
}

namespace {

struct TailIntegral {
  Interval domain;
  IntegrationResult result;
};

TailIntegral integrate_with_tails(const Integrand& f, Interval support,
                                  Interval core,
                                  std::span<const double> breakpoints,
                                  const QuadratureOptions& opts) {
  Interval start = intersect(core, support);
  if (!start.is_finite() || start.lo >= start.hi) {
    throw DomainError("integrate_on_support: core window must be finite and "
                      "overlap the support");
  }
  IntegrationResult acc = integrate(f, start, breakpoints, opts);
  const double center = start.midpoint();
  const double tail_rel = 1e-2 * opts.rel_tol;
  constexpr int kMaxDoublings = 64;

  auto extend = [&](double edge, double direction) {
    for (int k = 0; k < kMaxDoublings; ++k) {
      double width = std::abs(edge - center);
      if (width == 0.0) width = 1.0;
      const double probe =
          std::max({std::abs(eval(f, edge)),
                    std::abs(eval(f, edge + 0.5 * direction * width)),
                    std::abs(eval(f, edge + direction * width))});
      if (probe == 0.0 || probe * width <= tail_rel * std::abs(acc.value)) {
        return edge;
      }
      const double next = edge + direction * width;
      const Interval piece = direction < 0 ? Interval{next, edge}
                                           : Interval{edge, next};
      if (!std::isfinite(next)) break;
      IntegrationResult part;
      try {
        part = integrate(f, piece, breakpoints, opts);
      } catch (const NonConvergenceError&) {
        // The core converged, so an unresolvable far tail means a heavy tail.
        throw DivergentIntegralError(
            "integral over unbounded support does not converge");
      }
      acc.value += part.value;
      acc.error_estimate += part.error_estimate;
      acc.subdivisions += part.subdivisions;
      edge = next;
    }
    throw DivergentIntegralError(
        "integral over unbounded support does not converge");
  };

  Interval domain = start;
  if (!std::isfinite(support.lo)) domain.lo = extend(start.lo, -1.0);
  if (!std::isfinite(support.hi)) domain.hi = extend(start.hi, 1.0);
  return {domain, acc};
}

}  // namespace

Interval effective_domain(const Integrand& f, Interval support, Interval core,
                          const QuadratureOptions& opts) {
  return integrate_with_tails(f, support, core, {}, opts).domain;
}

IntegrationResult integrate_on_support(const Integrand& f, Interval support,
                                       Interval core,
                                       std::span<const double> breakpoints,
                                       const QuadratureOptions& opts) {
  return integrate_with_tails(f, support, core, breakpoints, opts).result;
}

Interval truncate_support(const Density& d, double mass_tol) {
  if (!(mass_tol > 0.0 && mass_tol < 0.01)) {
    throw DomainError("truncate_support: mass_tol must lie in (0, 0.01)");
  }
  const Interval s = d.support();
  return {std::isfinite(s.lo) ? s.lo : d.quantile(mass_tol),
          std::isfinite(s.hi) ? s.hi : d.upper_quantile(mass_tol)};
}

}  // namespace renyiq
