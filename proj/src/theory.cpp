#include "renyiq/theory.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "renyiq/errors.hpp"
#include "renyiq/quadrature.hpp"

namespace renyiq {
namespace {

const QuadratureOptions kTheoryOpts{1e-12, 1e-300, 1'000'000};

std::vector<double> merged_kinks(const Density& a, const Density& b) {
  auto k = a.kinks();
  const auto kb = b.kinks();
  k.insert(k.end(), kb.begin(), kb.end());
  std::sort(k.begin(), k.end());
  k.erase(std::unique(k.begin(), k.end()), k.end());
  return k;
}

// ∫ exp(integrand(log u(x), log v(x))) over `support`, skipping points where
// u vanishes.
double log_domain_integral(const Density& u, const Density& v,
                           const Interval& support,
                           const std::function<double(double, double)>& expo) {
  if (!(support.lo < support.hi)) return 0.0;
  const Interval core = intersect(hull(u.core(), v.core()), support);
  auto f = [&](double x) {
    const double lu = u.log_pdf(x);
    if (lu == -kInf) return 0.0;
    return std::exp(expo(lu, v.log_pdf(x)));
  };
  const auto kinks = merged_kinks(u, v);
  if (support.is_finite()) return integrate(f, support, kinks, kTheoryOpts).value;
  return integrate_on_support(f, support, core, kinks, kTheoryOpts).value;
}

void check_rate(double alpha, double r) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw DomainError("alpha must lie in [0, 1)");
  }
  if (!(r > 1.0) || !std::isfinite(r)) throw DomainError("r must exceed 1");
}

// True when u puts positive mass outside supp(v).
bool escapes_support(const Density& u, const Density& v) {
  const Interval sv = v.support();
  double outside = 0.0;
  if (std::isfinite(sv.lo)) outside += u.cdf(sv.lo);
  if (std::isfinite(sv.hi)) outside += u.ccdf(sv.hi);
  return outside > 0.0;
}

}  // namespace

RateParams rate_params(double alpha, double r) {
  check_rate(alpha, r);
  RateParams p;
  p.alpha = alpha;
  p.r = r;
  p.beta1 = (1.0 - alpha + alpha * r) / (1.0 - alpha + r);
  p.beta2 = (1.0 - alpha + r) / (1.0 - alpha);
  p.c_r = 1.0 / (std::pow(2.0, r) * (1.0 + r));
  // β₁ - α = (1-α)/β₂ and β₁ - 1 = -r/β₂.
  const double e1 = std::abs((p.beta1 - alpha) - (1.0 - alpha) / p.beta2);
  const double e2 = std::abs((p.beta1 - 1.0) + r / p.beta2);
  if (e1 > 1e-12 || e2 > 1e-12) {
    throw DomainError("rate_params: parameter identities fail numerically");
  }
  return p;
}

double quantization_coefficient(const Density& d, double alpha, double r) {
  const RateParams p = rate_params(alpha, r);
  return std::exp(std::log(p.c_r) +
                  p.beta2 * std::log(power_integral(d, p.beta1)));
}

double renyi_divergence(const Density& u, const Density& v, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DomainError("renyi_divergence: alpha must be positive");
  }
  try {
    if (alpha >= 1.0 && escapes_support(u, v)) return kInf;
    if (alpha == 1.0) {
      const Interval s = u.support();
      const Interval core = intersect(hull(u.core(), v.core()), s);
      auto f = [&](double x) {
        const double lu = u.log_pdf(x);
        if (lu == -kInf) return 0.0;
        return std::exp(lu) * (lu - v.log_pdf(x));
      };
      const auto kinks = merged_kinks(u, v);
      const double value =
          s.is_finite() ? integrate(f, s, kinks, kTheoryOpts).value
                        : integrate_on_support(f, s, core, kinks, kTheoryOpts)
                              .value;
      return std::max(0.0, value);
    }
    const Interval s = alpha < 1.0 ? intersect(u.support(), v.support())
                                   : u.support();
    const double integral =
        log_domain_integral(u, v, s, [alpha](double lu, double lv) {
          return alpha * lu + (1.0 - alpha) * lv;
        });
    if (!(integral > 0.0)) return kInf;
    return std::max(0.0, std::log(integral) / (alpha - 1.0));
  } catch (const DivergentIntegralError&) {
    return kInf;
  }
}

Density tilted_measure(const Density& d, double alpha, double r) {
  return tilt(d, rate_params(alpha, r).beta1);
}

double entropy_density_limit(const Density& d, const Interval& i, double alpha,
                             double r) {
  const double m = d.mass(i);
  if (!(m > 0.0 && m < 1.0)) {
    throw DomainError("entropy_density_limit: need 0 < mu(I) < 1");
  }
  return tilted_measure(d, alpha, r).mass(i) * std::pow(m, -alpha);
}

double limit_distortion_measure(const Density& d, const Interval& i,
                                double alpha, double r) {
  // C ∫_I g^{β₁} (∫g^{β₁})^{r/(1-α)} = μ̂(I) C (∫g^{β₁})^{β₂}.
  return tilted_measure(d, alpha, r).mass(i) *
         quantization_coefficient(d, alpha, r);
}

double compander_performance(const Density& d, const PointDensity& h,
                             double alpha, double r) {
  const RateParams p = rate_params(alpha, r);
  const Density& hd = h.density();
  const Interval s = d.support();
  auto positive = [&](double lu, double lh) {
    if (lh == -kInf) {
      throw DomainError(
          "compander_performance: point density vanishes on the source support");
    }
    return lu;
  };
  const double i1 = log_domain_integral(d, hd, s, [&](double lu, double lh) {
    return alpha * positive(lu, lh) + (1.0 - alpha) * lh;
  });
  const double i2 = log_domain_integral(
      d, hd, s, [&](double lu, double lh) { return positive(lu, lh) - r * lh; });
  return std::exp(std::log(p.c_r) + r / (1.0 - alpha) * std::log(i1) +
                  std::log(i2));
}

BoundednessReport check_boundedness(const Density& g, const Density& f) {
  constexpr int kGrid = 10000;
  constexpr double kSafety = 1.1;
  BoundednessReport report;
  const Interval s = f.support();
  const Interval w = f.core();

  auto ratio_at = [&](double x) {
    const double lf = f.log_pdf(x);
    if (lf == -kInf) return 0.0;
    const double lg = g.log_pdf(x);
    return lg == -kInf ? kInf : std::exp(lf - lg);
  };

  for (int i = 0; i < kGrid; ++i) {
    // Midpoint grid keeps clear of support endpoints.
    const double x = w.lo + w.length() * (i + 0.5) / kGrid;
    const double v = ratio_at(x);
    if (v == kInf) {
      report.bounded = false;
      report.violation = x;
      report.bound = kInf;
      report.argmax = x;
      return report;
    }
    if (v > report.bound) {
      report.bound = v;
      report.argmax = x;
    }
  }
  const double half = 0.5 * w.length();
  const double center = w.midpoint();
  for (double factor : {2.0, 4.0}) {
    for (double side : {-1.0, 1.0}) {
      const double x = center + side * factor * half;
      if (!s.contains(x)) continue;
      const double v = ratio_at(x);
      if (v > kSafety * report.bound) {
        report.bounded = false;
        if (!report.violation) report.violation = x;
      }
    }
  }
  return report;
}

double mismatch_entropy_shift(const Density& g, const Density& f, double alpha,
                              double r) {
  const RateParams p = rate_params(alpha, r);
  const double num = log_domain_integral(
      f, g, f.support(), [&](double lf, double lg) {
        return alpha * lf + (p.beta1 - alpha) * lg;
      });
  return num / power_integral(g, p.beta1);
}

namespace {

double log_mismatch_distortion_limit(const Density& g, const Density& f,
                                     double alpha, double r) {
  const RateParams p = rate_params(alpha, r);
  // h = g^{1/β₂} unnormalized; the expression is invariant to scaling of h.
  const double i1 = log_domain_integral(
      f, g, f.support(), [&](double lf, double lg) {
        return alpha * lf + (1.0 - alpha) / p.beta2 * lg;
      });
  const double i2 = log_domain_integral(
      f, g, f.support(),
      [&](double lf, double lg) { return lf - r / p.beta2 * lg; });
  return std::log(p.c_r) + r / (1.0 - alpha) * std::log(i1) + std::log(i2);
}

}  // namespace

double mismatch_distortion_limit(const Density& g, const Density& f,
                                 double alpha, double r) {
  return std::exp(log_mismatch_distortion_limit(g, f, alpha, r));
}

double mismatch_distortion_limit_divergence_form(const Density& g,
                                                 const Density& f,
                                                 double alpha, double r) {
  const RateParams p = rate_params(alpha, r);
  const Density h = optimal_point_density(g, alpha, r).density();
  const double bennett = log_domain_integral(
      f, h, f.support(), [&](double lf, double lh) { return lf - r * lh; });
  const double div =
      alpha == 0.0 ? -std::log(h.mass(f.support())) : renyi_divergence(f, h, alpha);
  return p.c_r * std::exp(-r * div) * bennett;
}

double mismatch_loss(const Density& g, const Density& f, double alpha,
                     double r) {
  return std::exp(log_mismatch_distortion_limit(g, f, alpha, r) -
                  std::log(quantization_coefficient(f, alpha, r)));
}

namespace {

// D_{1+r}(u||v) = (1/r) log ∫ u^{1+r} v^{-r}.
double order_one_plus_r(const Density& u, const Density& v, double r) {
  return renyi_divergence(u, v, 1.0 + r);
}

// D_α(u||v) with the α -> 0 value -log v(supp u).
double order_alpha(const Density& u, const Density& v, double alpha) {
  if (alpha == 0.0) return -std::log(v.mass(u.support()));
  return renyi_divergence(u, v, alpha);
}

}  // namespace

double mismatch_loss_divergence_form(const Density& g, const Density& f,
                                     double alpha, double r) {
  check_rate(alpha, r);
  const Density g_ar = optimal_point_density(g, alpha, r).density();
  const Density f_ar = optimal_point_density(f, alpha, r).density();
  const Density f_0r = optimal_point_density(f, 0.0, r).density();
  const double num =
      order_one_plus_r(f_0r, g_ar, r) - order_alpha(f, g_ar, alpha);
  const double den =
      order_one_plus_r(f_0r, f_ar, r) - order_alpha(f, f_ar, alpha);
  return std::exp(r * (num - den));
}

double fixed_rate_mismatch_loss(const Density& g, const Density& f, double r) {
  check_rate(0.0, r);
  const Density g_star = tilt(g, 1.0 / (1.0 + r));
  const Density f_star = tilt(f, 1.0 / (1.0 + r));
  return std::exp(r * renyi_divergence(f_star, g_star, 1.0 + r));
}

double variable_rate_mismatch_loss(const Density& g, const Density& f,
                                   double r) {
  check_rate(0.0, r);
  return std::exp(r * renyi_divergence(f, g, 1.0));
}

SplitBound split_bound(double a, double b, double gamma, double z) {
  if (!(a >= 0.0 && b >= 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("split_bound: A and B must be finite and nonnegative");
  }
  if (!(gamma > 0.0)) throw DomainError("split_bound: gamma must be positive");
  if (!(z > 0.0 && z < 1.0)) throw DomainError("split_bound: z must lie in (0,1)");
  if (a == 0.0 && b == 0.0) {
    throw DomainError("split_bound: A = B = 0 leaves the minimizer undefined");
  }
  const double e = 1.0 / (1.0 + gamma);
  const double ra = std::pow(a, e);
  const double rb = std::pow(b, e);
  SplitBound out;
  out.f_value = a / std::pow(z, gamma) + b / std::pow(1.0 - z, gamma);
  out.z0 = ra / (ra + rb);
  out.f_min = std::pow(ra + rb, 1.0 + gamma);
  return out;
}

}  // namespace renyiq
