#include "renyiq/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "renyiq/errors.hpp"
#include "renyiq/quadrature.hpp"

namespace renyiq {

ProbabilityVector::ProbabilityVector(std::vector<double> entries)
    : p_(std::move(entries)) {
  if (p_.empty()) throw DomainError("probability vector is empty");
  double total = 0.0;
  for (double v : p_) {
    if (!(v >= 0.0 && v <= 1.0 + 1e-12)) {
      throw DomainError("probability vector entries must lie in [0, 1]");
    }
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << "probability vector sums to " << total;
    throw DomainError(msg.str());
  }
}

double renyi_entropy_vec(const ProbabilityVector& p, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw DomainError("renyi_entropy_vec: alpha must lie in [0, 1]");
  }
  if (alpha <= 1e-6) {
    const auto positive =
        std::count_if(p.entries().begin(), p.entries().end(),
                      [](double v) { return v > 0.0; });
    return std::log(static_cast<double>(positive));
  }
  if (std::abs(alpha - 1.0) <= 1e-6) {
    double h = 0.0;
    for (double v : p.entries()) {
      if (v > 0.0) h -= v * std::log(v);
    }
    return std::max(0.0, h);
  }
  double sum = 0.0;
  for (double v : p.entries()) {
    if (v > 0.0) sum += std::pow(v, alpha);
  }
  return std::max(0.0, std::log(sum) / (1.0 - alpha));
}

// --- Quantizer --------------------------------------------------------------

Quantizer::Quantizer(std::vector<double> breakpoints,
                     std::vector<double> codepoints)
    : breakpoints_(std::move(breakpoints)), codepoints_(std::move(codepoints)) {
  if (codepoints_.size() != breakpoints_.size() + 1) {
    throw DomainError("quantizer: need exactly one more codepoint than "
                      "breakpoints");
  }
  for (std::size_t k = 0; k < breakpoints_.size(); ++k) {
    if (!std::isfinite(breakpoints_[k]) ||
        (k > 0 && !(breakpoints_[k] > breakpoints_[k - 1]))) {
      throw DomainError("quantizer: breakpoints must be finite and strictly "
                        "increasing");
    }
  }
  for (std::size_t k = 0; k < codepoints_.size(); ++k) {
    const Interval c = cell(k);
    const double x = codepoints_[k];
    if (!std::isfinite(x) || !(x > c.lo && x < c.hi)) {
      std::ostringstream msg;
      msg << "quantizer: codepoint " << k << " (" << x
          << ") is not interior to its cell";
      throw DomainError(msg.str());
    }
  }
}

Interval Quantizer::cell(std::size_t k) const {
  return {k == 0 ? -kInf : breakpoints_[k - 1],
          k == breakpoints_.size() ? kInf : breakpoints_[k]};
}

std::size_t Quantizer::cell_index(double x) const {
  return static_cast<std::size_t>(
      std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x) -
      breakpoints_.begin());
}

nlohmann::json Quantizer::to_json() const {
  return {{"breakpoints", breakpoints_}, {"codepoints", codepoints_}};
}

Quantizer Quantizer::from_json(const nlohmann::json& j) {
  return Quantizer(j.at("breakpoints").get<std::vector<double>>(),
                   j.at("codepoints").get<std::vector<double>>());
}

// --- Evaluation -------------------------------------------------------------

ProbabilityVector cell_probabilities(const Quantizer& q, const Density& d) {
  std::vector<double> p(q.size());
  for (std::size_t k = 0; k < q.size(); ++k) p[k] = d.mass(q.cell(k));
  // Closed-form cdfs are exact to rounding; renormalize the last ulps away.
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& v : p) v /= total;
  return ProbabilityVector(std::move(p));
}

double quantizer_entropy(const Quantizer& q, const Density& d, double alpha) {
  return renyi_entropy_vec(cell_probabilities(q, d), alpha);
}

namespace {

const QuadratureOptions kCellOpts{1e-10, 1e-300, 1'000'000};

double integrate_cell(const Density& d, Interval piece, double c, double r) {
  const Interval s = intersect(piece, d.support());
  if (!(s.lo < s.hi)) return 0.0;
  if (d.family() == "uniform") {
    // Constant density: ∫|x-c|^r dx has an antiderivative.
    auto prim = [&](double x) {
      return std::copysign(std::pow(std::abs(x - c), r + 1.0), x - c) / (r + 1.0);
    };
    return d.pdf(s.midpoint()) * (prim(s.hi) - prim(s.lo));
  }
  auto f =[&](double x) {
    const double g = d.pdf(x);
    return g == 0.0 ? 0.0 : std::pow(std::abs(x - c), r) * g;
  };
  std::vector<double> cuts = d.kinks();
  cuts.push_back(c);
  if (s.is_finite()) return integrate(f, s, cuts, kCellOpts).value;

  const Interval core = d.core();
  Interval start = s;
  if (!std::isfinite(start.lo)) start.lo = std::min(core.lo, start.hi - 1.0);
  if (!std::isfinite(start.hi)) start.hi = std::max(core.hi, start.lo + 1.0);
  return integrate_on_support(f, s, start, cuts, kCellOpts).value;
}

}  // namespace

double cell_distortion(const Quantizer& q, const Density& d, std::size_t k,
                       double r) {
  return integrate_cell(d, q.cell(k), q.codepoints()[k], r);
}

double cell_distortion(const Quantizer& q, const Density& d, std::size_t k,
                       double r, const Interval& i) {
  return integrate_cell(d, intersect(q.cell(k), i), q.codepoints()[k], r);
}

double distortion(const Quantizer& q, const Density& d, double r) {
  if (!(r >= 1.0)) throw DomainError("distortion: need r >= 1");
  double total = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) total += cell_distortion(q, d, k, r);
  return total;
}

double partial_distortion(const Quantizer& q, const Density& d, double r,
                          const Interval& i) {
  if (!(r >= 1.0)) throw DomainError("partial_distortion: need r >= 1");
  if (i.empty()) return 0.0;
  double total = 0.0;
  const std::size_t first = std::isfinite(i.lo) ? q.cell_index(i.lo) : 0;
  const std::size_t last =
      std::isfinite(i.hi) ? q.cell_index(i.hi) : q.size() - 1;
  for (std::size_t k = first; k <= last; ++k) {
    total += cell_distortion(q, d, k, r, i);
  }
  return total;
}

double partial_distortion(const Quantizer& q, const Density& d, double r,
                          const Region& region) {
  double total = 0.0;
  for (const auto& i : region) total += partial_distortion(q, d, r, i);
  return total;
}

namespace {

double region_mass_in(const Density& d, const Interval& cell,
                      const Region& region) {
  double m = 0.0;
  for (const auto& piece : region) {
    const Interval x = intersect(cell, piece);
    if (x.lo < x.hi) m += d.mass(x);
  }
  return m;
}

}  // namespace

RestrictedMetrics restricted_metrics(const Quantizer& q, const Density& d,
                                     const Region& region, double alpha,
                                     double r) {
  const double total = d.mass(region);
  if (!(total > 0.0)) {
    throw EmptyConditioningError(
        "restricted_metrics: conditioning set has zero probability");
  }
  RestrictedMetrics out;
  std::vector<double> cond(q.size());
  for (std::size_t k = 0; k < q.size(); ++k) {
    const Interval c = q.cell(k);
    const double pk = d.mass(c);
    const double ak = region_mass_in(d, c, region);
    if (pk > 0.0) out.entropy_power_sum += std::pow(pk, alpha);
    if (ak > 0.0) out.restricted_power_sum += std::pow(ak, alpha);
    cond[k] = ak;
  }
  const double sum = std::accumulate(cond.begin(), cond.end(), 0.0);
  for (double& v : cond) v /= sum;
  out.entropy_restricted = renyi_entropy_vec(ProbabilityVector(cond), alpha);
  out.distortion_restricted = partial_distortion(q, d, r, region) / total;
  return out;
}

RestrictedMetrics restricted_metrics(const Quantizer& q, const Density& d,
                                     const Interval& i, double alpha,
                                     double r) {
  return restricted_metrics(q, d, Region{i}, alpha, r);
}

std::size_t codepoint_count_in(const Quantizer& q, const Interval& i) {
  return static_cast<std::size_t>(
      std::count_if(q.codepoints().begin(), q.codepoints().end(),
                    [&](double c) { return i.contains(c); }));
}

}  // namespace renyiq
