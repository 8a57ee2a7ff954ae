#include "renyiq/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/erf.hpp>

#include "renyiq/errors.hpp"

namespace renyiq {
namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kLogSqrt2Pi = 0.91893853320467274178032973640562;

nlohmann::json endpoint_json(double x) {
  if (x == kInf) return "inf";
  if (x == -kInf) return "-inf";
  return x;
}

void require(bool ok, const char* message) {
  if (!ok) throw DomainError(message);
}

// Bisection on a monotone function of x: returns the smallest x (to
// floating-point resolution or 1e-12 relative width) with pred(x) true.
template <class Pred>
double bisect_first(Interval window, Pred pred) {
  double lo = window.lo;
  double hi = window.hi;
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (hi - lo <= 1e-12 * std::max(1.0, std::abs(mid))) break;
    if (pred(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

// ---------------------------------------------------------------------------

class UniformModel final : public DensityModel {
 public:
  UniformModel(double a, double b) : a_(a), b_(b) {
    require(std::isfinite(a) && std::isfinite(b) && a < b,
            "uniform: need finite a < b");
  }
  std::string family() const override { return "uniform"; }
  Interval support() const override { return {a_, b_}; }
  double pdf(double x) const override {
    return (x >= a_ && x <= b_) ? 1.0 / (b_ - a_) : 0.0;
  }
  double cdf(double x) const override {
    if (x <= a_) return 0.0;
    if (x >= b_) return 1.0;
    return (x - a_) / (b_ - a_);
  }
  double ccdf(double x) const override {
    if (x <= a_) return 1.0;
    if (x >= b_) return 0.0;
    return (b_ - x) / (b_ - a_);
  }
  double quantile(double p) const override { return a_ + p * (b_ - a_); }
  double upper_quantile(double q) const override { return b_ - q * (b_ - a_); }
  std::vector<double> kinks() const override { return {a_, b_}; }
  std::optional<double> mode() const override { return 0.5 * (a_ + b_); }
  std::optional<double> closed_power_integral(double beta) const override {
    return std::pow(b_ - a_, 1.0 - beta);
  }
  std::optional<Density> closed_tilt(double) const override {
    return uniform(a_, b_);
  }
  std::optional<Density> closed_affine(double s, double c) const override {
    return uniform(s * a_ + c, s * b_ + c);
  }
  nlohmann::json to_json() const override {
    return {{"family", "uniform"}, {"a", a_}, {"b", b_}};
  }

 private:
  double a_;
  double b_;
};

class GaussianModel final : public DensityModel {
 public:
  GaussianModel(double mean, double sigma) : mean_(mean), sigma_(sigma) {
    require(std::isfinite(mean) && sigma > 0.0 && std::isfinite(sigma),
            "gaussian: need finite mean and sigma > 0");
  }
  std::string family() const override { return "gaussian"; }
  Interval support() const override { return Interval::real_line(); }
  double pdf(double x) const override { return std::exp(log_pdf(x)); }
  double log_pdf(double x) const override {
    const double z = (x - mean_) / sigma_;
    return -0.5 * z * z - kLogSqrt2Pi - std::log(sigma_);
  }
  double cdf(double x) const override {
    return 0.5 * std::erfc(-(x - mean_) / (sigma_ * kSqrt2));
  }
  double ccdf(double x) const override {
    return 0.5 * std::erfc((x - mean_) / (sigma_ * kSqrt2));
  }
  double quantile(double p) const override {
    return mean_ - sigma_ * kSqrt2 * boost::math::erfc_inv(2.0 * p);
  }
  double upper_quantile(double q) const override {
    return mean_ + sigma_ * kSqrt2 * boost::math::erfc_inv(2.0 * q);
  }
  std::vector<double> kinks() const override { return {mean_}; }
  std::optional<double> mode() const override { return mean_; }
  std::optional<double> closed_power_integral(double beta) const override {
    return std::pow(2.0 * std::numbers::pi * sigma_ * sigma_,
                    0.5 * (1.0 - beta)) /
           std::sqrt(beta);
  }
  std::optional<Density> closed_tilt(double beta) const override {
    return gaussian(mean_, sigma_ / std::sqrt(beta));
  }
  std::optional<Density> closed_affine(double s, double c) const override {
    return gaussian(s * mean_ + c, s * sigma_);
  }
  nlohmann::json to_json() const override {
    return {{"family", "gaussian"}, {"mean", mean_}, {"sigma", sigma_}};
  }

 private:
  double mean_;
  double sigma_;
};

class LaplacianModel final : public DensityModel {
 public:
  LaplacianModel(double mean, double scale) : mean_(mean), scale_(scale) {
    require(std::isfinite(mean) && scale > 0.0 && std::isfinite(scale),
            "laplacian: need finite mean and scale > 0");
  }
  std::string family() const override { return "laplacian"; }
  Interval support() const override { return Interval::real_line(); }
  double pdf(double x) const override { return std::exp(log_pdf(x)); }
  double log_pdf(double x) const override {
    return -std::abs(x - mean_) / scale_ - std::log(2.0 * scale_);
  }
  double cdf(double x) const override {
    const double z = (x - mean_) / scale_;
    return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
  }
  double ccdf(double x) const override {
    const double z = (x - mean_) / scale_;
    return z > 0.0 ? 0.5 * std::exp(-z) : 1.0 - 0.5 * std::exp(z);
  }
  double quantile(double p) const override {
    return p < 0.5 ? mean_ + scale_ * std::log(2.0 * p)
                   : mean_ - scale_ * std::log(2.0 - 2.0 * p);
  }
  double upper_quantile(double q) const override {
    return q < 0.5 ? mean_ - scale_ * std::log(2.0 * q)
                   : mean_ + scale_ * std::log(2.0 - 2.0 * q);
  }
  std::vector<double> kinks() const override { return {mean_}; }
  std::optional<double> mode() const override { return mean_; }
  std::optional<double> closed_power_integral(double beta) const override {
    return std::pow(2.0 * scale_, 1.0 - beta) / beta;
  }
  std::optional<Density> closed_tilt(double beta) const override {
    return laplacian(mean_, scale_ / beta);
  }
  std::optional<Density> closed_affine(double s, double c) const override {
    return laplacian(s * mean_ + c, s * scale_);
  }
  nlohmann::json to_json() const override {
    return {{"family", "laplacian"}, {"mean", mean_}, {"scale", scale_}};
  }

 private:
  double mean_;
  double scale_;
};

class ExponentialModel final : public DensityModel {
 public:
  ExponentialModel(double rate, double shift) : rate_(rate), shift_(shift) {
    require(rate > 0.0 && std::isfinite(rate) && std::isfinite(shift),
            "exponential: need rate > 0 and finite shift");
  }
  std::string family() const override { return "exponential"; }
  Interval support() const override { return {shift_, kInf}; }
  double pdf(double x) const override {
    return x < shift_ ? 0.0 : rate_ * std::exp(-rate_ * (x - shift_));
  }
  double log_pdf(double x) const override {
    return x < shift_ ? -kInf : std::log(rate_) - rate_ * (x - shift_);
  }
  double cdf(double x) const override {
    return x <= shift_ ? 0.0 : -std::expm1(-rate_ * (x - shift_));
  }
  double ccdf(double x) const override {
    return x <= shift_ ? 1.0 : std::exp(-rate_ * (x - shift_));
  }
  double quantile(double p) const override {
    return shift_ - std::log1p(-p) / rate_;
  }
  double upper_quantile(double q) const override {
    return shift_ - std::log(q) / rate_;
  }
  std::vector<double> kinks() const override { return {shift_}; }
  std::optional<double> mode() const override { return shift_; }
  std::optional<double> closed_power_integral(double beta) const override {
    return std::pow(rate_, beta - 1.0) / beta;
  }
  std::optional<Density> closed_tilt(double beta) const override {
    return exponential(rate_ * beta, shift_);
  }
  std::optional<Density> closed_affine(double s, double c) const override {
    return exponential(rate_ / s, s * shift_ + c);
  }
  nlohmann::json to_json() const override {
    return {{"family", "exponential"}, {"rate", rate_}, {"shift", shift_}};
  }

 private:
  double rate_;
  double shift_;
};

class PiecewiseLinearModel final : public DensityModel {
 public:
  explicit PiecewiseLinearModel(std::vector<std::pair<double, double>> knots)
      : knots_(std::move(knots)) {
    require(knots_.size() >= 2, "piecewise_linear: need at least two knots");
    for (std::size_t i = 0; i < knots_.size(); ++i) {
      require(std::isfinite(knots_[i].first) && knots_[i].second >= 0.0 &&
                  std::isfinite(knots_[i].second),
              "piecewise_linear: knots must be finite with y >= 0");
      if (i > 0) {
        require(knots_[i].first >= knots_[i - 1].first,
                "piecewise_linear: knot x must be nondecreasing");
      }
    }
    require(knots_.back().first > knots_.front().first,
            "piecewise_linear: knots must span a positive length");
    cumulative_.assign(knots_.size(), 0.0);
    for (std::size_t i = 1; i < knots_.size(); ++i) {
      cumulative_[i] = cumulative_[i - 1] + segment_area(i - 1, knots_[i].first);
    }
    total_ = cumulative_.back();
    require(total_ > 0.0, "piecewise_linear: shape has zero area");
  }
  std::string family() const override { return "piecewise_linear"; }
  Interval support() const override {
    return {knots_.front().first, knots_.back().first};
  }
  double pdf(double x) const override {
    if (x < knots_.front().first || x > knots_.back().first) return 0.0;
    const std::size_t i = segment(x);
    if (i + 1 >= knots_.size()) return knots_.back().second / total_;
    const auto [x0, y0] = knots_[i];
    const auto [x1, y1] = knots_[i + 1];
    if (x1 == x0) return y1 / total_;
    return (y0 + (y1 - y0) * (x - x0) / (x1 - x0)) / total_;
  }
  double cdf(double x) const override {
    if (x <= knots_.front().first) return 0.0;
    if (x >= knots_.back().first) return 1.0;
    const std::size_t i = segment(x);
    return std::min(1.0, (cumulative_[i] + segment_area(i, x)) / total_);
  }
  std::vector<double> kinks() const override {
    std::vector<double> out;
    for (const auto& k : knots_) out.push_back(k.first);
    return out;
  }
  std::optional<double> mode() const override {
    const auto it = std::max_element(
        knots_.begin(), knots_.end(),
        [](const auto& a, const auto& b) { return a.second < b.second; });
    return it->first;
  }
  std::optional<Density> closed_affine(double s, double c) const override {
    auto moved = knots_;
    for (auto& k : moved) k.first = s * k.first + c;
    return piecewise_linear(std::move(moved));
  }
  nlohmann::json to_json() const override {
    nlohmann::json k = nlohmann::json::array();
    for (const auto& [x, y] : knots_) k.push_back({x, y / total_});
    return {{"family", "piecewise_linear"}, {"knots", k}};
  }

 protected:
  Interval search_window() const override { return support(); }

 private:
  // Index of the segment [x_i, x_{i+1}] containing x (last one for ties).
  std::size_t segment(double x) const {
    const auto it = std::upper_bound(
        knots_.begin(), knots_.end(), x,
        [](double v, const auto& k) { return v < k.first; });
    return static_cast<std::size_t>(std::distance(knots_.begin(), it)) - 1;
  }
  // Unnormalized area of segment i between x_i and x.
  double segment_area(std::size_t i, double x) const {
    const auto [x0, y0] = knots_[i];
    const auto [x1, y1] = knots_[i + 1];
    if (x1 == x0) return 0.0;
    const double dx = x - x0;
    return y0 * dx + 0.5 * (y1 - y0) / (x1 - x0) * dx * dx;
  }

  std::vector<std::pair<double, double>> knots_;
  std::vector<double> cumulative_;
  double total_ = 0.0;
};

class MixtureModel final : public DensityModel {
 public:
  explicit MixtureModel(std::vector<std::pair<double, Density>> components)
      : components_(std::move(components)) {
    require(!components_.empty(), "mixture: need at least one component");
    double total = 0.0;
    for (const auto& [w, d] : components_) {
      require(w > 0.0 && std::isfinite(w), "mixture: weights must be positive");
      total += w;
    }
    for (auto& c : components_) c.first /= total;
  }
  std::string family() const override { return "mixture"; }
  Interval support() const override {
    Interval s = components_.front().second.support();
    for (const auto& c : components_) s = hull(s, c.second.support());
    return s;
  }
  double pdf(double x) const override {
    double sum = 0.0;
    for (const auto& [w, d] : components_) sum += w * d.pdf(x);
    return sum;
  }
  double cdf(double x) const override {
    double sum = 0.0;
    for (const auto& [w, d] : components_) sum += w * d.cdf(x);
    return std::min(1.0, sum);
  }
  double ccdf(double x) const override {
    double sum = 0.0;
    for (const auto& [w, d] : components_) sum += w * d.ccdf(x);
    return std::min(1.0, sum);
  }
  std::vector<double> kinks() const override {
    std::vector<double> out;
    for (const auto& c : components_) {
      const auto k = c.second.kinks();
      out.insert(out.end(), k.begin(), k.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
  std::optional<Density> closed_affine(double s, double c) const override {
    std::vector<std::pair<double, Density>> moved;
    for (const auto& [w, d] : components_) moved.emplace_back(w, affine(d, s, c));
    return mixture(std::move(moved));
  }
  nlohmann::json to_json() const override {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& [w, d] : components_) {
      comps.push_back({{"weight", w}, {"density", d.to_json()}});
    }
    return {{"family", "mixture"}, {"components", comps}};
  }

 protected:
  Interval search_window() const override {
    Interval w = components_.front().second.core();
    for (const auto& c : components_) w = hull(w, c.second.core());
    return w;
  }

 private:
  std::vector<std::pair<double, Density>> components_;
};

class RestrictedModel final : public DensityModel {
 public:
  RestrictedModel(Density base, Interval i) : base_(std::move(base)), i_(i) {
    mass_ = base_.mass(i_);
    if (!(mass_ > 0.0)) {
      throw EmptyConditioningError("restrict: interval has zero probability");
    }
    lower_mass_ = std::isfinite(i_.lo) ? base_.cdf(i_.lo) : 0.0;
    upper_mass_ = std::isfinite(i_.hi) ? base_.ccdf(i_.hi) : 0.0;
  }
  std::string family() const override { return "restricted"; }
  Interval support() const override { return intersect(base_.support(), i_); }
  double pdf(double x) const override {
    return i_.contains(x) ? base_.pdf(x) / mass_ : 0.0;
  }
  double log_pdf(double x) const override {
    return i_.contains(x) ? base_.log_pdf(x) - std::log(mass_) : -kInf;
  }
  double cdf(double x) const override {
    if (x <= i_.lo) return 0.0;
    if (x >= i_.hi) return 1.0;
    return std::min(1.0, base_.mass({i_.lo, x}) / mass_);
  }
  double ccdf(double x) const override {
    if (x <= i_.lo) return 1.0;
    if (x >= i_.hi) return 0.0;
    return std::min(1.0, base_.mass({x, i_.hi}) / mass_);
  }
  double quantile(double p) const override {
    return locate(lower_mass_ + p * mass_, upper_mass_ + (1.0 - p) * mass_);
  }
  double upper_quantile(double q) const override {
    return locate(lower_mass_ + (1.0 - q) * mass_, upper_mass_ + q * mass_);
  }
  std::vector<double> kinks() const override {
    std::vector<double> out;
    for (double k : base_.kinks()) {
      if (k > i_.lo && k < i_.hi) out.push_back(k);
    }
    if (std::isfinite(i_.lo)) out.push_back(i_.lo);
    if (std::isfinite(i_.hi)) out.push_back(i_.hi);
    std::sort(out.begin(), out.end());
    return out;
  }
  std::optional<double> mode() const override {
    const auto m = base_.model().mode();
    if (!m) return std::nullopt;
    const Interval s = support();
    return std::clamp(*m, s.lo, s.hi);
  }
  std::optional<double> closed_power_integral(double beta) const override {
    const auto p = base_.model().closed_power_integral(beta);
    const auto t = base_.model().closed_tilt(beta);
    if (!p || !t) return std::nullopt;
    return *p * t->mass(i_) / std::pow(mass_, beta);
  }
  std::optional<Density> closed_tilt(double beta) const override {
    const auto t = base_.model().closed_tilt(beta);
    if (!t) return std::nullopt;
    return restrict(*t, i_);
  }
  std::optional<Density> closed_affine(double s, double c) const override {
    return restrict(affine(base_, s, c), {s * i_.lo + c, s * i_.hi + c});
  }
  nlohmann::json to_json() const override {
    return {{"family", "restricted"},
            {"base", base_.to_json()},
            {"lo", endpoint_json(i_.lo)},
            {"hi", endpoint_json(i_.hi)}};
  }

 private:
  // Base-distribution point with lower mass `below` (equivalently upper mass
  // `above`); picks whichever tail keeps full relative precision.
  double locate(double below, double above) const {
    const Interval s = support();
    double x;
    if (below <= 0.5) {
      x = below <= 0.0 ? s.lo : base_.quantile(std::min(below, 1.0 - 1e-16));
    } else {
      x = above <= 0.0 ? s.hi : base_.upper_quantile(std::min(above, 0.5));
    }
    return std::clamp(x, s.lo, s.hi);
  }

  Density base_;
  Interval i_;
  double mass_ = 0.0;
  double lower_mass_ = 0.0;
  double upper_mass_ = 0.0;
};

// g^beta / Z for bases without a closed-form tilt. The cdf is tabulated on
// a fixed partition of the effective domain and refined by quadrature.
class TiltedModel final : public DensityModel {
 public:
  TiltedModel(Density base, double beta) : base_(std::move(base)), beta_(beta) {
    require(beta > 0.0 && std::isfinite(beta), "tilt: need beta > 0");
    const auto kinks = base_.kinks();
    const QuadratureOptions opts{1e-11, 1e-300, 1'000'000};
    auto shape = [this](double x) { return unnormalized(x); };
    domain_ = effective_domain(shape, base_.support(), base_.core(), opts);
    log_norm_ = std::log(
        integrate(shape, domain_, kinks, opts).value);

    constexpr int kPieces = 256;
    edges_.clear();
    for (int k = 0; k <= kPieces; ++k) {
      edges_.push_back(domain_.lo + domain_.length() * k / kPieces);
    }
    edges_.back() = domain_.hi;
    cumulative_.assign(edges_.size(), 0.0);
    for (std::size_t k = 1; k < edges_.size(); ++k) {
      cumulative_[k] =
          cumulative_[k - 1] + piece_integral(edges_[k - 1], edges_[k]);
    }
  }
  std::string family() const override { return "tilted"; }
  Interval support() const override { return base_.support(); }
  double pdf(double x) const override { return std::exp(log_pdf(x)); }
  double log_pdf(double x) const override {
    const double lp = base_.log_pdf(x);
    return lp == -kInf ? -kInf : beta_ * lp - log_norm_;
  }
  double cdf(double x) const override {
    if (x <= domain_.lo) return 0.0;
    if (x >= domain_.hi) return 1.0;
    const auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
    const std::size_t k =
        static_cast<std::size_t>(std::distance(edges_.begin(), it)) - 1;
    return std::clamp(cumulative_[k] + piece_integral(edges_[k], x), 0.0, 1.0);
  }
  double ccdf(double x) const override {
    if (x <= domain_.lo) return 1.0;
    if (x >= domain_.hi) return 0.0;
    const auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
    const std::size_t k =
        static_cast<std::size_t>(std::distance(edges_.begin(), it)) - 1;
    const double above = (cumulative_.back() - cumulative_[k + 1]) +
                         piece_integral(x, edges_[k + 1]);
    return std::clamp(above, 0.0, 1.0);
  }
  std::vector<double> kinks() const override { return base_.kinks(); }
  std::optional<double> mode() const override { return base_.model().mode(); }
  std::optional<double> closed_power_integral(double gamma) const override {
    const auto p = base_.model().closed_power_integral(beta_ * gamma);
    if (!p) return std::nullopt;
    return *p * std::exp(-gamma * log_norm_);
  }
  std::optional<Density> closed_tilt(double gamma) const override {
    return tilt(base_, beta_ * gamma);
  }
  nlohmann::json to_json() const override {
    return {{"family", "tilted"}, {"base", base_.to_json()}, {"beta", beta_}};
  }

 protected:
  Interval search_window() const override { return domain_; }

 private:
  double unnormalized(double x) const {
    const double lp = base_.log_pdf(x);
    return lp == -kInf ? 0.0 : std::exp(beta_ * lp);
  }
  double piece_integral(double a, double b) const {
    if (!(b > a)) return 0.0;
    const QuadratureOptions opts{1e-11, 1e-300, 1'000'000};
    const auto kinks = base_.kinks();
    return integrate([this](double x) { return pdf(x); }, {a, b}, kinks, opts)
        .value;
  }

  Density base_;
  double beta_;
  Interval domain_;
  double log_norm_ = 0.0;
  std::vector<double> edges_;
  std::vector<double> cumulative_;
};

class AffineModel final : public DensityModel {
 public:
  AffineModel(Density base, double scale, double shift)
      : base_(std::move(base)), scale_(scale), shift_(shift) {}
  std::string family() const override { return "affine"; }
  Interval support() const override {
    const Interval s = base_.support();
    return {scale_ * s.lo + shift_, scale_ * s.hi + shift_};
  }
  double pdf(double x) const override {
    return base_.pdf(to_base(x)) / scale_;
  }
  double log_pdf(double x) const override {
    return base_.log_pdf(to_base(x)) - std::log(scale_);
  }
  double cdf(double x) const override { return base_.cdf(to_base(x)); }
  double ccdf(double x) const override { return base_.ccdf(to_base(x)); }
  double quantile(double p) const override {
    return scale_ * base_.quantile(p) + shift_;
  }
  double upper_quantile(double q) const override {
    return scale_ * base_.upper_quantile(q) + shift_;
  }
  std::vector<double> kinks() const override {
    auto k = base_.kinks();
    for (double& x : k) x = scale_ * x + shift_;
    return k;
  }
  std::optional<double> mode() const override {
    const auto m = base_.model().mode();
    if (!m) return std::nullopt;
    return scale_ * *m + shift_;
  }
  std::optional<double> closed_power_integral(double beta) const override {
    const auto p = base_.model().closed_power_integral(beta);
    if (!p) return std::nullopt;
    return std::pow(scale_, 1.0 - beta) * *p;
  }
  std::optional<Density> closed_affine(double s, double c) const override {
    return affine(base_, s * scale_, s * shift_ + c);
  }
  nlohmann::json to_json() const override {
    return {{"family", "affine"},
            {"base", base_.to_json()},
            {"scale", scale_},
            {"shift", shift_}};
  }

 private:
  double to_base(double x) const { return (x - shift_) / scale_; }

  Density base_;
  double scale_;
  double shift_;
};

}  // namespace

// --- DensityModel defaults --------------------------------------------------

double DensityModel::log_pdf(double x) const {
  const double p = pdf(x);
  return p > 0.0 ? std::log(p) : -kInf;
}

Interval DensityModel::search_window() const {
  const Interval s = support();
  double lo = std::isfinite(s.lo) ? s.lo : (std::isfinite(s.hi) ? s.hi : 0.0) - 1.0;
  double hi = std::isfinite(s.hi) ? s.hi : (std::isfinite(s.lo) ? s.lo : 0.0) + 1.0;
  double width = hi - lo;
  while (!std::isfinite(s.lo) && cdf(lo) > 1e-300 && width < 1e300) {
    lo -= width;
    width *= 2.0;
  }
  width = hi - lo;
  while (!std::isfinite(s.hi) && ccdf(hi) > 1e-300 && width < 1e300) {
    hi += width;
    width *= 2.0;
  }
  return {lo, hi};
}

double DensityModel::quantile(double p) const {
  return bisect_first(search_window(), [&](double x) { return cdf(x) >= p; });
}

double DensityModel::upper_quantile(double q) const {
  return bisect_first(search_window(), [&](double x) { return ccdf(x) <= q; });
}

// --- Density ----------------------------------------------------------------

Density::Density(std::shared_ptr<const DensityModel> model)
    : model_(std::move(model)) {
  core_ = truncate_support(*this, kTailMass);
  const auto k = kinks();
  const QuadratureOptions opts{1e-10, 1e-14, 1'000'000};
  const double total =
      integrate_on_support([this](double x) { return pdf(x); }, support(),
                           core_, k, opts)
          .value;
  if (std::abs(total - 1.0) > 1e-8) {
    std::ostringstream msg;
    msg << model_->family() << ": density integrates to " << total
        << " instead of 1";
    throw DomainError(msg.str());
  }
}

std::string Density::family() const { return model_->family(); }
Interval Density::support() const { return model_->support(); }
double Density::pdf(double x) const { return model_->pdf(x); }
double Density::log_pdf(double x) const { return model_->log_pdf(x); }
double Density::cdf(double x) const { return model_->cdf(x); }
double Density::ccdf(double x) const { return model_->ccdf(x); }

double Density::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("quantile: probability must lie in (0, 1)");
  }
  return model_->quantile(p);
}

double Density::upper_quantile(double q) const {
  if (!(q > 0.0 && q < 1.0)) {
    throw DomainError("upper_quantile: tail mass must lie in (0, 1)");
  }
  return model_->upper_quantile(q);
}

double Density::mass(const Interval& i) const {
  const Interval s = intersect(i, {-kInf, kInf});
  if (!(s.lo < s.hi)) return 0.0;
  const double below = std::isfinite(s.lo) ? cdf(s.lo) : 0.0;
  if (below > 0.5) {
    const double above_hi = std::isfinite(s.hi) ? ccdf(s.hi) : 0.0;
    return std::max(0.0, ccdf(s.lo) - above_hi);
  }
  const double upto_hi = std::isfinite(s.hi) ? cdf(s.hi) : 1.0;
  return std::max(0.0, upto_hi - below);
}

double Density::mass(const Region& region) const {
  double total = 0.0;
  for (const auto& i : region) total += mass(i);
  return total;
}

std::vector<double> Density::kinks() const {
  auto k = model_->kinks();
  const Interval s = support();
  if (std::isfinite(s.lo)) k.push_back(s.lo);
  if (std::isfinite(s.hi)) k.push_back(s.hi);
  std::sort(k.begin(), k.end());
  k.erase(std::unique(k.begin(), k.end()), k.end());
  return k;
}

double Density::mode() const {
  if (const auto m = model_->mode()) return *m;
  constexpr int kGrid = 4096;
  double best_x = core_.lo;
  double best = -1.0;
  for (int i = 0; i <= kGrid; ++i) {
    const double x = core_.lo + core_.length() * i / kGrid;
    const double v = pdf(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  return best_x;
}

nlohmann::json Density::to_json() const { return model_->to_json(); }

// --- Factories --------------------------------------------------------------

Density uniform(double a, double b) {
  return Density(std::make_shared<UniformModel>(a, b));
}
Density gaussian(double mean, double sigma) {
  return Density(std::make_shared<GaussianModel>(mean, sigma));
}
Density laplacian(double mean, double scale) {
  return Density(std::make_shared<LaplacianModel>(mean, scale));
}
Density exponential(double rate, double shift) {
  return Density(std::make_shared<ExponentialModel>(rate, shift));
}
Density piecewise_linear(std::vector<std::pair<double, double>> knots) {
  return Density(std::make_shared<PiecewiseLinearModel>(std::move(knots)));
}
Density mixture(std::vector<std::pair<double, Density>> components) {
  return Density(std::make_shared<MixtureModel>(std::move(components)));
}

Density affine(const Density& d, double scale, double shift) {
  require(scale > 0.0 && std::isfinite(scale) && std::isfinite(shift),
          "affine: need scale > 0 and finite shift");
  if (auto closed = d.model().closed_affine(scale, shift)) return *closed;
  return Density(std::make_shared<AffineModel>(d, scale, shift));
}

Density tilt(const Density& d, double beta) {
  require(beta > 0.0 && std::isfinite(beta), "tilt: need beta > 0");
  if (beta == 1.0) return d;
  if (auto closed = d.model().closed_tilt(beta)) return *closed;
  return Density(std::make_shared<TiltedModel>(d, beta));
}

Density restrict(const Density& d, const Interval& i) {
  if (!(i.lo < i.hi)) {
    throw EmptyConditioningError("restrict: interval is empty");
  }
  return Density(std::make_shared<RestrictedModel>(d, i));
}

// --- Functionals ------------------------------------------------------------

double power_integral(const Density& d, double beta) {
  require(beta > 0.0 && std::isfinite(beta), "power_integral: need beta > 0");
  if (const auto closed = d.model().closed_power_integral(beta)) return *closed;
  const QuadratureOptions opts{1e-11, 1e-300, 1'000'000};
  const auto k = d.kinks();
  return integrate_on_support(
             [&](double x) {
               const double lp = d.log_pdf(x);
               return lp == -kInf ? 0.0 : std::exp(beta * lp);
             },
             d.support(), d.core(), k, opts)
      .value;
}

double renyi_differential_entropy(const Density& d, double beta) {
  require(beta > 0.0 && std::isfinite(beta),
          "renyi_differential_entropy: need beta > 0");
  if (beta == 1.0) {
    const QuadratureOptions opts{1e-11, 1e-300, 1'000'000};
    const auto k = d.kinks();
    return -integrate_on_support(
                [&](double x) {
                  const double lp = d.log_pdf(x);
                  return lp == -kInf ? 0.0 : std::exp(lp) * lp;
                },
                d.support(), d.core(), k, opts)
                .value;
  }
  return std::log(power_integral(d, beta)) / (1.0 - beta);
}

double absolute_moment(const Density& d, double r) {
  require(r >= 1.0 && std::isfinite(r), "absolute_moment: need r >= 1");
  const QuadratureOptions opts{1e-11, 1e-300, 1'000'000};
  auto k = d.kinks();
  k.push_back(0.0);
  std::sort(k.begin(), k.end());
  return integrate_on_support(
             [&](double x) {
               const double lp = d.log_pdf(x);
               return lp == -kInf ? 0.0 : std::pow(std::abs(x), r) * std::exp(lp);
             },
             d.support(), d.core(), k, opts)
      .value;
}

WeakUnimodalityReport check_weak_unimodality(const Density& d,
                                             int level_grid_size) {
  require(level_grid_size > 0, "check_weak_unimodality: need a positive grid");
  constexpr int kGrid = 20001;
  const Interval w = d.core();
  std::vector<double> values(kGrid);
  for (int i = 0; i < kGrid; ++i) {
    values[i] = d.pdf(w.lo + w.length() * i / (kGrid - 1));
  }
  WeakUnimodalityReport report;
  report.max_pdf = *std::max_element(values.begin(), values.end());
  for (int j = 1; j <= level_grid_size; ++j) {
    const double level =
        report.max_pdf * std::pow(10.0, -8.0 * j / level_grid_size);
    int first = -1;
    int last = -1;
    int count = 0;
    for (int i = 0; i < kGrid; ++i) {
      if (values[i] >= level) {
        if (first < 0) first = i;
        last = i;
        ++count;
      }
    }
    if (count > 0 && last - first + 1 != count) {
      report.passed = false;
      report.failing_level = level;
      break;
    }
  }
  return report;
}

}  // namespace renyiq
