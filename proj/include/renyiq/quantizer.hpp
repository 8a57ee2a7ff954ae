#pragma once

#include <cstddef>
#include <vector>

#include "json.hpp"
#include "renyiq/density.hpp"
#include "renyiq/interval.hpp"

namespace renyiq {

/// Nonnegative entries summing to one within 1e-9.
class ProbabilityVector {
 public:
  explicit ProbabilityVector(std::vector<double> entries);

  const std::vector<double>& entries() const { return p_; }
  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }

 private:
  std::vector<double> p_;
};

/// Rényi entropy of order alpha in [0,1], nats. alpha <= 1e-6 is the Hartley
/// entropy, |alpha-1| <= 1e-6 the Shannon entropy.
double renyi_entropy_vec(const ProbabilityVector& p, double alpha);

/// Interval partition (-inf,b_1], (b_1,b_2], ..., (b_{m-1},inf) with one
/// codepoint strictly inside each cell.
class Quantizer {
 public:
  Quantizer(std::vector<double> breakpoints, std::vector<double> codepoints);

  std::size_t size() const { return codepoints_.size(); }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& codepoints() const { return codepoints_; }

  Interval cell(std::size_t k) const;
  /// Index of the cell containing x; a breakpoint belongs to the cell on its
  /// left.
  std::size_t cell_index(double x) const;
  double quantize(double x) const { return codepoints_[cell_index(x)]; }

  nlohmann::json to_json() const;
  static Quantizer from_json(const nlohmann::json& j);

 private:
  std::vector<double> breakpoints_;
  std::vector<double> codepoints_;
};

ProbabilityVector cell_probabilities(const Quantizer& q, const Density& d);
double quantizer_entropy(const Quantizer& q, const Density& d, double alpha);

/// ∫_{cell k} |x - c_k|^r dμ, integrating the true tail for unbounded cells.
double cell_distortion(const Quantizer& q, const Density& d, std::size_t k,
                       double r);
/// Same, restricted to cell k ∩ I.
double cell_distortion(const Quantizer& q, const Density& d, std::size_t k,
                       double r, const Interval& i);

double distortion(const Quantizer& q, const Density& d, double r);
/// ∫_I |x - q(x)|^r dμ (unnormalized).
double partial_distortion(const Quantizer& q, const Density& d, double r,
                          const Interval& i);
double partial_distortion(const Quantizer& q, const Density& d, double r,
                          const Region& region);

struct RestrictedMetrics {
  double entropy_restricted = 0.0;
  double distortion_restricted = 0.0;
  double entropy_power_sum = 0.0;
  double restricted_power_sum = 0.0;
};

/// Entropy and distortion of q under μ(·|A). Throws EmptyConditioningError
/// when μ(A) = 0.
RestrictedMetrics restricted_metrics(const Quantizer& q, const Density& d,
                                     const Interval& i, double alpha, double r);
RestrictedMetrics restricted_metrics(const Quantizer& q, const Density& d,
                                     const Region& region, double alpha,
                                     double r);

std::size_t codepoint_count_in(const Quantizer& q, const Interval& i);

}  // namespace renyiq
