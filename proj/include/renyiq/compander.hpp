#pragma once

#include "renyiq/density.hpp"
#include "renyiq/quantizer.hpp"

namespace renyiq {

/// Companding profile h: a density whose quantiles place the cells.
class PointDensity {
 public:
  explicit PointDensity(Density h) : h_(std::move(h)) {}
  const Density& density() const { return h_; }

 private:
  Density h_;
};

/// g^{1/β₂} / ∫ g^{1/β₂}; at alpha = 0 the fixed-rate profile g^{1/(1+r)}.
PointDensity optimal_point_density(const Density& d, double alpha, double r);

/// Breakpoints at the k/n quantiles of h, codepoints at the (2k-1)/(2n)
/// quantiles. Requires n >= 2.
Quantizer build_compander(const PointDensity& h, std::size_t n);

/// Replaces each codepoint by the minimizer of ∫_{cell} |x-c|^r dμ. Throws
/// DegenerateCellError if a cell has zero probability.
Quantizer refine_codepoints(const Quantizer& q, const Density& d, double r);

}  // namespace renyiq
