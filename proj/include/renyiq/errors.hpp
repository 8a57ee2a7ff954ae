#pragma once

#include <stdexcept>
#include <string>

namespace renyiq {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Adaptive quadrature exhausted its subdivision budget.
class NonConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An integral (power integral, moment, divergence) is not finite.
class DivergentIntegralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Conditioning on a set of probability zero.
class EmptyConditioningError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A quantizer cell with zero probability where a positive one is required.
class DegenerateCellError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A theorem hypothesis (weak unimodality, moment condition, bounded ratio)
/// failed for an experiment input.
class HypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed experiment configuration. The message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace renyiq
