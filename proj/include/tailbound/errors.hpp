#pragma once

#include <stdexcept>
#include <string>

namespace tailbound {

/// Adaptive quadrature exhausted its subdivision budget with the error
/// estimate still above tolerance.
class NonConvergentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pr[Z > 0] is numerically zero; the positive restriction does not exist.
class ZeroMassError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The operational ratio's denominator f(x+z) vanished: z lies outside the
/// region where the bound is defined.
class DenominatorZeroError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A series/SAM operation needs analytic derivatives the shift function
/// does not provide.
class MissingDerivativeOracleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The objective was +infinity at every seed-grid point.
class NoFiniteValueError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Sequence inequality input contained a non-positive entry.
class NonPositiveEntryError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Sequence inequality inputs differ in length.
class LengthMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace tailbound
