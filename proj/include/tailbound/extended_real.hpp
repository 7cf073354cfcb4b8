#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tailbound {

/// Tri-state extended real: a finite value, +infinity (a divergent
/// integral or an MGF outside its domain), or not-computed (quadrature
/// missed its error target). Deliberately not a bare double so that the
/// three states stay distinguishable in reports and tests.
class ExtReal {
 public:
  enum class Kind { finite, pos_inf, not_computed };

  ExtReal() = default;

  static ExtReal finite(double v) { return ExtReal(Kind::finite, v); }
  static ExtReal infinity() { return ExtReal(Kind::pos_inf, 0.0); }
  static ExtReal not_computed() { return ExtReal(Kind::not_computed, 0.0); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::finite; }
  bool is_infinite() const { return kind_ == Kind::pos_inf; }
  bool is_not_computed() const { return kind_ == Kind::not_computed; }

  /// Finite payload; throws if the state is not finite.
  double value() const {
    if (kind_ != Kind::finite) {
      throw std::logic_error("ExtReal::value() on a non-finite state");
    }
    return value_;
  }

  /// Lossy view for ordering logic: finite value, +inf, or NaN.
  double as_double() const {
    switch (kind_) {
      case Kind::finite:
        return value_;
      case Kind::pos_inf:
        return std::numeric_limits<double>::infinity();
      default:
        return std::numeric_limits<double>::quiet_NaN();
    }
  }

 private:
  ExtReal(Kind k, double v) : kind_(k), value_(v) {}

  Kind kind_ = Kind::not_computed;
  double value_ = 0.0;
};

/// a <= b + slack in the extended sense. +inf on the right absorbs
/// everything; a not-computed operand makes the comparison fail.
inline bool ext_leq(const ExtReal& a, const ExtReal& b, double slack = 0.0) {
  if (a.is_not_computed() || b.is_not_computed()) return false;
  if (b.is_infinite()) return true;
  if (a.is_infinite()) return false;
  return a.value() <= b.value() + slack;
}

}  // namespace tailbound
