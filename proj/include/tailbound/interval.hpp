#pragma once

#include <cmath>

namespace tailbound {

/// Real interval; endpoints may be +-infinity.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const { return v >= lo && v <= hi; }
  double width() const { return hi - lo; }
  bool finite() const { return std::isfinite(lo) && std::isfinite(hi); }
};

}  // namespace tailbound
