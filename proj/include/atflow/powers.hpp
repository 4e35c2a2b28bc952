#pragma once

#include <cmath>

namespace atflow::detail {

/// pow(base, e) for base >= 0 with fast paths for the exponents the energy
/// actually produces (p, p-1, p/2, (p-2)/2 for p = 3, 4, ...). The hot loops
/// spend most of their time here.
inline double pow_pos(double base, double e) {
  if (e == 1.0) return base;
  if (e == 2.0) return base * base;
  if (e == 3.0) return base * base * base;
  if (e == 4.0) {
    const double b2 = base * base;
    return b2 * b2;
  }
  if (e == 0.5) return std::sqrt(base);
  if (e == 1.5) return base * std::sqrt(base);
  if (e == 2.5) return base * base * std::sqrt(base);
  return std::pow(base, e);
}

}  // namespace atflow::detail
