#pragma once

#include <cmath>
#include <numbers>

namespace sifdecay {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kThreePi = 3.0 * std::numbers::pi;
inline constexpr double kE = std::numbers::e;

// Reduce an angle to (-pi, pi].  std::remainder is exactly rounded, so inputs
// already in (-pi, pi] come back unchanged; only the -pi endpoint needs a
// fixup.  No unwrapping is ever attempted.
inline double reduce_angle(double x) {
  double y = std::remainder(x, kTwoPi);
  if (y <= -kPi) y = kPi;
  return y;
}

// Reduce an angle to [0, 2*pi).
inline double reduce_nonneg(double x) {
  double y = std::remainder(x, kTwoPi);
  if (y < 0.0) y += kTwoPi;
  if (y >= kTwoPi) y = 0.0;
  return y;
}

// Circular distance between two angles, in [0, pi].
inline double circular_gap(double a, double b) {
  return std::fabs(reduce_angle(a - b));
}

}  // namespace sifdecay
