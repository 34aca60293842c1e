#pragma once

#include <numbers>

// Everything inside the library runs in angular frequency, rad/ns, so that
// exp(-i H t) takes t in nanoseconds. Conversions happen at the edges only.
namespace stray::units {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline constexpr double ghz(double f) { return two_pi * f; }
inline constexpr double mhz(double f) { return two_pi * f * 1e-3; }

inline constexpr double to_ghz(double w) { return w / two_pi; }
inline constexpr double to_mhz(double w) { return w / two_pi * 1e3; }
inline constexpr double to_khz(double w) { return w / two_pi * 1e6; }

}  // namespace stray::units
