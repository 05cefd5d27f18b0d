#pragma once

#include <numbers>

// All core APIs work in SI units and radians.  Conversions to the external
// conventions (knots, feet, degrees, deg/s) happen only at file and CLI
// boundaries.

namespace mfe {

inline constexpr double kKnotToMps = 0.514444;   // 1 kt in m/s
inline constexpr double kFootToM = 0.3048;       // 1 ft in m
inline constexpr double kGravity = 9.80665;      // m/s^2

inline constexpr double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

inline constexpr double kt2mps(double kt) { return kt * kKnotToMps; }
inline constexpr double mps2kt(double mps) { return mps / kKnotToMps; }
inline constexpr double ft2m(double ft) { return ft * kFootToM; }
inline constexpr double m2ft(double m) { return m / kFootToM; }

}  // namespace mfe
