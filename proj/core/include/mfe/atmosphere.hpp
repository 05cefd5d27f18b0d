#pragma once

namespace mfe {

inline constexpr double kRhoSeaLevel = 1.225;  // kg/m^3
inline constexpr double kIsaCeiling = 20000.0; // modeled range top [m]

// Standard-atmosphere density: linear-temperature troposphere up to 11 km,
// isothermal layer from 11 km to 20 km.  Throws std::domain_error outside
// [0, 20000] m.
double isa_density(double h_m);

}  // namespace mfe
