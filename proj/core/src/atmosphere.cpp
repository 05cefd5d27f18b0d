#include "mfe/atmosphere.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mfe {

namespace {
constexpr double kT0 = 288.15;        // sea-level temperature [K]
constexpr double kLapse = 0.0065;     // tropospheric lapse rate [K/m]
constexpr double kGasR = 287.05287;   // specific gas constant for air [J/(kg K)]
constexpr double kG0 = 9.80665;       // [m/s^2]
constexpr double kTropopause = 11000.0;
}  // namespace

double isa_density(double h_m) {
  if (!(h_m >= 0.0) || h_m > kIsaCeiling) {
    throw std::domain_error("isa_density: altitude " + std::to_string(h_m) +
                            " m outside modeled range [0, 20000] m");
  }
  const double n = kG0 / (kGasR * kLapse);
  if (h_m <= kTropopause) {
    const double t_ratio = 1.0 - kLapse * h_m / kT0;
    return kRhoSeaLevel * std::pow(t_ratio, n - 1.0);
  }
  // Isothermal layer above the tropopause.
  const double t11 = kT0 - kLapse * kTropopause;
  const double rho11 = kRhoSeaLevel * std::pow(t11 / kT0, n - 1.0);
  return rho11 * std::exp(-kG0 * (h_m - kTropopause) / (kGasR * t11));
}

}  // namespace mfe
