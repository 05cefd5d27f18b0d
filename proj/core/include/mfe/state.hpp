#pragma once

#include <array>
#include <cstddef>

namespace mfe {

// Trim state: airspeed + aerodynamic angles + body rates + attitude.
// Heading is irrelevant for steady turns and altitude enters as a frozen
// parameter, so the dynamic state has eight components.
struct AircraftState {
  double V = 0.0;      // true airspeed [m/s]
  double alpha = 0.0;  // angle of attack [rad]
  double beta = 0.0;   // sideslip [rad]
  double p = 0.0;      // body roll rate [rad/s]
  double q = 0.0;      // body pitch rate [rad/s]
  double r = 0.0;      // body yaw rate [rad/s]
  double phi = 0.0;    // bank [rad]
  double theta = 0.0;  // pitch attitude [rad]
  double h = 0.0;      // altitude [m], frozen parameter of the 8-state model
};

struct Controls {
  double throttle = 0.0;  // unitless, nominal window [0, 1]
  double elevator = 0.0;  // [rad], positive trailing edge down
  double aileron = 0.0;   // [rad], positive = left wing trailing edge up (rolls left)
  double rudder = 0.0;    // [rad], positive trailing edge left (yaws left)
};

// Time derivative of the state vector in the order
// [Vdot, alphadot, betadot, pdot, qdot, rdot, phidot, thetadot].
using StateDeriv = std::array<double, 8>;

enum StateIndex : std::size_t {
  kIdxV = 0,
  kIdxAlpha,
  kIdxBeta,
  kIdxP,
  kIdxQ,
  kIdxR,
  kIdxPhi,
  kIdxTheta,
};

inline std::array<double, 8> to_array(const AircraftState& x) {
  return {x.V, x.alpha, x.beta, x.p, x.q, x.r, x.phi, x.theta};
}

inline AircraftState from_array(const std::array<double, 8>& a, double h) {
  AircraftState x;
  x.V = a[kIdxV];
  x.alpha = a[kIdxAlpha];
  x.beta = a[kIdxBeta];
  x.p = a[kIdxP];
  x.q = a[kIdxQ];
  x.r = a[kIdxR];
  x.phi = a[kIdxPhi];
  x.theta = a[kIdxTheta];
  x.h = h;
  return x;
}

}  // namespace mfe
