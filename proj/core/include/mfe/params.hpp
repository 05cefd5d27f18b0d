#pragma once

#include <string>

namespace mfe {

// Static and control derivative set for the coefficient buildup.  Rate
// derivatives are per nondimensional rate (p*b/2V etc.), everything else per
// radian.
struct AeroDerivativeSet {
  // Lift: linear up to alpha_crit, linear falloff beyond, optional C1 blend
  // of half-width stall_blend around the break.
  double CL0 = 0.0;
  double CLalpha = 0.0;          // > 0
  double alpha_crit = 0.0;       // lift-curve break [rad]
  double post_stall_slope = 0.0; // magnitude of the falloff slope [1/rad], >= 0
  double stall_blend = 0.0;      // blend half-width [rad], 0 = sharp break

  // Drag: CD0 + K*CL^2 + CDbeta*beta^2
  double CD0 = 0.0;
  double K = 0.0;
  double CDbeta = 0.0;

  double CYbeta = 0.0;  // side force per sideslip, < 0

  // Rolling moment
  double Clbeta = 0.0;
  double Clp = 0.0;
  double Clr = 0.0;
  double Clda = 0.0;  // < 0: positive aileron rolls left
  double Cldr = 0.0;

  // Pitching moment
  double Cm0 = 0.0;
  double Cmalpha = 0.0;  // < 0 for static stability
  double Cmq = 0.0;
  double Cmde = 0.0;     // < 0: positive elevator pitches down

  // Yawing moment
  double Cnbeta = 0.0;   // > 0 weathercock
  double Cnp = 0.0;
  double Cnr = 0.0;
  double Cnda = 0.0;
  double Cndr = 0.0;     // < 0: positive rudder yaws left

  // Lateral trim asymmetries; zero for a symmetric airframe.  Mirror-based
  // envelope construction refuses parameter sets where these are nonzero.
  double CY0 = 0.0;
  double Cl0 = 0.0;
  double Cn0 = 0.0;
};

struct PropulsionParams {
  double max_static_thrust = 0.0;  // sea-level static thrust at full throttle [N]
  double density_exponent = 1.0;   // altitude lapse: (rho/rho0)^m
  double speed_falloff_c1 = 0.0;   // [1/(m/s)], <= 0
  double speed_falloff_c2 = 0.0;   // [1/(m/s)^2]
};

struct Window {
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double x, double tol = 0.0) const {
    return x >= lower - tol && x <= upper + tol;
  }
  double clamp(double x) const {
    return x < lower ? lower : (x > upper ? upper : x);
  }
  double width() const { return upper - lower; }
  double midpoint() const { return 0.5 * (lower + upper); }
};

// Trim constraint box.  Actuator windows here are the nominal ones; a failure
// case narrows them through apply_failure before solving.
struct ConstraintConfig {
  double alpha_max = 0.0;  // [rad]
  double alpha_min = 0.0;  // [rad]
  double beta_max = 0.0;   // symmetric bound [rad]
  double phi_max = 0.0;    // symmetric bank bound [rad]
  Window elevator;         // [rad]
  Window aileron;          // [rad]
  Window rudder;           // [rad]
  Window throttle;         // unitless
};

struct AircraftParams {
  std::string name;
  double weight = 0.0;     // W [N]
  double mass = 0.0;       // [kg]
  double wing_area = 0.0;  // S [m^2]
  double span = 0.0;       // b [m]
  double chord = 0.0;      // mean aerodynamic chord [m]
  double Ixx = 0.0;        // [kg m^2]
  double Iyy = 0.0;
  double Izz = 0.0;
  double Ixz = 0.0;
  AeroDerivativeSet aero;
  PropulsionParams propulsion;
  ConstraintConfig limits;

  bool laterally_symmetric() const {
    return aero.CY0 == 0.0 && aero.Cl0 == 0.0 && aero.Cn0 == 0.0;
  }
};

// Throws std::invalid_argument listing every violated requirement (positive
// mass/geometry, positive-definite inertia, sign conventions, sane windows).
void validate_params(const AircraftParams& params);

// 16-hex-digit FNV-1a digest of every numeric field plus the name, in a
// fixed order.  Recorded in result-file headers so outputs can be matched
// to the parameter set that produced them.
std::string params_fingerprint(const AircraftParams& params);

// Calibrated sub-scale transport surrogate used as the shipped default.
AircraftParams default_params();

}  // namespace mfe
