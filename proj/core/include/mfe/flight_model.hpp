#pragma once

#include "mfe/params.hpp"
#include "mfe/state.hpp"

namespace mfe {

struct AeroCoefficients {
  double CL = 0.0;
  double CD = 0.0;
  double CY = 0.0;
  double Cl = 0.0;  // rolling moment
  double Cm = 0.0;  // pitching moment
  double Cn = 0.0;  // yawing moment
};

// Piecewise-linear lift curve with optional C1 blend at the break.
double lift_coefficient(double alpha, const AeroDerivativeSet& aero);

// Peak of the lift curve.  With a C1 blend the peak sits slightly below the
// sharp-break value CL0 + CLalpha * alpha_crit.
double max_lift_coefficient(const AeroDerivativeSet& aero);

// Installed thrust along body x: throttle * Tmax * (rho/rho0)^m * max(0, 1 + c1*V + c2*V^2).
double thrust_available(double h_m, double V, double throttle,
                        const PropulsionParams& prop);

// Full coefficient buildup.  Rates are nondimensionalized with b/2V (lateral)
// and chord/2V (pitch); throws std::domain_error for V <= 0.
AeroCoefficients aero_coefficients(const AircraftState& x, const Controls& u,
                                   const AircraftParams& params);

// Rigid-body state derivative of the 8-state model: wind-axis translational
// rates, body-axis angular accelerations, bank/pitch kinematics.  Pure
// function of its inputs; throws std::domain_error for V <= 0 or |theta|
// at the kinematic singularity.
StateDeriv state_derivative(const AircraftState& x, const Controls& u,
                            const AircraftParams& params);

}  // namespace mfe
