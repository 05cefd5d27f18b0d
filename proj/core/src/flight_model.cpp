#include "mfe/flight_model.hpp"

#include <cmath>
#include <stdexcept>

#include "mfe/atmosphere.hpp"
#include "mfe/units.hpp"

namespace mfe {

double lift_coefficient(double alpha, const AeroDerivativeSet& aero) {
  const double s1 = aero.CLalpha;
  const double s2 = -aero.post_stall_slope;
  const double crit = aero.alpha_crit;
  const double w = aero.stall_blend;
  const auto cl_at = [&](double a) { return aero.CL0 + s1 * a; };

  if (w <= 0.0) {
    if (alpha <= crit) return cl_at(alpha);
    return cl_at(crit) + s2 * (alpha - crit);
  }
  // Quadratic joining the two linear segments with matched slopes over
  // [crit - w, crit + w].
  const double lo = crit - w;
  if (alpha <= lo) return cl_at(alpha);
  const double hi = crit + w;
  if (alpha <= hi) {
    const double t = alpha - lo;
    return cl_at(lo) + s1 * t + (s2 - s1) / (4.0 * w) * t * t;
  }
  const double cl_hi = cl_at(lo) + s1 * (2.0 * w) + (s2 - s1) * w;
  return cl_hi + s2 * (alpha - hi);
}

double max_lift_coefficient(const AeroDerivativeSet& aero) {
  const double s1 = aero.CLalpha;
  const double ps = aero.post_stall_slope;
  const double cl_crit = aero.CL0 + s1 * aero.alpha_crit;
  if (aero.stall_blend <= 0.0 || s1 + ps <= 0.0) {
    return cl_crit;
  }
  // Vertex of the blend quadratic.
  return cl_crit - aero.stall_blend * s1 * ps / (s1 + ps);
}

double thrust_available(double h_m, double V, double throttle,
                        const PropulsionParams& prop) {
  const double ratio = isa_density(h_m) / kRhoSeaLevel;
  const double falloff =
      1.0 + prop.speed_falloff_c1 * V + prop.speed_falloff_c2 * V * V;
  return throttle * prop.max_static_thrust *
         std::pow(ratio, prop.density_exponent) * std::max(0.0, falloff);
}

AeroCoefficients aero_coefficients(const AircraftState& x, const Controls& u,
                                   const AircraftParams& params) {
  if (!(x.V > 0.0)) {
    throw std::domain_error("aero_coefficients: airspeed must be positive");
  }
  const AeroDerivativeSet& a = params.aero;

  const double ph = x.p * params.span / (2.0 * x.V);
  const double qh = x.q * params.chord / (2.0 * x.V);
  const double rh = x.r * params.span / (2.0 * x.V);

  AeroCoefficients c;
  c.CL = lift_coefficient(x.alpha, a);
  c.CD = a.CD0 + a.K * c.CL * c.CL + a.CDbeta * x.beta * x.beta;
  c.CY = a.CY0 + a.CYbeta * x.beta;
  c.Cl = a.Cl0 + a.Clbeta * x.beta + a.Clp * ph + a.Clr * rh +
         a.Clda * u.aileron + a.Cldr * u.rudder;
  c.Cm = a.Cm0 + a.Cmalpha * x.alpha + a.Cmq * qh + a.Cmde * u.elevator;
  c.Cn = a.Cn0 + a.Cnbeta * x.beta + a.Cnp * ph + a.Cnr * rh +
         a.Cnda * u.aileron + a.Cndr * u.rudder;
  return c;
}

StateDeriv state_derivative(const AircraftState& x, const Controls& u,
                            const AircraftParams& params) {
  if (!(x.V > 0.0)) {
    throw std::domain_error("state_derivative: airspeed must be positive");
  }
  const double ct = std::cos(x.theta);
  if (std::abs(ct) < 1e-9) {
    throw std::domain_error("state_derivative: pitch attitude at +/-90 deg");
  }

  const double rho = isa_density(x.h);
  const double qbarS = 0.5 * rho * x.V * x.V * params.wing_area;
  const AeroCoefficients c = aero_coefficients(x, u, params);
  const double T = thrust_available(x.h, x.V, u.throttle, params.propulsion);

  const double sa = std::sin(x.alpha), ca = std::cos(x.alpha);
  const double sb = std::sin(x.beta), cb = std::cos(x.beta);
  const double sp = std::sin(x.phi), cp = std::cos(x.phi);
  const double st = std::sin(x.theta);

  const double lift = qbarS * c.CL;
  const double drag = qbarS * c.CD;
  const double side = qbarS * c.CY;

  // Aerodynamic + thrust forces resolved into body axes.
  const double fx = -drag * ca * cb - side * ca * sb + lift * sa + T;
  const double fy = -drag * sb + side * cb;
  const double fz = -drag * sa * cb - side * sa * sb - lift * ca;

  const double gx = -kGravity * st;
  const double gy = kGravity * ct * sp;
  const double gz = kGravity * ct * cp;

  const double uu = x.V * ca * cb;
  const double vv = x.V * sb;
  const double ww = x.V * sa * cb;

  const double udot = fx / params.mass + gx + x.r * vv - x.q * ww;
  const double vdot = fy / params.mass + gy + x.p * ww - x.r * uu;
  const double wdot = fz / params.mass + gz + x.q * uu - x.p * vv;

  const double Vdot = (uu * udot + vv * vdot + ww * wdot) / x.V;
  const double alphadot = (uu * wdot - ww * udot) / (uu * uu + ww * ww);
  const double betadot = (vdot * x.V - vv * Vdot) / (x.V * x.V * cb);

  // Angular accelerations with the full inertia tensor (Ixz coupling).
  const double Lm = qbarS * params.span * c.Cl;
  const double Mm = qbarS * params.chord * c.Cm;
  const double Nm = qbarS * params.span * c.Cn;

  const double gam = params.Ixx * params.Izz - params.Ixz * params.Ixz;
  const double g1 = params.Ixz * (params.Ixx - params.Iyy + params.Izz) / gam;
  const double g2 = (params.Izz * (params.Izz - params.Iyy) + params.Ixz * params.Ixz) / gam;
  const double g3 = params.Izz / gam;
  const double g4 = params.Ixz / gam;
  const double g5 = (params.Izz - params.Ixx) / params.Iyy;
  const double g6 = params.Ixz / params.Iyy;
  const double g7 = (params.Ixx * (params.Ixx - params.Iyy) + params.Ixz * params.Ixz) / gam;
  const double g8 = params.Ixx / gam;

  const double pdot = g1 * x.p * x.q - g2 * x.q * x.r + g3 * Lm + g4 * Nm;
  const double qdot = g5 * x.p * x.r - g6 * (x.p * x.p - x.r * x.r) + Mm / params.Iyy;
  const double rdot = g7 * x.p * x.q - g1 * x.q * x.r + g4 * Lm + g8 * Nm;

  const double tt = st / ct;
  const double phidot = x.p + tt * (x.q * sp + x.r * cp);
  const double thetadot = x.q * cp - x.r * sp;

  return {Vdot, alphadot, betadot, pdot, qdot, rdot, phidot, thetadot};
}

}  // namespace mfe
