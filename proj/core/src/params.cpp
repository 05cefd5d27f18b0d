#include "mfe/params.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mfe/units.hpp"

namespace mfe {

namespace {

void require(bool ok, const char* what, std::string& errors) {
  if (!ok) {
    errors += "\n  - ";
    errors += what;
  }
}

void check_window(const Window& w, const char* name, std::string& errors) {
  if (!(w.lower <= w.upper)) {
    errors += "\n  - ";
    errors += name;
    errors += " window has lower > upper";
  }
}

}  // namespace

void validate_params(const AircraftParams& p) {
  std::string errors;

  require(p.weight > 0.0, "weight must be positive", errors);
  require(p.mass > 0.0, "mass must be positive", errors);
  require(p.wing_area > 0.0, "wing_area must be positive", errors);
  require(p.span > 0.0, "span must be positive", errors);
  require(p.chord > 0.0, "chord must be positive", errors);
  if (p.weight > 0.0 && p.mass > 0.0) {
    require(std::abs(p.weight - p.mass * kGravity) <= 0.01 * p.weight,
            "weight and mass disagree by more than 1%", errors);
  }

  require(p.Ixx > 0.0 && p.Iyy > 0.0 && p.Izz > 0.0,
          "inertia diagonal must be positive", errors);
  require(p.Ixx * p.Izz - p.Ixz * p.Ixz > 0.0,
          "inertia tensor must be positive definite (Ixx*Izz > Ixz^2)", errors);

  const AeroDerivativeSet& a = p.aero;
  require(a.CLalpha > 0.0, "CLalpha must be positive", errors);
  require(a.alpha_crit > 0.0, "alpha_crit must be positive", errors);
  require(a.post_stall_slope >= 0.0, "post_stall_slope must be >= 0", errors);
  require(a.stall_blend >= 0.0, "stall_blend must be >= 0", errors);
  require(a.CD0 > 0.0, "CD0 must be positive", errors);
  require(a.K > 0.0, "induced drag factor K must be positive", errors);
  require(a.CDbeta >= 0.0, "CDbeta must be >= 0", errors);
  require(a.CYbeta < 0.0, "CYbeta must be negative", errors);
  require(a.Cmalpha < 0.0, "Cmalpha must be negative", errors);
  require(a.Cmde < 0.0, "Cmde must be negative", errors);
  require(a.Clda < 0.0, "Clda must be negative (positive aileron rolls left)", errors);
  require(a.Cndr < 0.0, "Cndr must be negative (positive rudder yaws left)", errors);
  require(a.Cnbeta > 0.0, "Cnbeta must be positive", errors);

  const PropulsionParams& t = p.propulsion;
  require(t.max_static_thrust > 0.0, "max_static_thrust must be positive", errors);
  require(t.density_exponent > 0.0, "density_exponent must be positive", errors);
  require(t.speed_falloff_c1 <= 0.0, "speed_falloff_c1 must be <= 0", errors);

  const ConstraintConfig& c = p.limits;
  require(c.alpha_min < c.alpha_max, "alpha_min must be below alpha_max", errors);
  require(c.alpha_max < 0.5 * std::numbers::pi, "alpha_max must be below 90 deg", errors);
  require(c.beta_max > 0.0 && c.beta_max < 0.5 * std::numbers::pi,
          "beta_max must be in (0, 90) deg", errors);
  require(c.phi_max > 0.0 && c.phi_max < 0.5 * std::numbers::pi,
          "phi_max must be in (0, 90) deg", errors);
  check_window(c.elevator, "elevator", errors);
  check_window(c.aileron, "aileron", errors);
  check_window(c.rudder, "rudder", errors);
  check_window(c.throttle, "throttle", errors);
  require(c.throttle.lower >= 0.0 && c.throttle.upper <= 1.0,
          "throttle window must lie within [0, 1]", errors);

  if (!errors.empty()) {
    throw std::invalid_argument("invalid aircraft parameters:" + errors);
  }
}

AircraftParams default_params() {
  AircraftParams p;
  p.name = "subscale-twinjet-surrogate";

  p.mass = 26.2;                 // kg
  p.weight = p.mass * kGravity;  // N
  p.wing_area = 0.5483;   // m^2
  p.span = 2.09;          // m
  p.chord = 0.2790;       // m
  p.Ixx = 1.898;          // kg m^2
  p.Iyy = 4.926;
  p.Izz = 6.440;
  p.Ixz = 0.333;

  AeroDerivativeSet& a = p.aero;
  a.CL0 = 0.09;
  a.CLalpha = 4.2;
  a.alpha_crit = deg2rad(10.5);
  a.post_stall_slope = 2.0;
  a.stall_blend = deg2rad(0.25);
  a.CD0 = 0.025;
  a.K = 0.05;
  a.CDbeta = 0.25;
  a.CYbeta = -0.30;
  a.Clbeta = -0.11;
  a.Clp = -0.45;
  a.Clr = 0.15;
  a.Clda = -0.065;
  a.Cldr = 0.015;
  a.Cm0 = 0.02;
  a.Cmalpha = -1.5;
  a.Cmq = -15.0;
  a.Cmde = -1.2;
  a.Cnbeta = 0.12;
  a.Cnp = -0.02;
  a.Cnr = -0.18;
  a.Cnda = 0.008;
  a.Cndr = -0.12;

  PropulsionParams& t = p.propulsion;
  t.max_static_thrust = 72.0;  // N
  t.density_exponent = 1.0;
  t.speed_falloff_c1 = -3.05e-4;
  t.speed_falloff_c2 = 0.0;

  ConstraintConfig& c = p.limits;
  c.alpha_max = deg2rad(10.5);
  c.alpha_min = deg2rad(-5.0);
  c.beta_max = deg2rad(45.0);
  c.phi_max = deg2rad(30.0);
  c.elevator = {deg2rad(-30.0), deg2rad(30.0)};
  c.aileron = {deg2rad(-20.0), deg2rad(20.0)};
  c.rudder = {deg2rad(-30.0), deg2rad(30.0)};
  c.throttle = {0.0, 1.0};

  return p;
}

std::string params_fingerprint(const AircraftParams& p) {
  std::uint64_t h = 14695981039346656037ull;
  auto mix_byte = [&h](unsigned char b) {
    h ^= b;
    h *= 1099511628211ull;
  };
  auto mix = [&mix_byte](double v) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, sizeof(bits));
    for (int i = 0; i < 8; ++i) {
      mix_byte(static_cast<unsigned char>(bits >> (8 * i)));
    }
  };
  for (char ch : p.name) {
    mix_byte(static_cast<unsigned char>(ch));
  }
  mix_byte(0);

  mix(p.weight);
  mix(p.mass);
  mix(p.wing_area);
  mix(p.span);
  mix(p.chord);
  mix(p.Ixx);
  mix(p.Iyy);
  mix(p.Izz);
  mix(p.Ixz);

  const AeroDerivativeSet& a = p.aero;
  for (double v : {a.CL0, a.CLalpha, a.alpha_crit, a.post_stall_slope,
                   a.stall_blend, a.CD0, a.K, a.CDbeta, a.CY0, a.CYbeta,
                   a.Cl0, a.Clbeta, a.Clp, a.Clr, a.Clda, a.Cldr, a.Cm0,
                   a.Cmalpha, a.Cmq, a.Cmde, a.Cn0, a.Cnbeta, a.Cnp, a.Cnr,
                   a.Cnda, a.Cndr}) {
    mix(v);
  }

  mix(p.propulsion.max_static_thrust);
  mix(p.propulsion.density_exponent);
  mix(p.propulsion.speed_falloff_c1);
  mix(p.propulsion.speed_falloff_c2);

  const ConstraintConfig& c = p.limits;
  for (double v : {c.alpha_min, c.alpha_max, c.beta_max, c.phi_max,
                   c.elevator.lower, c.elevator.upper, c.aileron.lower,
                   c.aileron.upper, c.rudder.lower, c.rudder.upper,
                   c.throttle.lower, c.throttle.upper}) {
    mix(v);
  }

  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace mfe
