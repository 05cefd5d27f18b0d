#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "mfe/atmosphere.hpp"
#include "mfe/flight_model.hpp"
#include "mfe/params.hpp"
#include "mfe/units.hpp"

using namespace mfe;

namespace {

// Independent barometric-formula reference: linear-temperature layer to 11 km,
// isothermal above.  Kept separate from the library implementation on purpose.
double reference_density(double h) {
  const double T0 = 288.15, L = 0.0065, R = 287.05287, g = 9.80665;
  const double n = g / (R * L);
  if (h <= 11000.0) {
    return 1.225 * std::pow(1.0 - L * h / T0, n - 1.0);
  }
  const double t11 = T0 - L * 11000.0;
  const double rho11 = 1.225 * std::pow(t11 / T0, n - 1.0);
  return rho11 * std::exp(-g * (h - 11000.0) / (R * t11));
}

AircraftState sample_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  AircraftState x;
  x.V = 40.0 + 30.0 * std::abs(u(rng));
  x.alpha = 0.12 * u(rng);
  x.beta = 0.15 * u(rng);
  x.p = 0.3 * u(rng);
  x.q = 0.3 * u(rng);
  x.r = 0.3 * u(rng);
  x.phi = 0.4 * u(rng);
  x.theta = 0.3 * u(rng);
  x.h = 2000.0 * std::abs(u(rng));
  return x;
}

Controls sample_controls(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Controls c;
  c.throttle = 0.5 + 0.4 * u(rng);
  c.elevator = 0.3 * u(rng);
  c.aileron = 0.25 * u(rng);
  c.rudder = 0.3 * u(rng);
  return c;
}

}  // namespace

TEST_CASE("isa density matches published anchors") {
  CHECK(isa_density(0.0) == 1.225);
  CHECK(isa_density(3048.0) == doctest::Approx(0.904669).epsilon(1e-3));
  // Tropopause density from the standard tables.
  CHECK(isa_density(11000.0) == doctest::Approx(0.36392).epsilon(2e-4));
}

TEST_CASE("isa density agrees with the barometric reference everywhere") {
  for (double h = 0.0; h <= 20000.0; h += 250.0) {
    CHECK(isa_density(h) == doctest::Approx(reference_density(h)).epsilon(1e-12));
  }
}

TEST_CASE("isa density strictly decreases with altitude") {
  double prev = isa_density(0.0);
  for (double h = 100.0; h <= 20000.0; h += 100.0) {
    const double rho = isa_density(h);
    CHECK(rho < prev);
    prev = rho;
  }
}

TEST_CASE("isa density rejects altitudes outside the modeled range") {
  CHECK_THROWS_AS(isa_density(-1.0), std::domain_error);
  CHECK_THROWS_AS(isa_density(20000.1), std::domain_error);
  CHECK_NOTHROW(isa_density(20000.0));
}

TEST_CASE("thrust is linear in throttle and anchored at static sea level") {
  const PropulsionParams prop = default_params().propulsion;
  CHECK(thrust_available(0.0, 50.0, 0.0, prop) == 0.0);
  CHECK(thrust_available(0.0, 0.0, 1.0, prop) == prop.max_static_thrust);
  const double full = thrust_available(500.0, 40.0, 1.0, prop);
  CHECK(thrust_available(500.0, 40.0, 0.37, prop) ==
        doctest::Approx(0.37 * full).epsilon(1e-15));
}

TEST_CASE("thrust follows the density-ratio lapse") {
  PropulsionParams prop;
  prop.max_static_thrust = 100.0;
  prop.density_exponent = 1.0;
  const double expect = 100.0 * isa_density(3048.0) / kRhoSeaLevel;
  CHECK(thrust_available(3048.0, 50.0, 1.0, prop) ==
        doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("thrust is non-increasing in altitude and speed") {
  const PropulsionParams prop = default_params().propulsion;
  double prev = thrust_available(0.0, 60.0, 1.0, prop);
  for (double h = 500.0; h <= 12000.0; h += 500.0) {
    const double t = thrust_available(h, 60.0, 1.0, prop);
    CHECK(t <= prev);
    prev = t;
  }
  prev = thrust_available(0.0, 1.0, 1.0, prop);
  for (double v = 10.0; v <= 120.0; v += 10.0) {
    const double t = thrust_available(0.0, v, 1.0, prop);
    CHECK(t <= prev);
    prev = t;
  }
}

TEST_CASE("thrust speed falloff never goes negative") {
  PropulsionParams prop;
  prop.max_static_thrust = 100.0;
  prop.speed_falloff_c1 = -0.01;
  CHECK(thrust_available(0.0, 200.0, 1.0, prop) == 0.0);
}

TEST_CASE("lift curve peaks at the blended maximum") {
  const AeroDerivativeSet aero = default_params().aero;

  double scan_max = 0.0;
  for (double a = -0.1; a <= aero.alpha_crit + 0.1; a += 1e-5) {
    scan_max = std::max(scan_max, lift_coefficient(a, aero));
  }
  CHECK(max_lift_coefficient(aero) == doctest::Approx(scan_max).epsilon(1e-7));

  AeroDerivativeSet sharp = aero;
  sharp.stall_blend = 0.0;
  CHECK(max_lift_coefficient(sharp) == sharp.CL0 + sharp.CLalpha * sharp.alpha_crit);
  // The blend shaves the sharp-corner peak.
  CHECK(max_lift_coefficient(aero) < max_lift_coefficient(sharp));
}

TEST_CASE("lift is non-increasing past the critical angle") {
  const AeroDerivativeSet aero = default_params().aero;
  const double at_crit = lift_coefficient(aero.alpha_crit, aero);
  CHECK(lift_coefficient(aero.alpha_crit + deg2rad(2.0), aero) <= at_crit);
  double prev = lift_coefficient(aero.alpha_crit + aero.stall_blend, aero);
  for (double a = aero.alpha_crit + aero.stall_blend; a < aero.alpha_crit + 0.2;
       a += 1e-3) {
    const double cl = lift_coefficient(a, aero);
    CHECK(cl <= prev + 1e-15);
    prev = cl;
  }
}

TEST_CASE("lift blend joins the linear segments continuously") {
  const AeroDerivativeSet aero = default_params().aero;
  const double w = aero.stall_blend;
  for (double edge : {aero.alpha_crit - w, aero.alpha_crit + w}) {
    const double below = lift_coefficient(edge - 1e-9, aero);
    const double above = lift_coefficient(edge + 1e-9, aero);
    CHECK(below == doctest::Approx(above).epsilon(1e-6));
  }
}

TEST_CASE("symmetric inputs give zero lateral coefficients") {
  const AircraftParams params = default_params();
  AircraftState x;
  x.V = 60.0;
  x.alpha = deg2rad(4.0);
  x.q = 0.05;
  Controls u;
  u.throttle = 0.4;
  u.elevator = deg2rad(-2.0);
  const AeroCoefficients c = aero_coefficients(x, u, params);
  CHECK(c.CY == 0.0);
  CHECK(c.Cl == 0.0);
  CHECK(c.Cn == 0.0);
}

TEST_CASE("drag polar at zero alpha and beta") {
  const AircraftParams params = default_params();
  AircraftState x;
  x.V = 60.0;
  Controls u;
  const AeroCoefficients c = aero_coefficients(x, u, params);
  const double cl0 = params.aero.CL0;
  CHECK(c.CD == params.aero.CD0 + params.aero.K * cl0 * cl0);
}

TEST_CASE("sideslip always adds drag") {
  const AircraftParams params = default_params();
  AircraftState x;
  x.V = 60.0;
  x.alpha = deg2rad(3.0);
  Controls u;
  const double cd0 = aero_coefficients(x, u, params).CD;
  for (double b : {-0.3, -0.05, 0.05, 0.2}) {
    x.beta = b;
    CHECK(aero_coefficients(x, u, params).CD > cd0);
  }
}

TEST_CASE("coefficients reject zero airspeed") {
  const AircraftParams params = default_params();
  AircraftState x;
  x.V = 0.0;
  CHECK_THROWS_AS(aero_coefficients(x, Controls{}, params), std::domain_error);
  CHECK_THROWS_AS(state_derivative(x, Controls{}, params), std::domain_error);
}

TEST_CASE("state derivative rejects vertical pitch attitude") {
  const AircraftParams params = default_params();
  AircraftState x;
  x.V = 60.0;
  x.theta = deg2rad(90.0);
  CHECK_THROWS_AS(state_derivative(x, Controls{}, params), std::domain_error);
}

TEST_CASE("symmetric flight has exactly zero lateral rates") {
  const AircraftParams params = default_params();
  AircraftState x;
  x.V = 55.0;
  x.alpha = deg2rad(3.0);
  x.theta = deg2rad(3.0);
  x.q = 0.01;
  Controls u;
  u.throttle = 0.5;
  u.elevator = deg2rad(-2.0);
  const StateDeriv d = state_derivative(x, u, params);
  CHECK(d[kIdxBeta] == 0.0);
  CHECK(d[kIdxP] == 0.0);
  CHECK(d[kIdxR] == 0.0);
  CHECK(d[kIdxPhi] == 0.0);
}

TEST_CASE("negating the lateral channel negates its rates") {
  const AircraftParams params = default_params();
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    AircraftState x = sample_state(rng);
    Controls u = sample_controls(rng);
    AircraftState xm = x;
    Controls um = u;
    xm.beta = -x.beta;
    xm.p = -x.p;
    xm.r = -x.r;
    xm.phi = -x.phi;
    um.aileron = -u.aileron;
    um.rudder = -u.rudder;

    const StateDeriv d = state_derivative(x, u, params);
    const StateDeriv dm = state_derivative(xm, um, params);
    CHECK(dm[kIdxBeta] == -d[kIdxBeta]);
    CHECK(dm[kIdxP] == -d[kIdxP]);
    CHECK(dm[kIdxR] == -d[kIdxR]);
    CHECK(dm[kIdxPhi] == -d[kIdxPhi]);
    CHECK(dm[kIdxV] == d[kIdxV]);
    CHECK(dm[kIdxAlpha] == d[kIdxAlpha]);
    CHECK(dm[kIdxQ] == d[kIdxQ]);
    CHECK(dm[kIdxTheta] == d[kIdxTheta]);
  }
}

TEST_CASE("state derivative is deterministic") {
  const AircraftParams params = default_params();
  std::mt19937_64 rng(11);
  const AircraftState x = sample_state(rng);
  const Controls u = sample_controls(rng);
  const StateDeriv a = state_derivative(x, u, params);
  const StateDeriv b = state_derivative(x, u, params);
  for (int i = 0; i < 8; ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("airspeed-rate slope matches the hand derivative in glide geometry") {
  const AircraftParams params = default_params();
  AircraftState x;
  x.V = 65.0;
  x.alpha = deg2rad(4.0);
  x.theta = deg2rad(2.0);
  x.h = 800.0;
  Controls u;
  u.throttle = 0.6;
  u.elevator = deg2rad(-3.0);

  // Symmetric flight with zero rates: Vdot = (T cos(alpha) - D)/m - g sin(theta - alpha),
  // so dVdot/dV = (cos(alpha) dT/dV - rho V S CD)/m with CD frozen.
  const double rho = isa_density(x.h);
  const double sigma = std::pow(rho / kRhoSeaLevel,
                                params.propulsion.density_exponent);
  const double dT_dV = u.throttle * params.propulsion.max_static_thrust * sigma *
                       (params.propulsion.speed_falloff_c1 +
                        2.0 * params.propulsion.speed_falloff_c2 * x.V);
  const double cd = aero_coefficients(x, u, params).CD;
  const double analytic =
      (std::cos(x.alpha) * dT_dV - rho * x.V * params.wing_area * cd) /
      params.mass;

  const double eps = 1e-4 * x.V;
  AircraftState xp = x, xm = x;
  xp.V += eps;
  xm.V -= eps;
  const double fd = (state_derivative(xp, u, params)[kIdxV] -
                     state_derivative(xm, u, params)[kIdxV]) /
                    (2.0 * eps);
  CHECK(fd == doctest::Approx(analytic).epsilon(1e-6));
}

TEST_CASE("airspeed-rate gravity slope matches the hand derivative") {
  const AircraftParams params = default_params();
  AircraftState x;
  x.V = 65.0;
  x.alpha = deg2rad(4.0);
  x.theta = deg2rad(2.0);
  Controls u;
  u.throttle = 0.6;

  const double analytic = -kGravity * std::cos(x.theta - x.alpha);
  const double eps = 1e-6;
  AircraftState xp = x, xm = x;
  xp.theta += eps;
  xm.theta -= eps;
  const double fd = (state_derivative(xp, u, params)[kIdxV] -
                     state_derivative(xm, u, params)[kIdxV]) /
                    (2.0 * eps);
  CHECK(fd == doctest::Approx(analytic).epsilon(1e-6));
}

TEST_CASE("pitch-acceleration damping slope matches the hand derivative") {
  const AircraftParams params = default_params();
  std::mt19937_64 rng(23);
  const AircraftState x = sample_state(rng);
  const Controls u = sample_controls(rng);

  const double qbarS =
      0.5 * isa_density(x.h) * x.V * x.V * params.wing_area;
  const double analytic = qbarS * params.chord * params.aero.Cmq *
                          params.chord / (2.0 * x.V) / params.Iyy;

  const double eps = 1e-5;
  AircraftState xp = x, xm = x;
  xp.q += eps;
  xm.q -= eps;
  const double fd = (state_derivative(xp, u, params)[kIdxQ] -
                     state_derivative(xm, u, params)[kIdxQ]) /
                    (2.0 * eps);
  CHECK(fd == doctest::Approx(analytic).epsilon(1e-6));
}

TEST_CASE("parameter validation enforces the sign conventions") {
  AircraftParams good = default_params();
  CHECK_NOTHROW(validate_params(good));

  AircraftParams p = good;
  p.aero.Clda = 0.04;
  CHECK_THROWS_AS(validate_params(p), std::invalid_argument);
  p = good;
  p.aero.Cndr = 0.1;
  CHECK_THROWS_AS(validate_params(p), std::invalid_argument);
  p = good;
  p.aero.Cmalpha = 0.5;
  CHECK_THROWS_AS(validate_params(p), std::invalid_argument);
  p = good;
  p.aero.CLalpha = -1.0;
  CHECK_THROWS_AS(validate_params(p), std::invalid_argument);
}

TEST_CASE("parameter validation rejects broken mass and geometry") {
  AircraftParams p = default_params();
  p.mass = 0.0;
  CHECK_THROWS_AS(validate_params(p), std::invalid_argument);
  p = default_params();
  p.Ixx = -1.0;
  CHECK_THROWS_AS(validate_params(p), std::invalid_argument);
  p = default_params();
  // Ixz too large for a positive-definite inertia tensor.
  p.Ixz = 10.0;
  CHECK_THROWS_AS(validate_params(p), std::invalid_argument);
}

TEST_CASE("fingerprint tracks every parameter change") {
  const AircraftParams base = default_params();
  const std::string h0 = params_fingerprint(base);
  CHECK(h0.size() == 16);
  CHECK(params_fingerprint(base) == h0);

  AircraftParams p = base;
  p.aero.Cndr += 1e-12;
  CHECK(params_fingerprint(p) != h0);
  p = base;
  p.name += "x";
  CHECK(params_fingerprint(p) != h0);
}
