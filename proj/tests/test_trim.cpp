#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <optional>

#include "mfe/boundary.hpp"
#include "mfe/flight_model.hpp"
#include "mfe/params.hpp"
#include "mfe/trim.hpp"
#include "mfe/units.hpp"

using namespace mfe;

namespace {

// Bisection solve of sin(gamma) = a sin(theta) - b cos(theta), independent of
// the closed form under test.
double bisect_theta(double alpha, double beta, double phi, double gamma) {
  const double a = std::cos(alpha) * std::cos(beta);
  const double b = std::sin(phi) * std::sin(beta) +
                   std::cos(phi) * std::sin(alpha) * std::cos(beta);
  auto f = [&](double th) {
    return a * std::sin(th) - b * std::cos(th) - std::sin(gamma);
  };
  double lo = -1.5707, hi = 1.5707;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(lo) * f(mid) <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// 3-2-1 Euler rotation applied to the inertial yaw-rate vector, built from
// explicit matrices rather than the component formulas under test.
std::array<double, 3> dcm_body_rates(double theta, double phi, double psidot) {
  const std::array<std::array<double, 3>, 3> r1 = {{{1, 0, 0},
                                                    {0, std::cos(phi), std::sin(phi)},
                                                    {0, -std::sin(phi), std::cos(phi)}}};
  const std::array<std::array<double, 3>, 3> r2 = {{{std::cos(theta), 0, -std::sin(theta)},
                                                    {0, 1, 0},
                                                    {std::sin(theta), 0, std::cos(theta)}}};
  const std::array<double, 3> omega_i = {0.0, 0.0, psidot};
  std::array<double, 3> tmp = {};
  std::array<double, 3> out = {};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) tmp[i] += r2[i][j] * omega_i[j];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i] += r1[i][j] * tmp[j];
  return out;
}

// Analytically trimmable toy: every moment derivative zero, lift sized so
// level flight at V0 needs exactly alpha = 0.
AircraftParams toy_params(double V0) {
  AircraftParams p = default_params();
  p.name = "toy";
  AeroDerivativeSet& a = p.aero;
  a = {};
  const double qbarS = 0.5 * 1.225 * V0 * V0 * p.wing_area;
  a.CL0 = p.weight / qbarS;
  a.CLalpha = 4.0;
  a.alpha_crit = deg2rad(15.0);
  a.post_stall_slope = 1.0;
  a.CD0 = 0.03;
  a.K = 0.05;
  a.Cmalpha = -1.0;  // validation wants static stability
  a.Cmde = -1.0;
  a.Clda = -0.05;
  a.Cndr = -0.05;
  a.CYbeta = -0.3;
  a.Cnbeta = 0.1;
  a.Clbeta = -0.05;
  p.propulsion.speed_falloff_c1 = 0.0;
  p.limits.alpha_max = deg2rad(15.0);
  return p;
}

TrimTarget level_target(double v_kt) {
  TrimTarget t;
  t.h = 0.0;
  t.V = kt2mps(v_kt);
  t.gamma = 0.0;
  t.psidot = 0.0;
  return t;
}

}  // namespace

TEST_CASE("pitch attitude reduces to alpha plus gamma in symmetric flight") {
  CHECK(pitch_theta(deg2rad(2.0), 0.0, 0.0, deg2rad(3.0)) ==
        doctest::Approx(deg2rad(5.0)).epsilon(1e-12));
  for (double a : {-0.05, 0.0, 0.08, 0.17}) {
    CHECK(pitch_theta(a, 0.0, 0.0, 0.0) == doctest::Approx(a).epsilon(1e-12));
  }
}

TEST_CASE("pitch attitude solves the flight-path relation in banked slips") {
  const struct {
    double alpha, beta, phi, gamma;
  } cases[] = {
      {deg2rad(5.0), deg2rad(3.0), deg2rad(30.0), deg2rad(-2.0)},
      {deg2rad(9.0), deg2rad(-12.0), deg2rad(-25.0), deg2rad(4.0)},
      {deg2rad(-2.0), deg2rad(8.0), deg2rad(15.0), deg2rad(0.0)},
  };
  for (const auto& c : cases) {
    const double theta = pitch_theta(c.alpha, c.beta, c.phi, c.gamma);
    const double a = std::cos(c.alpha) * std::cos(c.beta);
    const double b = std::sin(c.phi) * std::sin(c.beta) +
                     std::cos(c.phi) * std::sin(c.alpha) * std::cos(c.beta);
    CHECK(a * std::sin(theta) - b * std::cos(theta) ==
          doctest::Approx(std::sin(c.gamma)).epsilon(1e-12));
    CHECK(theta == doctest::Approx(bisect_theta(c.alpha, c.beta, c.phi,
                                                c.gamma)).epsilon(1e-10));
  }
}

TEST_CASE("pitch attitude rejects infeasible geometry") {
  // cos(alpha) cos(beta) too small against the requested path angle.
  CHECK_THROWS_AS(pitch_theta(deg2rad(80.0), deg2rad(40.0), 0.0, deg2rad(12.0)),
                  TrimGeometryError);
}

TEST_CASE("steady-turn rates vanish without turn rate") {
  const BodyRates r = required_rates(deg2rad(4.0), deg2rad(20.0), 0.0);
  CHECK(r.p == 0.0);
  CHECK(r.q == 0.0);
  CHECK(r.r == 0.0);
}

TEST_CASE("steady-turn rates in flat geometry put everything in yaw") {
  const double w = deg2rad(0.2);
  const BodyRates r = required_rates(0.0, 0.0, w);
  CHECK(r.p == 0.0);
  CHECK(r.q == 0.0);
  CHECK(r.r == doctest::Approx(w).epsilon(1e-15));
}

TEST_CASE("steady-turn rates match the rotation-matrix oracle") {
  const struct {
    double theta, phi, psidot;
  } cases[] = {
      {deg2rad(5.0), deg2rad(30.0), deg2rad(3.0)},
      {deg2rad(-8.0), deg2rad(-22.0), deg2rad(-11.0)},
      {deg2rad(2.0), deg2rad(12.0), deg2rad(0.5)},
  };
  for (const auto& c : cases) {
    const BodyRates r = required_rates(c.theta, c.phi, c.psidot);
    const auto o = dcm_body_rates(c.theta, c.phi, c.psidot);
    CHECK(r.p == doctest::Approx(o[0]).epsilon(1e-14));
    CHECK(r.q == doctest::Approx(o[1]).epsilon(1e-14));
    CHECK(r.r == doctest::Approx(o[2]).epsilon(1e-14));
  }
}

TEST_CASE("hand-built toy trim has residuals at rounding level") {
  const double V0 = 40.0;
  const AircraftParams params = toy_params(V0);

  AircraftState x;
  x.V = V0;
  x.h = 0.0;
  Controls u;
  const double qbarS = 0.5 * 1.225 * V0 * V0 * params.wing_area;
  const double drag = qbarS * (params.aero.CD0 +
                               params.aero.K * params.aero.CL0 * params.aero.CL0);
  u.throttle = drag / params.propulsion.max_static_thrust;

  const StateDeriv d = state_derivative(x, u, params);
  for (int i = 0; i < 8; ++i) CHECK(std::abs(d[i]) <= 1e-12);

  TrimTarget t;
  t.V = V0;
  const ConstraintResiduals res = constraint_residuals(x, u, t, params.limits);
  CHECK(res.max_equality_abs() <= 1e-12);
  CHECK(res.min_margin() >= 0.0);

  // The solver should land on the same point.  Stability of the toy is not
  // the question here, so skip the classifier.
  SolverConfig cfg;
  cfg.classify_stability = false;
  const TrimResult r = solve_trim(t, std::nullopt, params, cfg);
  REQUIRE(r.feasible());
  CHECK(r.controls.throttle == doctest::Approx(u.throttle).epsilon(1e-6));
  CHECK(std::abs(r.state.alpha) <= 1e-6);
}

TEST_CASE("constraint residuals report a velocity offset verbatim") {
  const AircraftParams params = default_params();
  AircraftState x;
  x.V = 51.0;
  TrimTarget t;
  t.V = 50.0;
  const ConstraintResiduals res =
      constraint_residuals(x, Controls{}, t, params.limits);
  CHECK(res.dV == 1.0);
}

TEST_CASE("level symmetric flight trims with zero lateral activity") {
  const AircraftParams params = default_params();
  const TrimResult r = solve_trim(level_target(100.0), std::nullopt, params);
  REQUIRE(r.feasible());
  CHECK(std::abs(r.state.beta) <= 1e-6);
  CHECK(std::abs(r.state.phi) <= 1e-6);
  CHECK(std::abs(r.controls.aileron) <= 1e-6);
  CHECK(std::abs(r.controls.rudder) <= 1e-6);
  CHECK(r.residual <= 1e-7);
  CHECK(r.xdot_inf <= 1e-7);
}

TEST_CASE("feasible trims satisfy their own constraint report") {
  const AircraftParams params = default_params();
  for (double psidot : {0.0, 3.0, -6.0}) {
    TrimTarget t = level_target(110.0);
    t.psidot = deg2rad(psidot);
    const TrimResult r = solve_trim(t, std::nullopt, params);
    REQUIRE(r.feasible());
    const ConstraintResiduals res =
        constraint_residuals(r.state, r.controls, t, params.limits);
    CHECK(res.max_equality_abs() <= 1e-6);
    CHECK(res.min_margin() >= -1e-6);
  }
}

TEST_CASE("eliminated variables satisfy their defining relations exactly") {
  const AircraftParams params = default_params();
  TrimTarget t = level_target(90.0);
  t.gamma = deg2rad(2.0);
  t.psidot = deg2rad(4.0);
  const TrimResult r = solve_trim(t, std::nullopt, params);
  REQUIRE(r.feasible());
  CHECK(r.state.V == t.V);
  CHECK(r.state.h == t.h);
  CHECK(r.state.theta ==
        pitch_theta(r.state.alpha, r.state.beta, r.state.phi, t.gamma));
  const BodyRates br = required_rates(r.state.theta, r.state.phi, t.psidot);
  CHECK(r.state.p == br.p);
  CHECK(r.state.q == br.q);
  CHECK(r.state.r == br.r);
}

TEST_CASE("reported residual matches a fresh derivative evaluation") {
  const AircraftParams params = default_params();
  TrimTarget t = level_target(120.0);
  t.psidot = deg2rad(-5.0);
  const TrimResult r = solve_trim(t, std::nullopt, params);
  REQUIRE(r.feasible());
  const StateDeriv d = state_derivative(r.state, r.controls, params);
  double j = 0.0;
  double inf = 0.0;
  for (int i = 0; i < 8; ++i) {
    j += 0.5 * d[i] * d[i];
    inf = std::max(inf, std::abs(d[i]));
  }
  CHECK(std::abs(j - r.residual) <= 1e-12);
  CHECK(std::abs(inf - r.xdot_inf) <= 1e-12);
}

TEST_CASE("targets below the stall speed fail on the alpha limit") {
  const AircraftParams params = default_params();
  const double vs = stall_speed(params, 0.0);
  TrimTarget t;
  t.V = 0.9 * vs;
  const TrimResult r = solve_trim(t, std::nullopt, params);
  CHECK(!r.feasible());
  CHECK((r.active & kActiveAlphaLimit) != 0);
}

TEST_CASE("rudder jam feasible wherever both flanking restrictions are") {
  const AircraftParams params = default_params();
  const double jam_deg = -10.0;
  TrimTarget t = level_target(100.0);
  t.psidot = deg2rad(2.0);

  const FailureSpec lower{Surface::Rudder, deg2rad(-30.0), deg2rad(jam_deg)};
  const FailureSpec upper{Surface::Rudder, deg2rad(jam_deg), deg2rad(30.0)};
  const TrimResult rl = solve_trim(t, lower, params);
  const TrimResult ru = solve_trim(t, upper, params);
  REQUIRE(rl.feasible());
  REQUIRE(ru.feasible());

  const FailureSpec jam{Surface::Rudder, deg2rad(jam_deg), deg2rad(jam_deg)};
  const TrimResult rj = solve_trim(t, jam, params);
  CHECK(rj.feasible());
  CHECK(rj.controls.rudder == deg2rad(jam_deg));
}

TEST_CASE("restricted surfaces stay inside their window") {
  const AircraftParams params = default_params();
  const FailureSpec f{Surface::Rudder, deg2rad(-5.0), deg2rad(-2.0)};
  const TrimResult r = solve_trim(level_target(100.0), f, params);
  REQUIRE(r.feasible());
  CHECK(r.controls.rudder >= f.lower - 1e-9);
  CHECK(r.controls.rudder <= f.upper + 1e-9);
  // A window away from zero forces a real sideslip.
  CHECK(std::abs(r.state.beta) > deg2rad(0.1));
}

TEST_CASE("warm and cold starts agree on the same trim") {
  const AircraftParams params = default_params();
  TrimTarget neighbor = level_target(85.0);
  neighbor.psidot = deg2rad(3.0);
  const TrimResult seed = solve_trim(neighbor, std::nullopt, params);
  REQUIRE(seed.feasible());

  TrimTarget t = level_target(90.0);
  t.psidot = deg2rad(3.0);
  const TrimResult cold = solve_trim(t, std::nullopt, params);
  const TrimResult warm = solve_trim(t, std::nullopt, params, {},
                                     std::make_pair(seed.state, seed.controls));
  REQUIRE(cold.feasible());
  REQUIRE(warm.feasible());
  CHECK(cold.residual <= 1e-7);
  CHECK(warm.residual <= 1e-7);
  CHECK(warm.state.alpha == doctest::Approx(cold.state.alpha).epsilon(1e-4));
  CHECK(warm.state.beta == doctest::Approx(cold.state.beta).epsilon(1e-4));
  CHECK(warm.state.phi == doctest::Approx(cold.state.phi).epsilon(1e-4));
  CHECK(warm.controls.throttle ==
        doctest::Approx(cold.controls.throttle).epsilon(1e-4));
  CHECK(warm.controls.elevator ==
        doctest::Approx(cold.controls.elevator).epsilon(1e-4));
}

TEST_CASE("opposite turn directions mirror the lateral solution") {
  const AircraftParams params = default_params();
  TrimTarget t = level_target(110.0);
  t.psidot = deg2rad(6.0);
  const TrimResult plus = solve_trim(t, std::nullopt, params);
  t.psidot = -t.psidot;
  const TrimResult minus = solve_trim(t, std::nullopt, params);
  REQUIRE(plus.feasible());
  REQUIRE(minus.feasible());
  CHECK(minus.state.beta == doctest::Approx(-plus.state.beta).epsilon(1e-5));
  CHECK(minus.state.phi == doctest::Approx(-plus.state.phi).epsilon(1e-5));
  CHECK(minus.state.p == doctest::Approx(-plus.state.p).epsilon(1e-5));
  CHECK(minus.state.r == doctest::Approx(-plus.state.r).epsilon(1e-5));
  CHECK(minus.controls.aileron ==
        doctest::Approx(-plus.controls.aileron).epsilon(1e-5));
  CHECK(minus.controls.rudder ==
        doctest::Approx(-plus.controls.rudder).epsilon(1e-5));
  CHECK(minus.state.alpha == doctest::Approx(plus.state.alpha).epsilon(1e-5));
  CHECK(minus.controls.throttle ==
        doctest::Approx(plus.controls.throttle).epsilon(1e-5));
}

TEST_CASE("pathological path angles fail gracefully") {
  const AircraftParams params = default_params();
  TrimTarget t = level_target(100.0);
  t.gamma = deg2rad(89.0);
  const TrimResult r = solve_trim(t, std::nullopt, params);
  CHECK(!r.feasible());
}

TEST_CASE("status names round-trip") {
  for (TrimStatus s : {TrimStatus::Infeasible, TrimStatus::Stable,
                       TrimStatus::UnstableControllable,
                       TrimStatus::UnstableUncontrollable}) {
    CHECK(trim_status_from_name(trim_status_name(s)) == s);
  }
  CHECK(active_constraints_to_string(0) == "none");
}
