#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mfe/failure.hpp"
#include "mfe/params.hpp"
#include "mfe/state.hpp"

namespace mfe {

// Steady-state target: hold altitude, airspeed, flight-path angle and turn
// rate simultaneously.
struct TrimTarget {
  double h = 0.0;       // [m]
  double V = 0.0;       // [m/s]
  double gamma = 0.0;   // flight-path angle [rad]
  double psidot = 0.0;  // turn rate [rad/s]
};

struct SolverConfig {
  std::array<double, 8> q_diag = {1, 1, 1, 1, 1, 1, 1, 1};  // residual weights
  double tol_J = 1e-7;          // convergence threshold on J = 0.5*xdot'Q xdot
  double tol_xdot_inf = 1e-7;   // feasibility threshold on max |xdot_i|
  double constraint_tol = 1e-6;
  int max_iterations = 150;
  double fd_step = 1e-5;        // decision-variable perturbation for Jacobians
  bool classify_stability = true;
};

enum class TrimStatus {
  Infeasible,
  Stable,
  UnstableControllable,
  UnstableUncontrollable,
};

enum class InfeasibleReason { None, ConstraintBound, NoConvergence, Geometry };

// Bit flags identifying which box constraints are binding at a solution (or
// at the best point of a failed solve).
enum ActiveConstraint : std::uint16_t {
  kActiveAlphaLimit = 1u << 0,   // alpha at its upper (stall-side) bound
  kActiveAlphaLower = 1u << 1,
  kActiveBetaLimit = 1u << 2,
  kActiveBankLimit = 1u << 3,
  kActiveThrottleUpper = 1u << 4,
  kActiveThrottleLower = 1u << 5,
  kActiveElevatorUL = 1u << 6,
  kActiveElevatorLL = 1u << 7,
  kActiveAileronUL = 1u << 8,
  kActiveAileronLL = 1u << 9,
  kActiveRudderUL = 1u << 10,
  kActiveRudderLL = 1u << 11,
};

std::string active_constraints_to_string(std::uint16_t active);

struct TrimResult {
  TrimTarget target;
  AircraftState state;   // best point found (valid even when infeasible)
  Controls controls;
  double residual = 0.0;    // J at the reported point
  double xdot_inf = 0.0;    // max-norm of the state derivative
  TrimStatus status = TrimStatus::Infeasible;
  InfeasibleReason reason = InfeasibleReason::None;
  std::uint16_t active = 0;
  int iterations = 0;

  bool feasible() const { return status != TrimStatus::Infeasible; }
};

const char* trim_status_name(TrimStatus s);
TrimStatus trim_status_from_name(const std::string& name);

struct TrimGeometryError : std::domain_error {
  using std::domain_error::domain_error;
};

// Pitch attitude satisfying the flight-path relation
//   sin(gamma) = a*sin(theta) - b*cos(theta),
//   a = cos(alpha)cos(beta), b = sin(phi)sin(beta) + cos(phi)sin(alpha)cos(beta)
// on the |theta| < 90 deg branch.  Throws TrimGeometryError when
// a^2 - sin^2(gamma) <= 0.
double pitch_theta(double alpha, double beta, double phi, double gamma);

struct BodyRates {
  double p = 0.0, q = 0.0, r = 0.0;
};

// Body rates of a steady turn at rate psidot with attitude (phi, theta).
BodyRates required_rates(double theta, double phi, double psidot);

// Diagnostic bundle: equality-constraint residuals of a candidate trim plus
// signed margins to every box constraint (negative = violated).
struct ConstraintResiduals {
  double dh = 0.0;
  double dV = 0.0;
  double flight_path = 0.0;  // sin(gamma*) - (a sin(theta) - b cos(theta))
  double dp = 0.0, dq = 0.0, dr = 0.0;

  struct Margin {
    const char* name;
    double value;
  };
  std::vector<Margin> margins;

  double max_equality_abs() const;
  double min_margin() const;
};

ConstraintResiduals constraint_residuals(const AircraftState& x, const Controls& u,
                                         const TrimTarget& target,
                                         const ConstraintConfig& limits);

// Find the control/attitude combination that holds the target steady state.
// Decision variables are (alpha, beta, phi, throttle, elevator, aileron,
// rudder); theta and the body rates are eliminated through pitch_theta and
// required_rates.  A failure narrows the relevant actuator window.  The
// returned status is refined by the stability/controllability classifier
// unless config.classify_stability is false (feasible points then report
// Stable).
TrimResult solve_trim(const TrimTarget& target,
                      const std::optional<FailureSpec>& failure,
                      const AircraftParams& params,
                      const SolverConfig& config = {},
                      const std::optional<std::pair<AircraftState, Controls>>&
                          initial = std::nullopt);

}  // namespace mfe
