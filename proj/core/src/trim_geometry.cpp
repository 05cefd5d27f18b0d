#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mfe/trim.hpp"

namespace mfe {

double pitch_theta(double alpha, double beta, double phi, double gamma) {
  const double a = std::cos(alpha) * std::cos(beta);
  const double b = std::sin(phi) * std::sin(beta) +
                   std::cos(phi) * std::sin(alpha) * std::cos(beta);
  const double sg = std::sin(gamma);
  const double denom = a * a - sg * sg;
  if (!(denom > 0.0)) {
    throw TrimGeometryError(
        "pitch_theta: no |theta| < 90 deg solution (cos(alpha)cos(beta) too "
        "small for the requested flight-path angle)");
  }
  const double num = a * b + sg * std::sqrt(denom + b * b);
  return std::atan(num / denom);
}

BodyRates required_rates(double theta, double phi, double psidot) {
  BodyRates w;
  w.p = -psidot * std::sin(theta);
  w.q = psidot * std::cos(theta) * std::sin(phi);
  w.r = psidot * std::cos(theta) * std::cos(phi);
  return w;
}

double ConstraintResiduals::max_equality_abs() const {
  double m = 0.0;
  for (double v : {dh, dV, flight_path, dp, dq, dr}) {
    m = std::max(m, std::abs(v));
  }
  return m;
}

double ConstraintResiduals::min_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (const Margin& mg : margins) m = std::min(m, mg.value);
  return m;
}

ConstraintResiduals constraint_residuals(const AircraftState& x, const Controls& u,
                                         const TrimTarget& target,
                                         const ConstraintConfig& limits) {
  ConstraintResiduals r;
  r.dh = x.h - target.h;
  r.dV = x.V - target.V;

  const double a = std::cos(x.alpha) * std::cos(x.beta);
  const double b = std::sin(x.phi) * std::sin(x.beta) +
                   std::cos(x.phi) * std::sin(x.alpha) * std::cos(x.beta);
  r.flight_path = std::sin(target.gamma) -
                  (a * std::sin(x.theta) - b * std::cos(x.theta));

  const BodyRates w = required_rates(x.theta, x.phi, target.psidot);
  r.dp = x.p - w.p;
  r.dq = x.q - w.q;
  r.dr = x.r - w.r;

  r.margins = {
      {"alpha_max", limits.alpha_max - x.alpha},
      {"alpha_min", x.alpha - limits.alpha_min},
      {"beta_max", limits.beta_max - std::abs(x.beta)},
      {"phi_max", limits.phi_max - std::abs(x.phi)},
      {"throttle_upper", limits.throttle.upper - u.throttle},
      {"throttle_lower", u.throttle - limits.throttle.lower},
      {"elevator_upper", limits.elevator.upper - u.elevator},
      {"elevator_lower", u.elevator - limits.elevator.lower},
      {"aileron_upper", limits.aileron.upper - u.aileron},
      {"aileron_lower", u.aileron - limits.aileron.lower},
      {"rudder_upper", limits.rudder.upper - u.rudder},
      {"rudder_lower", u.rudder - limits.rudder.lower},
  };
  return r;
}

const char* trim_status_name(TrimStatus s) {
  switch (s) {
    case TrimStatus::Infeasible: return "infeasible";
    case TrimStatus::Stable: return "stable";
    case TrimStatus::UnstableControllable: return "unstable-controllable";
    case TrimStatus::UnstableUncontrollable: return "unstable-uncontrollable";
  }
  return "?";
}

TrimStatus trim_status_from_name(const std::string& name) {
  if (name == "infeasible") return TrimStatus::Infeasible;
  if (name == "stable") return TrimStatus::Stable;
  if (name == "unstable-controllable") return TrimStatus::UnstableControllable;
  if (name == "unstable-uncontrollable") return TrimStatus::UnstableUncontrollable;
  throw std::invalid_argument("unknown trim status '" + name + "'");
}

std::string active_constraints_to_string(std::uint16_t active) {
  static const struct {
    std::uint16_t bit;
    const char* name;
  } kNames[] = {
      {kActiveAlphaLimit, "AlphaLimit"},     {kActiveAlphaLower, "AlphaLower"},
      {kActiveBetaLimit, "BetaLimit"},       {kActiveBankLimit, "BankLimit"},
      {kActiveThrottleUpper, "ThrottleUpper"}, {kActiveThrottleLower, "ThrottleLower"},
      {kActiveElevatorUL, "ElevatorUL"},     {kActiveElevatorLL, "ElevatorLL"},
      {kActiveAileronUL, "AileronUL"},       {kActiveAileronLL, "AileronLL"},
      {kActiveRudderUL, "RudderUL"},         {kActiveRudderLL, "RudderLL"},
  };
  std::string out;
  for (const auto& n : kNames) {
    if (active & n.bit) {
      if (!out.empty()) out += "+";
      out += n.name;
    }
  }
  if (out.empty()) out = "none";
  return out;
}

}  // namespace mfe
