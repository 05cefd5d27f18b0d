#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "mfe/atmosphere.hpp"
#include "mfe/flight_model.hpp"
#include "mfe/linear_analysis.hpp"
#include "mfe/trim.hpp"
#include "mfe/units.hpp"

namespace mfe {

namespace {

enum Var { kVarAlpha = 0, kVarBeta, kVarPhi, kVarThr, kVarEle, kVarAil, kVarRud };
constexpr int kNv = 7;

using Vec7 = Eigen::Matrix<double, kNv, 1>;
using Mat7 = Eigen::Matrix<double, kNv, kNv>;
using Vec8 = Eigen::Matrix<double, 8, 1>;
using Jac87 = Eigen::Matrix<double, 8, kNv>;

struct BoxBounds {
  Vec7 lo, hi;
};

BoxBounds make_bounds(const ConstraintConfig& lim) {
  BoxBounds b;
  b.lo << lim.alpha_min, -lim.beta_max, -lim.phi_max, lim.throttle.lower,
      lim.elevator.lower, lim.aileron.lower, lim.rudder.lower;
  b.hi << lim.alpha_max, lim.beta_max, lim.phi_max, lim.throttle.upper,
      lim.elevator.upper, lim.aileron.upper, lim.rudder.upper;
  return b;
}

Vec7 clip(const Vec7& z, const BoxBounds& b) {
  return z.cwiseMax(b.lo).cwiseMin(b.hi);
}

struct Evaluation {
  Vec8 res;          // weighted residual sqrt(Q)*xdot
  double J = 0.0;    // 0.5 * res.res
  double xdot_inf = 0.0;
  AircraftState state;
  Controls controls;
};

struct TrimProblem {
  const TrimTarget* target;
  const AircraftParams* params;
  Vec8 wsqrt;  // sqrt of the Q diagonal

  Evaluation eval(const Vec7& z) const {
    AircraftState x;
    x.V = target->V;
    x.h = target->h;
    x.alpha = z[kVarAlpha];
    x.beta = z[kVarBeta];
    x.phi = z[kVarPhi];
    x.theta = pitch_theta(x.alpha, x.beta, x.phi, target->gamma);
    const BodyRates w = required_rates(x.theta, x.phi, target->psidot);
    x.p = w.p;
    x.q = w.q;
    x.r = w.r;

    Controls u;
    u.throttle = z[kVarThr];
    u.elevator = z[kVarEle];
    u.aileron = z[kVarAil];
    u.rudder = z[kVarRud];

    const StateDeriv xdot = state_derivative(x, u, *params);
    Evaluation e;
    for (int i = 0; i < 8; ++i) {
      e.res[i] = wsqrt[i] * xdot[i];
      e.xdot_inf = std::max(e.xdot_inf, std::abs(xdot[i]));
    }
    e.J = 0.5 * e.res.squaredNorm();
    e.state = x;
    e.controls = u;
    return e;
  }
};

// Residual Jacobian by finite differences.  Central where the box allows,
// second-order one-sided into the box at a bound (this also keeps the stencil
// off the lift-curve break when alpha sits at its stall-side limit).
bool fd_column(const TrimProblem& prob, const Vec7& z, const BoxBounds& b,
               int i, double step, const Vec8& r0, Vec8& col) {
  const double room_up = b.hi[i] - z[i];
  const double room_dn = z[i] - b.lo[i];
  Vec7 zp = z, zm = z;
  for (double h = step; h > step * 1e-3; h *= 0.2) {
    try {
      if (room_up >= h && room_dn >= h) {
        zp[i] = z[i] + h;
        zm[i] = z[i] - h;
        col = (prob.eval(zp).res - prob.eval(zm).res) / (2.0 * h);
      } else if (room_up >= room_dn) {
        zp[i] = z[i] + h;
        zm[i] = z[i] + 2.0 * h;
        col = (-3.0 * r0 + 4.0 * prob.eval(zp).res - prob.eval(zm).res) / (2.0 * h);
      } else {
        zp[i] = z[i] - h;
        zm[i] = z[i] - 2.0 * h;
        col = (3.0 * r0 - 4.0 * prob.eval(zp).res + prob.eval(zm).res) / (2.0 * h);
      }
      return true;
    } catch (const TrimGeometryError&) {
      continue;  // shrink the step and retry
    }
  }
  return false;
}

std::uint16_t active_set_at(const Vec7& z, const BoxBounds& b) {
  constexpr double kTol = 1e-9;
  static const std::uint16_t lo_bits[kNv] = {
      kActiveAlphaLower, kActiveBetaLimit, kActiveBankLimit, kActiveThrottleLower,
      kActiveElevatorLL, kActiveAileronLL, kActiveRudderLL};
  static const std::uint16_t hi_bits[kNv] = {
      kActiveAlphaLimit, kActiveBetaLimit, kActiveBankLimit, kActiveThrottleUpper,
      kActiveElevatorUL, kActiveAileronUL, kActiveRudderUL};
  std::uint16_t active = 0;
  for (int i = 0; i < kNv; ++i) {
    if (b.hi[i] - b.lo[i] < 1e-15) continue;  // jammed: no freedom, not binding
    if (z[i] - b.lo[i] <= kTol) active |= lo_bits[i];
    if (b.hi[i] - z[i] <= kTol) active |= hi_bits[i];
  }
  return active;
}

}  // namespace

TrimResult solve_trim(const TrimTarget& target,
                      const std::optional<FailureSpec>& failure,
                      const AircraftParams& params, const SolverConfig& config,
                      const std::optional<std::pair<AircraftState, Controls>>& initial) {
  if (!(target.V > 0.0)) {
    throw std::invalid_argument("solve_trim: target airspeed must be positive");
  }
  isa_density(target.h);  // altitude range check up front

  const ConstraintConfig limits =
      failure ? apply_failure(params.limits, *failure) : params.limits;
  const BoxBounds bounds = make_bounds(limits);

  TrimProblem prob;
  prob.target = &target;
  prob.params = &params;
  for (int i = 0; i < 8; ++i) prob.wsqrt[i] = std::sqrt(config.q_diag[i]);

  Vec7 z;
  if (initial) {
    z << initial->first.alpha, initial->first.beta, initial->first.phi,
        initial->second.throttle, initial->second.elevator,
        initial->second.aileron, initial->second.rudder;
  } else {
    z << deg2rad(3.0), 0.0, 0.0, 0.5, 0.0, 0.0, 0.0;
  }
  z = clip(z, bounds);

  TrimResult out;
  out.target = target;

  Evaluation cur;
  try {
    cur = prob.eval(z);
  } catch (const TrimGeometryError&) {
    out.status = TrimStatus::Infeasible;
    out.reason = InfeasibleReason::Geometry;
    out.state = AircraftState{target.V, z[kVarAlpha], z[kVarBeta], 0, 0, 0,
                              z[kVarPhi], 0, target.h};
    out.controls = Controls{z[kVarThr], z[kVarEle], z[kVarAil], z[kVarRud]};
    out.residual = std::numeric_limits<double>::infinity();
    out.xdot_inf = std::numeric_limits<double>::infinity();
    return out;
  }

  const auto converged = [&](const Evaluation& e) {
    return e.J <= config.tol_J && e.xdot_inf <= config.tol_xdot_inf;
  };

  double lambda = 1e-3;
  bool stationary = false;
  int iter = 0;
  int stall_strikes = 0;

  while (iter < config.max_iterations && !converged(cur)) {
    ++iter;

    Jac87 Jm = Jac87::Zero();
    for (int i = 0; i < kNv; ++i) {
      if (bounds.hi[i] - bounds.lo[i] < 1e-15) continue;  // jammed variable
      const double step = config.fd_step * std::max(1.0, std::abs(z[i]));
      Vec8 col;
      if (fd_column(prob, z, bounds, i, step, cur.res, col)) Jm.col(i) = col;
    }

    Mat7 B = Jm.transpose() * Jm;
    Vec7 g = Jm.transpose() * cur.res;

    // Projected-gradient stationarity: binding bounds absorb the component
    // that pushes outward.
    double pg_inf = 0.0;
    std::array<bool, kNv> binding{};
    for (int i = 0; i < kNv; ++i) {
      const bool frozen = bounds.hi[i] - bounds.lo[i] < 1e-15;
      const bool at_lo = z[i] - bounds.lo[i] <= 1e-12 && g[i] > 0.0;
      const bool at_hi = bounds.hi[i] - z[i] <= 1e-12 && g[i] < 0.0;
      binding[i] = frozen || at_lo || at_hi;
      if (!binding[i]) pg_inf = std::max(pg_inf, std::abs(g[i]));
    }
    if (pg_inf < 1e-11) {
      stationary = true;
      break;
    }

    bool accepted = false;
    for (int attempt = 0; attempt < 14; ++attempt) {
      Mat7 H = B;
      Vec7 rhs = -g;
      for (int i = 0; i < kNv; ++i) {
        H(i, i) += lambda * (B(i, i) + 1e-12);
        if (binding[i]) {
          H.row(i).setZero();
          H.col(i).setZero();
          H(i, i) = 1.0;
          rhs[i] = 0.0;
        }
      }
      const Vec7 d = H.ldlt().solve(rhs);
      const Vec7 z_try = clip(z + d, bounds);
      if ((z_try - z).cwiseAbs().maxCoeff() < 1e-15) {
        lambda *= 10.0;
        continue;
      }
      try {
        const Evaluation next = prob.eval(z_try);
        if (next.J < cur.J) {
          if (cur.J - next.J < 1e-18 && next.J > config.tol_J) ++stall_strikes;
          z = z_try;
          cur = next;
          lambda = std::max(lambda * 0.3, 1e-12);
          accepted = true;
          break;
        }
      } catch (const TrimGeometryError&) {
        // fall through to damping increase
      }
      lambda *= 10.0;
    }
    if (!accepted || stall_strikes >= 3) {
      stationary = accepted;
      break;
    }
  }

  out.state = cur.state;
  out.controls = cur.controls;
  out.residual = cur.J;
  out.xdot_inf = cur.xdot_inf;
  out.iterations = iter;
  out.active = active_set_at(z, bounds);

  if (!converged(cur)) {
    out.status = TrimStatus::Infeasible;
    out.reason = (stationary || iter < config.max_iterations)
                     ? InfeasibleReason::ConstraintBound
                     : InfeasibleReason::NoConvergence;
    return out;
  }

  out.status = TrimStatus::Stable;
  out.reason = InfeasibleReason::None;
  if (config.classify_stability) {
    out.status = classify(out, params, failure);
  }
  return out;
}

}  // namespace mfe
