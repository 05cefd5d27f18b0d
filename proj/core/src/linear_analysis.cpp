#include "mfe/linear_analysis.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mfe/flight_model.hpp"

namespace mfe {

namespace {

Eigen::Matrix<double, 8, 1> deriv_vec(const AircraftState& x, const Controls& u,
                                      const AircraftParams& params) {
  const StateDeriv d = state_derivative(x, u, params);
  Eigen::Matrix<double, 8, 1> v;
  for (int i = 0; i < 8; ++i) v[i] = d[i];
  return v;
}

// Central difference with step shrinking when a perturbation leaves the model
// domain (airspeed through zero, pitch at the pole, atmosphere range).
template <typename Perturb>
Eigen::Matrix<double, 8, 1> fd_central(double step, Perturb&& eval_at) {
  for (int attempt = 0; attempt < 6; ++attempt, step *= 0.5) {
    try {
      return (eval_at(step) - eval_at(-step)) / (2.0 * step);
    } catch (const std::domain_error&) {
      if (attempt == 5) throw;
    }
  }
  throw std::domain_error("linearize: perturbation left the model domain");
}

}  // namespace

LinearModel linearize(const AircraftState& x, const Controls& u,
                      const AircraftParams& params,
                      const std::optional<FailureSpec>& failure,
                      const LinearizeOptions& options) {
  {
    const StateDeriv d0 = state_derivative(x, u, params);
    double inf = 0.0;
    for (double v : d0) inf = std::max(inf, std::abs(v));
    if (inf > 1e-6) {
      throw std::invalid_argument(
          "linearize: point is not a converged trim (||xdot|| > 1e-6)");
    }
  }

  LinearModel m;
  m.x_ref = x;
  m.u_ref = u;

  std::array<double, 8> xs = to_array(x);
  for (int j = 0; j < 8; ++j) {
    const double step = std::max(options.rel_step * std::abs(xs[j]), options.abs_floor);
    m.A.col(j) = fd_central(step, [&](double h) {
      std::array<double, 8> xp = xs;
      xp[j] += h;
      return deriv_vec(from_array(xp, x.h), u, params);
    });
  }

  const ConstraintConfig lim =
      failure ? apply_failure(params.limits, *failure) : params.limits;
  const Window* windows[4] = {&lim.throttle, &lim.elevator, &lim.aileron, &lim.rudder};
  for (int j = 0; j < 4; ++j) {
    if (windows[j]->width() < 1e-15) continue;  // jammed: no control authority
    m.control_indices.push_back(j);
  }
  m.B.resize(8, static_cast<int>(m.control_indices.size()));
  for (int k = 0; k < m.B.cols(); ++k) {
    const int j = m.control_indices[static_cast<std::size_t>(k)];
    double* fields[4] = {nullptr, nullptr, nullptr, nullptr};
    Controls up = u;
    fields[kCtrlThrottle] = &up.throttle;
    fields[kCtrlElevator] = &up.elevator;
    fields[kCtrlAileron] = &up.aileron;
    fields[kCtrlRudder] = &up.rudder;
    const double base = *fields[j];
    const double step = std::max(options.rel_step * std::abs(base), options.abs_floor);
    m.B.col(k) = fd_central(step, [&](double h) {
      *fields[j] = base + h;
      return deriv_vec(x, up, params);
    });
  }
  return m;
}

StabilityAssessment stability(const LinearModel& model, double eps) {
  Eigen::EigenSolver<Eigen::Matrix<double, 8, 8>> solver(model.A);
  StabilityAssessment s;
  s.max_real = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 8; ++i) {
    s.eigenvalues[static_cast<std::size_t>(i)] = solver.eigenvalues()[i];
    s.max_real = std::max(s.max_real, solver.eigenvalues()[i].real());
  }
  if (s.max_real < -eps) {
    s.cls = StabilityClass::Stable;
  } else if (s.max_real <= eps) {
    s.cls = StabilityClass::Marginal;
  } else {
    s.cls = StabilityClass::Unstable;
  }
  return s;
}

int controllability_rank(const LinearModel& model) {
  const int nu = static_cast<int>(model.B.cols());
  if (nu == 0) return 0;
  Eigen::MatrixXd C(8, 8 * nu);
  Eigen::MatrixXd block = model.B;
  for (int k = 0; k < 8; ++k) {
    C.block(0, k * nu, 8, nu) = block;
    block = model.A * block;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(C);
  const auto& sv = svd.singularValues();
  const double tol = sv[0] * 8.0 * std::numeric_limits<double>::epsilon();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv[i] > tol) ++rank;
  }
  return rank;
}

TrimStatus classify(const TrimResult& trim, const AircraftParams& params,
                    const std::optional<FailureSpec>& failure) {
  if (trim.status == TrimStatus::Infeasible) return TrimStatus::Infeasible;
  const LinearModel model = linearize(trim.state, trim.controls, params, failure);
  const StabilityAssessment s = stability(model);
  if (s.cls == StabilityClass::Stable) return TrimStatus::Stable;
  return controllability_rank(model) == 8 ? TrimStatus::UnstableControllable
                                          : TrimStatus::UnstableUncontrollable;
}

}  // namespace mfe
