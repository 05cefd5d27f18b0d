#pragma once

#include <Eigen/Core>
#include <complex>
#include <optional>
#include <vector>

#include "mfe/failure.hpp"
#include "mfe/params.hpp"
#include "mfe/state.hpp"
#include "mfe/trim.hpp"

namespace mfe {

// Control-vector slot order used for B columns and control_indices.
enum ControlIndex : int {
  kCtrlThrottle = 0,
  kCtrlElevator = 1,
  kCtrlAileron = 2,
  kCtrlRudder = 3,
};

struct LinearModel {
  Eigen::Matrix<double, 8, 8> A;
  Eigen::Matrix<double, 8, Eigen::Dynamic> B;  // one column per movable control
  AircraftState x_ref;
  Controls u_ref;
  std::vector<int> control_indices;  // ControlIndex of each B column
};

struct LinearizeOptions {
  double rel_step = 1e-5;
  double abs_floor = 1e-7;
};

// Central-difference linearization about a converged trim.  A jammed surface
// (failure window of zero width) contributes no B column.  Throws
// std::invalid_argument when the point is not trimmed to 1e-6.
LinearModel linearize(const AircraftState& x, const Controls& u,
                      const AircraftParams& params,
                      const std::optional<FailureSpec>& failure = std::nullopt,
                      const LinearizeOptions& options = {});

enum class StabilityClass { Stable, Marginal, Unstable };

struct StabilityAssessment {
  StabilityClass cls = StabilityClass::Stable;
  double max_real = 0.0;
  std::array<std::complex<double>, 8> eigenvalues;
};

// Spectral stability with a symmetric dead band of width eps around zero:
// eigenvalues with |Re| <= eps count as marginal.
StabilityAssessment stability(const LinearModel& model, double eps = 1e-8);

// Numerical rank of [B AB ... A^7 B] from its singular values with threshold
// sigma_max * 8 * machine epsilon.
int controllability_rank(const LinearModel& model);

// Refine a feasible trim's status: stable, or unstable split by
// controllability of the remaining (non-jammed) effectors.  Marginal points
// are treated as unstable and then checked for controllability.
TrimStatus classify(const TrimResult& trim, const AircraftParams& params,
                    const std::optional<FailureSpec>& failure = std::nullopt);

}  // namespace mfe
