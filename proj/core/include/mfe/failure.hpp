#pragma once

#include <string>

#include "mfe/params.hpp"

namespace mfe {

enum class Surface { Aileron, Rudder, Elevator, Throttle };

const char* surface_name(Surface s);
Surface surface_from_name(const std::string& name);

// Restricted actuator window [lower, upper]; a jam is the degenerate case
// lower == upper.  Angles in radians, throttle unitless.
struct FailureSpec {
  Surface surface = Surface::Rudder;
  double lower = 0.0;
  double upper = 0.0;

  bool is_jam() const { return lower == upper; }
  std::string describe() const;
};

// Narrow the nominal constraint box to the failure window.  Throws
// std::invalid_argument when the window is inverted or not contained in the
// nominal one.
ConstraintConfig apply_failure(const ConstraintConfig& nominal,
                               const FailureSpec& failure);

// Failure with the window reflected about zero, i.e. [-upper, -lower] for
// lateral surfaces.  Elevator and throttle windows are unchanged by lateral
// mirroring.
FailureSpec mirror_failure(const FailureSpec& failure);

}  // namespace mfe
