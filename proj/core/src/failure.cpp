#include "mfe/failure.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "mfe/units.hpp"

namespace mfe {

const char* surface_name(Surface s) {
  switch (s) {
    case Surface::Aileron: return "aileron";
    case Surface::Rudder: return "rudder";
    case Surface::Elevator: return "elevator";
    case Surface::Throttle: return "throttle";
  }
  return "?";
}

Surface surface_from_name(const std::string& name) {
  for (Surface s : {Surface::Aileron, Surface::Rudder, Surface::Elevator,
                    Surface::Throttle}) {
    if (name == surface_name(s)) {
      return s;
    }
  }
  throw std::invalid_argument("unknown control surface '" + name + "'");
}

std::string FailureSpec::describe() const {
  char buf[96];
  if (surface == Surface::Throttle) {
    std::snprintf(buf, sizeof(buf), "%s [%g, %g]", surface_name(surface), lower, upper);
  } else {
    std::snprintf(buf, sizeof(buf), "%s [%g, %g] deg", surface_name(surface),
                  rad2deg(lower), rad2deg(upper));
  }
  return buf;
}

ConstraintConfig apply_failure(const ConstraintConfig& nominal,
                               const FailureSpec& failure) {
  if (failure.lower > failure.upper) {
    throw std::invalid_argument("failure window has lower > upper: " +
                                failure.describe());
  }
  const Window* nom = nullptr;
  ConstraintConfig out = nominal;
  Window* dst = nullptr;
  switch (failure.surface) {
    case Surface::Aileron: nom = &nominal.aileron; dst = &out.aileron; break;
    case Surface::Rudder: nom = &nominal.rudder; dst = &out.rudder; break;
    case Surface::Elevator: nom = &nominal.elevator; dst = &out.elevator; break;
    case Surface::Throttle: nom = &nominal.throttle; dst = &out.throttle; break;
  }
  if (failure.lower < nom->lower || failure.upper > nom->upper) {
    throw std::invalid_argument("failure window " + failure.describe() +
                                " exceeds the nominal actuator range");
  }
  *dst = {failure.lower, failure.upper};
  return out;
}

FailureSpec mirror_failure(const FailureSpec& failure) {
  FailureSpec m = failure;
  if (failure.surface == Surface::Aileron || failure.surface == Surface::Rudder) {
    m.lower = -failure.upper;
    m.upper = -failure.lower;
  }
  return m;
}

}  // namespace mfe
