#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfe/boundary.hpp"
#include "mfe/envelope.hpp"
#include "mfe/failure.hpp"
#include "mfe/params.hpp"

namespace mfe {

// Malformed, truncated, or mis-headed input file.
class FileFormatError : public std::runtime_error {
 public:
  explicit FileFormatError(const std::string& what)
      : std::runtime_error(what) {}
};

// Aircraft parameter files are JSON.  Aerodynamic derivatives are per radian
// as usual, but angle-valued entries (alpha_crit, actuator windows) are in
// degrees for easy editing.  load_params validates the result and throws
// std::invalid_argument when the set is unusable.
AircraftParams load_params(const std::string& path);
void save_params(const AircraftParams& params, const std::string& path);

// One envelope computation in a run manifest: nominal when failure is empty,
// or a jam / restriction case.  When mirror_of names another case, the slice
// is built by mirroring that case's result instead of sweeping.
struct CaseSpec {
  std::string name;
  std::optional<FailureSpec> failure;
  std::optional<std::string> mirror_of;
};

struct RunManifest {
  std::optional<std::string> params_path;  // relative to the manifest
  GridSpec grid;
  std::vector<CaseSpec> cases;
  int validation_samples = 3;      // spot checks per mirrored slice
  std::uint64_t validation_seed = 20260823;
};

RunManifest load_manifest(const std::string& path);

// Envelope slices are CSV with a "# key = value" provenance header.  Numbers
// are written with enough digits to round-trip exactly, and the header
// carries no timestamps, so re-running a sweep reproduces the file byte for
// byte.  Writes go to a temporary file that is renamed into place.  Readers
// refuse files without the expected header.
void save_envelope_slice(const EnvelopeSlice& slice, const std::string& path);
EnvelopeSlice load_envelope_slice(const std::string& path);

// Canonical file name for a case slice: <case>_h<alt>ft_g<gamma>deg.csv.
std::string slice_filename(const std::string& case_name, double altitude_ft,
                           double gamma_deg);

void save_boundary_report(const BoundaryReport& report,
                          const EnvelopeSlice& slice, const std::string& path);

void save_separation_report(const SeparationReport& report,
                            const std::string& path);

// Plot-ready exports.  Each writes a CSV; when svg_path is given a
// self-contained SVG rendering is written as well.

void write_envelope_plotdata(const EnvelopeSlice& slice,
                             const std::string& csv_path,
                             const std::optional<std::string>& svg_path = {});

void write_boundary_plotdata(const BoundaryReport& report,
                             const EnvelopeSlice& slice,
                             const std::string& csv_path,
                             const std::optional<std::string>& svg_path = {});

// Full-throttle thrust available vs level-flight thrust required over a
// speed range, one curve pair per altitude.
void write_thrust_curves(const AircraftParams& params,
                         const std::vector<double>& altitudes_ft,
                         double v_min_kt, double v_max_kt, double step_kt,
                         const std::string& csv_path,
                         const std::optional<std::string>& svg_path = {});

// Trim state and control traces along the psidot = 0 row of a slice.
void write_state_traces(const EnvelopeSlice& slice, const std::string& csv_path,
                        const std::optional<std::string>& svg_path = {});

}  // namespace mfe
