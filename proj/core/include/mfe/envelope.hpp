#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mfe/failure.hpp"
#include "mfe/params.hpp"
#include "mfe/trim.hpp"

namespace mfe {

// Uniformly spaced sweep axis. Values are min + i * step for i in [0, count).
struct AxisSpec {
  double min = 0.0;
  double step = 1.0;
  int count = 0;

  double value(int i) const { return min + i * step; }
  double max() const { return count > 0 ? value(count - 1) : min; }

  // Inclusive range; count is rounded so the last point lands on hi when
  // (hi - lo) is an integer multiple of step.
  static AxisSpec from_range(double lo, double hi, double step);

  bool operator==(const AxisSpec&) const = default;
};

// Grid definition for envelope sweeps. Axis units match the file formats:
// knots, degrees, degrees per second, feet.
struct GridSpec {
  AxisSpec v_kt;
  AxisSpec psidot_degps;
  AxisSpec gamma_deg;
  std::vector<double> altitudes_ft;

  bool operator==(const GridSpec&) const = default;
};

// Provenance recorded alongside each computed slice so result files can be
// traced back to their inputs.
struct SliceProvenance {
  std::string params_hash;
  std::optional<FailureSpec> failure;
  SolverConfig solver;
  std::string tool_version;
  bool mirrored = false;
};

// One fixed-(h, gamma) sheet of trim results over the (V, psidot) grid.
// Cells are stored row-major with V as the fast index.
struct EnvelopeSlice {
  double altitude_ft = 0.0;
  double gamma_deg = 0.0;
  AxisSpec v_kt;
  AxisSpec psidot_degps;
  std::vector<TrimResult> cells;
  SliceProvenance provenance;

  int index(int iv, int ip) const { return ip * v_kt.count + iv; }
  const TrimResult& at(int iv, int ip) const { return cells[index(iv, ip)]; }
  TrimResult& at(int iv, int ip) { return cells[index(iv, ip)]; }
  bool feasible(int iv, int ip) const { return at(iv, ip).feasible(); }
  bool in_grid(int iv, int ip) const {
    return iv >= 0 && iv < v_kt.count && ip >= 0 && ip < psidot_degps.count;
  }

  // Index of the psidot = 0 row. Throws if the axis does not contain zero.
  int j_zero() const;

  int feasible_count() const;
};

// Stack of slices over (altitude, gamma).
struct Envelope3D {
  GridSpec grid;
  std::vector<EnvelopeSlice> slices;  // ordered by (altitude, gamma)

  const EnvelopeSlice* find(double altitude_ft, double gamma_deg) const;
};

struct SweepOptions {
  bool warm_start = true;
  int parallelism = 0;  // 0 = hardware concurrency
  std::function<void(int done, int total)> progress;
};

// Sweeps one (h, gamma) slice. The psidot = 0 row is solved left to right,
// warm-starting each cell from its left neighbour; the remaining rows are
// marched outward in psidot per V column, warm-starting from the previous
// cell in the march. Warm failures are retried once from the cold start.
// Results are deterministic and independent of the parallelism level.
EnvelopeSlice sweep_slice(const AircraftParams& params, double altitude_ft,
                          double gamma_deg, const AxisSpec& v_kt,
                          const AxisSpec& psidot_degps,
                          const std::optional<FailureSpec>& failure = {},
                          const SolverConfig& config = {},
                          const SweepOptions& options = {});

Envelope3D sweep_3d(const AircraftParams& params, const GridSpec& grid,
                    const std::optional<FailureSpec>& failure = {},
                    const SolverConfig& config = {},
                    const SweepOptions& options = {});

// Builds the mirror-image slice (psidot -> -psidot) by negating the lateral
// state and control components of each cell. Requires laterally symmetric
// aircraft parameters and a psidot axis symmetric about zero; throws
// std::invalid_argument otherwise. The failure window in the returned
// provenance is mirrored along with the data.
EnvelopeSlice mirror_envelope(const EnvelopeSlice& slice,
                              const AircraftParams& params);

struct MirrorValidation {
  struct Sample {
    int iv = 0;
    int ip = 0;
    bool status_match = false;
    double max_abs_diff = 0.0;
  };
  std::vector<Sample> samples;
  bool passed = false;
  double tolerance = 0.0;
};

// Re-solves a few randomly chosen feasible cells of a mirrored slice from
// scratch and compares. Samples prefer cells adjacent to the infeasible
// region where mirror errors would surface first.
MirrorValidation validate_mirror(const EnvelopeSlice& mirrored,
                                 const AircraftParams& params,
                                 const SolverConfig& config, int sample_count,
                                 std::uint64_t seed, double tolerance = 1e-6);

}  // namespace mfe
