#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mfe/envelope.hpp"
#include "mfe/params.hpp"

namespace mfe {

// What stops the envelope from extending past a boundary cell.
enum class LimitingFactor {
  StallAlpha,
  AileronSaturation,
  RudderSaturation,
  ElevatorSaturation,
  ThrustSaturation,
  BankOnly,
  Mixed,
};

std::string factor_name(LimitingFactor f);
LimitingFactor factor_from_name(const std::string& name);

// How close to a limit a quantity must sit to count as causing the boundary.
struct FactorTolerances {
  double alpha_rad = 8.72664625997164785e-4;    // 0.05 deg
  double surface_rad = 8.72664625997164785e-4;  // 0.05 deg
  double bank_rad = 8.72664625997164785e-4;     // 0.05 deg
  double throttle = 0.005;
};

// Ordered contour of the feasible region.  The walk starts at the lowest-V
// feasible cell of the psidot = 0 row and proceeds counterclockwise in the
// (V, psidot) plane, so the negative-psidot half comes first.  Boundary cells
// the main contour cannot reach (interior holes, disconnected islands) are
// collected in extras.
struct BoundaryTrace {
  std::vector<std::pair<int, int>> walk;    // (iv, ip), counterclockwise
  std::vector<std::pair<int, int>> extras;  // deterministic scan order
};

BoundaryTrace extract_boundary(const EnvelopeSlice& slice);

struct BoundaryPoint {
  int iv = 0;
  int ip = 0;
  double v_kt = 0.0;
  double psidot_degps = 0.0;
  LimitingFactor factor = LimitingFactor::Mixed;
  std::vector<LimitingFactor> components;  // contributors when factor == Mixed
  const TrimResult* cell = nullptr;        // points into the analyzed slice
};

struct BoundaryReport {
  BoundaryTrace trace;
  std::vector<BoundaryPoint> points;  // walk order, then extras
};

// Classifies a single boundary cell.  Saturations at the cell's own trim
// point win; otherwise the best points of adjacent infeasible cells are
// examined; a bank limit with no saturation anywhere reports BankOnly; as a
// last resort the smallest normalized margin decides.
LimitingFactor classify_limiting_factor(const EnvelopeSlice& slice, int iv,
                                        int ip, const AircraftParams& params,
                                        const FactorTolerances& tol = {},
                                        std::vector<LimitingFactor>* components = nullptr);

BoundaryReport analyze_boundary(const EnvelopeSlice& slice,
                                const AircraftParams& params,
                                const FactorTolerances& tol = {});

// Feasible / infeasible grid mask, detached from the trim data so masks from
// different runs can be compared cheaply.
struct FeasibilityMask {
  AxisSpec v_kt;
  AxisSpec psidot_degps;
  std::vector<std::uint8_t> cells;

  int index(int iv, int ip) const { return ip * v_kt.count + iv; }
  bool at(int iv, int ip) const { return cells[index(iv, ip)] != 0; }
  int count() const;

  bool operator==(const FeasibilityMask&) const = default;
};

FeasibilityMask feasibility_mask(const EnvelopeSlice& slice);

// Cell-wise AND.  Throws std::invalid_argument when the axes differ.
FeasibilityMask intersect_masks(const FeasibilityMask& a,
                                const FeasibilityMask& b);

struct MaskDiff {
  std::vector<std::pair<int, int>> only_in_a;
  std::vector<std::pair<int, int>> only_in_b;
  bool equal() const { return only_in_a.empty() && only_in_b.empty(); }
};

MaskDiff compare_masks(const FeasibilityMask& a, const FeasibilityMask& b);

// Cells feasible in inner but not in outer (empty means inner is a subset).
std::vector<std::pair<int, int>> subset_violations(const FeasibilityMask& inner,
                                                   const FeasibilityMask& outer);

// How a reduced envelope pulled back from a reference one, side by side.
// Left/right refer to the psidot extremes (negative = left turn), top/bottom
// to the V extremes.  A side is attached when the reduced envelope still
// reaches the reference extreme to within one grid cell.
struct SeparationReport {
  struct Side {
    int retreat_cells = 0;
    double retreat_units = 0.0;  // deg/s for left/right, kt for top/bottom
    bool attached = true;
    int lost_cells = 0;  // feasible in reference but not in reduced, this half
  };
  Side left, right, top, bottom;
  std::string most_affected = "none";
};

SeparationReport separation_report(const FeasibilityMask& reference,
                                   const FeasibilityMask& reduced);

// Closed-form performance estimates used to cross-check the swept envelope.
// All arguments SI (meters, m/s, radians); thrust in newtons.

double load_factor(double phi);

// 1g stall speed at altitude, scaled by sqrt(n) for a banked turn.
double stall_speed(const AircraftParams& params, double h_m, double phi = 0.0);

// Thrust needed for a steady climb at angle gamma in a phi-banked turn,
// including the sideslip drag penalty when beta is nonzero.
double thrust_required(const AircraftParams& params, double h_m, double V,
                       double gamma, double phi = 0.0, double beta = 0.0);

// Best-case climb angle at full throttle, from the static-thrust lapse and
// the minimum-drag speed; the thrust speed falloff is ignored.
double max_climb_angle(const AircraftParams& params, double h_m,
                       double phi = 0.0);

}  // namespace mfe
