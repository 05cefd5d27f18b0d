#include "mfe/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "mfe/atmosphere.hpp"
#include "mfe/flight_model.hpp"
#include "mfe/units.hpp"

namespace mfe {

std::string factor_name(LimitingFactor f) {
  switch (f) {
    case LimitingFactor::StallAlpha:
      return "StallAlpha";
    case LimitingFactor::AileronSaturation:
      return "AileronSaturation";
    case LimitingFactor::RudderSaturation:
      return "RudderSaturation";
    case LimitingFactor::ElevatorSaturation:
      return "ElevatorSaturation";
    case LimitingFactor::ThrustSaturation:
      return "ThrustSaturation";
    case LimitingFactor::BankOnly:
      return "BankOnly";
    case LimitingFactor::Mixed:
      return "Mixed";
  }
  throw std::logic_error("factor_name: unknown factor");
}

LimitingFactor factor_from_name(const std::string& name) {
  for (LimitingFactor f :
       {LimitingFactor::StallAlpha, LimitingFactor::AileronSaturation,
        LimitingFactor::RudderSaturation, LimitingFactor::ElevatorSaturation,
        LimitingFactor::ThrustSaturation, LimitingFactor::BankOnly,
        LimitingFactor::Mixed}) {
    if (factor_name(f) == name) {
      return f;
    }
  }
  throw std::invalid_argument("factor_from_name: unknown factor '" + name +
                              "'");
}

namespace {

struct Cell {
  int iv = 0;
  int ip = 0;
  bool operator==(const Cell&) const = default;
};

// Moore neighbourhood, counterclockwise starting east.
constexpr int kOffsets[8][2] = {{1, 0},  {1, 1},   {0, 1},  {-1, 1},
                                {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};

int direction_index(int dv, int dp) {
  for (int d = 0; d < 8; ++d) {
    if (kOffsets[d][0] == dv && kOffsets[d][1] == dp) {
      return d;
    }
  }
  throw std::logic_error("direction_index: cells are not adjacent");
}

bool is_boundary_cell(const EnvelopeSlice& s, int iv, int ip) {
  if (!s.feasible(iv, ip)) {
    return false;
  }
  constexpr int kDi[4] = {1, -1, 0, 0};
  constexpr int kDj[4] = {0, 0, 1, -1};
  for (int k = 0; k < 4; ++k) {
    const int nv = iv + kDi[k];
    const int np = ip + kDj[k];
    if (!s.in_grid(nv, np) || !s.feasible(nv, np)) {
      return true;
    }
  }
  return false;
}

}  // namespace

BoundaryTrace extract_boundary(const EnvelopeSlice& slice) {
  BoundaryTrace trace;

  auto feasible_at = [&slice](Cell c) {
    return slice.in_grid(c.iv, c.ip) && slice.feasible(c.iv, c.ip);
  };

  // Start at the lowest-V feasible cell of the psidot = 0 row; fall back to
  // the overall leftmost feasible cell.  Either way the west neighbour is
  // background, which anchors the first scan.
  Cell start{-1, -1};
  const int j0 = slice.j_zero();
  for (int iv = 0; iv < slice.v_kt.count && start.iv < 0; ++iv) {
    if (slice.feasible(iv, j0)) {
      start = {iv, j0};
    }
  }
  for (int iv = 0; iv < slice.v_kt.count && start.iv < 0; ++iv) {
    for (int ip = 0; ip < slice.psidot_degps.count && start.iv < 0; ++ip) {
      if (slice.feasible(iv, ip)) {
        start = {iv, ip};
      }
    }
  }
  if (start.iv < 0) {
    return trace;  // empty envelope
  }

  trace.walk.emplace_back(start.iv, start.ip);

  Cell b = start;
  Cell backtrack{start.iv - 1, start.ip};
  const int guard_limit =
      4 * slice.v_kt.count * slice.psidot_degps.count + 16;
  for (int guard = 0; guard < guard_limit; ++guard) {
    const int dc = direction_index(backtrack.iv - b.iv, backtrack.ip - b.ip);
    Cell next{-1, -1};
    Cell last_bg = backtrack;
    for (int k = 1; k <= 8; ++k) {
      const int d = (dc + k) % 8;
      const Cell n{b.iv + kOffsets[d][0], b.ip + kOffsets[d][1]};
      if (feasible_at(n)) {
        next = n;
        break;
      }
      last_bg = n;
    }
    if (next.iv < 0 || next == start) {
      break;  // isolated cell, or the contour closed
    }
    trace.walk.emplace_back(next.iv, next.ip);
    backtrack = last_bg;
    b = next;
  }

  // Boundary cells the contour never reached: hole rims, other components.
  std::set<std::pair<int, int>> visited(trace.walk.begin(), trace.walk.end());
  for (int ip = 0; ip < slice.psidot_degps.count; ++ip) {
    for (int iv = 0; iv < slice.v_kt.count; ++iv) {
      if (is_boundary_cell(slice, iv, ip) && !visited.count({iv, ip})) {
        trace.extras.emplace_back(iv, ip);
      }
    }
  }
  return trace;
}

namespace {

struct SaturationFlags {
  bool stall = false;
  bool aileron = false;
  bool rudder = false;
  bool elevator = false;
  bool thrust = false;
  bool bank = false;
};

SaturationFlags saturations_at(const AircraftState& x, const Controls& u,
                               const ConstraintConfig& lim,
                               const FactorTolerances& tol) {
  SaturationFlags s;
  s.stall = x.alpha >= lim.alpha_max - tol.alpha_rad ||
            x.alpha <= lim.alpha_min + tol.alpha_rad;
  // A window narrower than the tolerance band is a jam: the surface is
  // pinned there by definition, which says nothing about what limits the
  // envelope.
  auto at_edge = [](double v, const Window& w, double eps) {
    if (w.width() <= 2.0 * eps) {
      return false;
    }
    return v <= w.lower + eps || v >= w.upper - eps;
  };
  s.aileron = at_edge(u.aileron, lim.aileron, tol.surface_rad);
  s.rudder = at_edge(u.rudder, lim.rudder, tol.surface_rad);
  s.elevator = at_edge(u.elevator, lim.elevator, tol.surface_rad);
  s.thrust = at_edge(u.throttle, lim.throttle, tol.throttle);
  s.bank = std::abs(x.phi) >= lim.phi_max - tol.bank_rad;
  return s;
}

std::vector<LimitingFactor> saturation_factors(const SaturationFlags& s) {
  std::vector<LimitingFactor> f;
  if (s.stall) {
    f.push_back(LimitingFactor::StallAlpha);
  }
  if (s.aileron) {
    f.push_back(LimitingFactor::AileronSaturation);
  }
  if (s.rudder) {
    f.push_back(LimitingFactor::RudderSaturation);
  }
  if (s.elevator) {
    f.push_back(LimitingFactor::ElevatorSaturation);
  }
  if (s.thrust) {
    f.push_back(LimitingFactor::ThrustSaturation);
  }
  return f;
}

LimitingFactor nearest_margin_factor(const AircraftState& x, const Controls& u,
                                     const ConstraintConfig& lim) {
  double best = std::numeric_limits<double>::infinity();
  LimitingFactor pick = LimitingFactor::BankOnly;
  auto consider = [&best, &pick](double margin, double width,
                                 LimitingFactor f) {
    if (width <= 0.0) {
      return;
    }
    const double normalized = margin / width;
    if (normalized < best) {
      best = normalized;
      pick = f;
    }
  };
  consider(std::min(lim.alpha_max - x.alpha, x.alpha - lim.alpha_min),
           lim.alpha_max - lim.alpha_min, LimitingFactor::StallAlpha);
  auto consider_window = [&consider](double v, const Window& w,
                                     LimitingFactor f) {
    consider(std::min(v - w.lower, w.upper - v), w.width(), f);
  };
  consider_window(u.aileron, lim.aileron, LimitingFactor::AileronSaturation);
  consider_window(u.rudder, lim.rudder, LimitingFactor::RudderSaturation);
  consider_window(u.elevator, lim.elevator,
                  LimitingFactor::ElevatorSaturation);
  consider_window(u.throttle, lim.throttle, LimitingFactor::ThrustSaturation);
  consider(lim.phi_max - std::abs(x.phi), 2.0 * lim.phi_max,
           LimitingFactor::BankOnly);
  return pick;
}

}  // namespace

LimitingFactor classify_limiting_factor(
    const EnvelopeSlice& slice, int iv, int ip, const AircraftParams& params,
    const FactorTolerances& tol, std::vector<LimitingFactor>* components) {
  const ConstraintConfig lim =
      slice.provenance.failure
          ? apply_failure(params.limits, *slice.provenance.failure)
          : params.limits;
  const TrimResult& cell = slice.at(iv, ip);

  const SaturationFlags own = saturations_at(cell.state, cell.controls, lim, tol);
  std::vector<LimitingFactor> factors = saturation_factors(own);
  bool bank_seen = own.bank;

  if (factors.empty()) {
    // The trim point itself sits clear of every limit; ask the failed
    // neighbours what they ran into.
    constexpr int kDi[4] = {1, -1, 0, 0};
    constexpr int kDj[4] = {0, 0, 1, -1};
    std::set<LimitingFactor> acc;
    for (int k = 0; k < 4; ++k) {
      const int nv = iv + kDi[k];
      const int np = ip + kDj[k];
      if (!slice.in_grid(nv, np) || slice.feasible(nv, np)) {
        continue;
      }
      const TrimResult& nb = slice.at(nv, np);
      const SaturationFlags ns =
          saturations_at(nb.state, nb.controls, lim, tol);
      for (LimitingFactor f : saturation_factors(ns)) {
        acc.insert(f);
      }
      bank_seen = bank_seen || ns.bank;
    }
    factors.assign(acc.begin(), acc.end());
  }

  LimitingFactor result;
  if (factors.empty()) {
    result = bank_seen
                 ? LimitingFactor::BankOnly
                 : nearest_margin_factor(cell.state, cell.controls, lim);
    factors.push_back(result);
  } else if (factors.size() == 1) {
    result = factors.front();
  } else {
    result = LimitingFactor::Mixed;
  }
  if (components != nullptr) {
    *components = std::move(factors);
  }
  return result;
}

BoundaryReport analyze_boundary(const EnvelopeSlice& slice,
                                const AircraftParams& params,
                                const FactorTolerances& tol) {
  BoundaryReport report;
  report.trace = extract_boundary(slice);

  std::set<std::pair<int, int>> seen;
  auto add_point = [&](int iv, int ip) {
    if (!seen.insert({iv, ip}).second) {
      return;  // spur cells appear twice in the walk
    }
    BoundaryPoint p;
    p.iv = iv;
    p.ip = ip;
    p.v_kt = slice.v_kt.value(iv);
    p.psidot_degps = slice.psidot_degps.value(ip);
    p.factor =
        classify_limiting_factor(slice, iv, ip, params, tol, &p.components);
    p.cell = &slice.at(iv, ip);
    report.points.push_back(std::move(p));
  };
  for (const auto& [iv, ip] : report.trace.walk) {
    add_point(iv, ip);
  }
  for (const auto& [iv, ip] : report.trace.extras) {
    add_point(iv, ip);
  }
  return report;
}

int FeasibilityMask::count() const {
  int n = 0;
  for (std::uint8_t c : cells) {
    n += c != 0 ? 1 : 0;
  }
  return n;
}

FeasibilityMask feasibility_mask(const EnvelopeSlice& slice) {
  FeasibilityMask m;
  m.v_kt = slice.v_kt;
  m.psidot_degps = slice.psidot_degps;
  m.cells.resize(slice.cells.size());
  for (std::size_t i = 0; i < slice.cells.size(); ++i) {
    m.cells[i] = slice.cells[i].feasible() ? 1 : 0;
  }
  return m;
}

namespace {

void require_same_axes(const FeasibilityMask& a, const FeasibilityMask& b,
                       const char* who) {
  if (!(a.v_kt == b.v_kt) || !(a.psidot_degps == b.psidot_degps)) {
    throw std::invalid_argument(std::string(who) +
                                ": masks have different grid axes");
  }
}

}  // namespace

FeasibilityMask intersect_masks(const FeasibilityMask& a,
                                const FeasibilityMask& b) {
  require_same_axes(a, b, "intersect_masks");
  FeasibilityMask out = a;
  for (std::size_t i = 0; i < out.cells.size(); ++i) {
    out.cells[i] = (a.cells[i] != 0 && b.cells[i] != 0) ? 1 : 0;
  }
  return out;
}

MaskDiff compare_masks(const FeasibilityMask& a, const FeasibilityMask& b) {
  require_same_axes(a, b, "compare_masks");
  MaskDiff diff;
  for (int ip = 0; ip < a.psidot_degps.count; ++ip) {
    for (int iv = 0; iv < a.v_kt.count; ++iv) {
      const bool in_a = a.at(iv, ip);
      const bool in_b = b.at(iv, ip);
      if (in_a && !in_b) {
        diff.only_in_a.emplace_back(iv, ip);
      } else if (in_b && !in_a) {
        diff.only_in_b.emplace_back(iv, ip);
      }
    }
  }
  return diff;
}

std::vector<std::pair<int, int>> subset_violations(
    const FeasibilityMask& inner, const FeasibilityMask& outer) {
  require_same_axes(inner, outer, "subset_violations");
  std::vector<std::pair<int, int>> out;
  for (int ip = 0; ip < inner.psidot_degps.count; ++ip) {
    for (int iv = 0; iv < inner.v_kt.count; ++iv) {
      if (inner.at(iv, ip) && !outer.at(iv, ip)) {
        out.emplace_back(iv, ip);
      }
    }
  }
  return out;
}

SeparationReport separation_report(const FeasibilityMask& reference,
                                   const FeasibilityMask& reduced) {
  require_same_axes(reference, reduced, "separation_report");
  SeparationReport r;

  struct Extent {
    int min_iv = std::numeric_limits<int>::max();
    int max_iv = -1;
    int min_ip = std::numeric_limits<int>::max();
    int max_ip = -1;
    bool empty() const { return max_iv < 0; }
  };
  auto extent_of = [](const FeasibilityMask& m) {
    Extent e;
    for (int ip = 0; ip < m.psidot_degps.count; ++ip) {
      for (int iv = 0; iv < m.v_kt.count; ++iv) {
        if (m.at(iv, ip)) {
          e.min_iv = std::min(e.min_iv, iv);
          e.max_iv = std::max(e.max_iv, iv);
          e.min_ip = std::min(e.min_ip, ip);
          e.max_ip = std::max(e.max_ip, ip);
        }
      }
    }
    return e;
  };

  const Extent ref = extent_of(reference);
  const Extent red = extent_of(reduced);
  if (ref.empty()) {
    return r;
  }

  auto fill_side = [](SeparationReport::Side& s, int retreat, double unit) {
    s.retreat_cells = std::max(0, retreat);
    s.retreat_units = s.retreat_cells * unit;
    s.attached = s.retreat_cells <= 1;
  };
  const double dpsi = reference.psidot_degps.step;
  const double dv = reference.v_kt.step;
  if (red.empty()) {
    fill_side(r.left, ref.max_ip - ref.min_ip + 1, dpsi);
    fill_side(r.right, ref.max_ip - ref.min_ip + 1, dpsi);
    fill_side(r.top, ref.max_iv - ref.min_iv + 1, dv);
    fill_side(r.bottom, ref.max_iv - ref.min_iv + 1, dv);
  } else {
    fill_side(r.left, red.min_ip - ref.min_ip, dpsi);
    fill_side(r.right, ref.max_ip - red.max_ip, dpsi);
    fill_side(r.top, ref.max_iv - red.max_iv, dv);
    fill_side(r.bottom, red.min_iv - ref.min_iv, dv);
  }

  const double v_mid = 0.5 * (reference.v_kt.value(ref.min_iv) +
                              reference.v_kt.value(ref.max_iv));
  for (int ip = 0; ip < reference.psidot_degps.count; ++ip) {
    for (int iv = 0; iv < reference.v_kt.count; ++iv) {
      if (!reference.at(iv, ip) || reduced.at(iv, ip)) {
        continue;
      }
      const double psi = reference.psidot_degps.value(ip);
      if (psi < -1e-12) {
        ++r.left.lost_cells;
      } else if (psi > 1e-12) {
        ++r.right.lost_cells;
      }
      if (reference.v_kt.value(iv) > v_mid) {
        ++r.top.lost_cells;
      } else {
        ++r.bottom.lost_cells;
      }
    }
  }

  const std::pair<const char*, const SeparationReport::Side*> sides[] = {
      {"left", &r.left},
      {"right", &r.right},
      {"top", &r.top},
      {"bottom", &r.bottom}};
  int worst = 0;
  for (const auto& [name, side] : sides) {
    if (side->retreat_cells > worst) {
      worst = side->retreat_cells;
      r.most_affected = name;
    }
  }
  return r;
}

double load_factor(double phi) {
  const double c = std::cos(phi);
  if (c <= 0.0) {
    throw std::domain_error("load_factor: bank angle at or past 90 deg");
  }
  return 1.0 / c;
}

double stall_speed(const AircraftParams& params, double h_m, double phi) {
  const double rho = isa_density(h_m);
  const double clmax = max_lift_coefficient(params.aero);
  const double n = load_factor(phi);
  return std::sqrt(2.0 * n * params.weight /
                   (rho * params.wing_area * clmax));
}

double thrust_required(const AircraftParams& params, double h_m, double V,
                       double gamma, double phi, double beta) {
  const double rho = isa_density(h_m);
  const double qS = 0.5 * rho * V * V * params.wing_area;
  const double n = load_factor(phi);
  const double lift = n * params.weight;
  return params.weight * std::sin(gamma) +
         qS * (params.aero.CD0 + params.aero.CDbeta * beta * beta) +
         params.aero.K * lift * lift / qS;
}

double max_climb_angle(const AircraftParams& params, double h_m, double phi) {
  const double lapse = std::pow(isa_density(h_m) / kRhoSeaLevel,
                                params.propulsion.density_exponent);
  const double t_over_w =
      params.propulsion.max_static_thrust * lapse / params.weight;
  const double d_min_over_w =
      2.0 * load_factor(phi) * std::sqrt(params.aero.K * params.aero.CD0);
  return std::asin(std::clamp(t_over_w - d_min_over_w, -1.0, 1.0));
}

}  // namespace mfe
