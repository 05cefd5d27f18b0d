#include "mfe/envelope.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>
#include <utility>

#include "mfe/units.hpp"
#include "mfe/version.hpp"

namespace mfe {

AxisSpec AxisSpec::from_range(double lo, double hi, double step) {
  if (!(step > 0.0)) {
    throw std::invalid_argument("AxisSpec: step must be positive");
  }
  if (hi < lo) {
    throw std::invalid_argument("AxisSpec: upper end below lower end");
  }
  const int count = static_cast<int>(std::lround((hi - lo) / step)) + 1;
  return AxisSpec{lo, step, count};
}

int EnvelopeSlice::j_zero() const {
  for (int j = 0; j < psidot_degps.count; ++j) {
    if (std::abs(psidot_degps.value(j)) < 1e-6 * psidot_degps.step) {
      return j;
    }
  }
  throw std::logic_error("EnvelopeSlice: psidot axis does not contain zero");
}

int EnvelopeSlice::feasible_count() const {
  int n = 0;
  for (const TrimResult& cell : cells) {
    if (cell.feasible()) {
      ++n;
    }
  }
  return n;
}

const EnvelopeSlice* Envelope3D::find(double altitude_ft,
                                      double gamma_deg) const {
  for (const EnvelopeSlice& s : slices) {
    if (std::abs(s.altitude_ft - altitude_ft) < 1e-6 &&
        std::abs(s.gamma_deg - gamma_deg) < 1e-9) {
      return &s;
    }
  }
  return nullptr;
}

namespace {

TrimTarget cell_target(double altitude_ft, double gamma_deg, double v_kt,
                       double psidot_degps) {
  TrimTarget t;
  t.h = ft2m(altitude_ft);
  t.V = kt2mps(v_kt);
  t.gamma = deg2rad(gamma_deg);
  t.psidot = deg2rad(psidot_degps);
  return t;
}

struct SliceSweeper {
  const AircraftParams& params;
  const std::optional<FailureSpec>& failure;
  const SolverConfig& config;
  EnvelopeSlice& slice;
  bool warm_start;

  TrimResult solve_cell(int iv, int ip, const TrimResult* seed) const {
    const TrimTarget target =
        cell_target(slice.altitude_ft, slice.gamma_deg, slice.v_kt.value(iv),
                    slice.psidot_degps.value(ip));
    std::optional<std::pair<AircraftState, Controls>> init;
    if (warm_start && seed != nullptr && seed->feasible()) {
      init = std::make_pair(seed->state, seed->controls);
    }
    TrimResult r = solve_trim(target, failure, params, config, init);
    if (!r.feasible() && init.has_value()) {
      TrimResult cold = solve_trim(target, failure, params, config);
      if (cold.feasible() || cold.residual < r.residual) {
        return cold;
      }
    }
    return r;
  }

  // March one V column away from the psidot = 0 row in the given direction,
  // seeding each solve from the previous cell (or the last feasible one).
  void march_column(int iv, int j0, int direction,
                    const std::function<void()>& tick) const {
    const TrimResult* prev = &slice.at(iv, j0);
    const TrimResult* last_feasible = prev->feasible() ? prev : nullptr;
    for (int ip = j0 + direction; ip >= 0 && ip < slice.psidot_degps.count;
         ip += direction) {
      const TrimResult* seed = prev->feasible() ? prev : last_feasible;
      slice.at(iv, ip) = solve_cell(iv, ip, seed);
      prev = &slice.at(iv, ip);
      if (prev->feasible()) {
        last_feasible = prev;
      }
      tick();
    }
  }
};

}  // namespace

EnvelopeSlice sweep_slice(const AircraftParams& params, double altitude_ft,
                          double gamma_deg, const AxisSpec& v_kt,
                          const AxisSpec& psidot_degps,
                          const std::optional<FailureSpec>& failure,
                          const SolverConfig& config,
                          const SweepOptions& options) {
  if (v_kt.count < 1 || psidot_degps.count < 1) {
    throw std::invalid_argument("sweep_slice: empty grid axis");
  }
  validate_params(params);
  if (failure) {
    apply_failure(params.limits, *failure);  // reject bad windows up front
  }

  EnvelopeSlice slice;
  slice.altitude_ft = altitude_ft;
  slice.gamma_deg = gamma_deg;
  slice.v_kt = v_kt;
  slice.psidot_degps = psidot_degps;
  slice.cells.resize(static_cast<std::size_t>(v_kt.count) *
                     psidot_degps.count);
  slice.provenance.params_hash = params_fingerprint(params);
  slice.provenance.failure = failure;
  slice.provenance.solver = config;
  slice.provenance.tool_version = version_string();

  const int total = v_kt.count * psidot_degps.count;
  std::atomic<int> done{0};
  std::mutex progress_mutex;
  auto tick = std::function<void()>([&]() {
    const int d = done.fetch_add(1) + 1;
    if (options.progress) {
      std::lock_guard<std::mutex> lock(progress_mutex);
      options.progress(d, total);
    }
  });

  SliceSweeper sweeper{params, failure, config, slice, options.warm_start};

  // Phase A: the psidot = 0 row, left to right, each cell seeded from its
  // left neighbour.  Everything else chains off this row.
  const int j0 = slice.j_zero();
  const TrimResult* left = nullptr;
  for (int iv = 0; iv < v_kt.count; ++iv) {
    slice.at(iv, j0) = sweeper.solve_cell(iv, j0, left);
    left = &slice.at(iv, j0);
    tick();
  }

  // Phase B: V columns are independent, so they can run in parallel without
  // changing the results.
  auto run_column = [&](int iv) {
    sweeper.march_column(iv, j0, +1, tick);
    sweeper.march_column(iv, j0, -1, tick);
  };

  int threads = options.parallelism;
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
  }
  threads = std::clamp(threads, 1, v_kt.count);

  if (threads == 1 || psidot_degps.count == 1) {
    for (int iv = 0; iv < v_kt.count; ++iv) {
      run_column(iv);
    }
  } else {
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (int iv = next.fetch_add(1); iv < v_kt.count;
           iv = next.fetch_add(1)) {
        run_column(iv);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads - 1);
    for (int i = 0; i < threads - 1; ++i) {
      pool.emplace_back(worker);
    }
    worker();
    for (std::thread& t : pool) {
      t.join();
    }
  }

  return slice;
}

Envelope3D sweep_3d(const AircraftParams& params, const GridSpec& grid,
                    const std::optional<FailureSpec>& failure,
                    const SolverConfig& config, const SweepOptions& options) {
  if (grid.altitudes_ft.empty()) {
    throw std::invalid_argument("sweep_3d: no altitudes given");
  }
  Envelope3D env;
  env.grid = grid;
  env.slices.reserve(grid.altitudes_ft.size() * grid.gamma_deg.count);
  for (double h_ft : grid.altitudes_ft) {
    for (int ig = 0; ig < grid.gamma_deg.count; ++ig) {
      env.slices.push_back(sweep_slice(params, h_ft, grid.gamma_deg.value(ig),
                                       grid.v_kt, grid.psidot_degps, failure,
                                       config, options));
    }
  }
  return env;
}

namespace {

std::uint16_t mirror_active_flags(std::uint16_t active) {
  std::uint16_t out = active;
  auto swap_pair = [&out, active](std::uint16_t a, std::uint16_t b) {
    out &= static_cast<std::uint16_t>(~(a | b));
    if (active & a) {
      out |= b;
    }
    if (active & b) {
      out |= a;
    }
  };
  swap_pair(kActiveAileronUL, kActiveAileronLL);
  swap_pair(kActiveRudderUL, kActiveRudderLL);
  return out;
}

}  // namespace

EnvelopeSlice mirror_envelope(const EnvelopeSlice& slice,
                              const AircraftParams& params) {
  if (!params.laterally_symmetric()) {
    throw std::invalid_argument(
        "mirror_envelope: aircraft parameters carry lateral asymmetries "
        "(CY0/Cl0/Cn0); the mirror construction does not apply");
  }
  const AxisSpec& axis = slice.psidot_degps;
  if (std::abs(axis.min + axis.max()) > 1e-9 * std::max(1.0, -axis.min)) {
    throw std::invalid_argument(
        "mirror_envelope: psidot axis is not symmetric about zero");
  }

  EnvelopeSlice out = slice;
  out.provenance.mirrored = !slice.provenance.mirrored;
  if (slice.provenance.failure) {
    out.provenance.failure = mirror_failure(*slice.provenance.failure);
  }

  for (int ip = 0; ip < axis.count; ++ip) {
    const int ip_src = axis.count - 1 - ip;
    for (int iv = 0; iv < slice.v_kt.count; ++iv) {
      const TrimResult& src = slice.at(iv, ip_src);
      TrimResult& dst = out.at(iv, ip);
      dst = src;
      dst.target.psidot = -src.target.psidot;
      dst.state.beta = -src.state.beta;
      dst.state.p = -src.state.p;
      dst.state.r = -src.state.r;
      dst.state.phi = -src.state.phi;
      dst.controls.aileron = -src.controls.aileron;
      dst.controls.rudder = -src.controls.rudder;
      dst.active = mirror_active_flags(src.active);
    }
  }
  return out;
}

namespace {

bool boundary_adjacent(const EnvelopeSlice& s, int iv, int ip) {
  const int di[4] = {1, -1, 0, 0};
  const int dj[4] = {0, 0, 1, -1};
  for (int k = 0; k < 4; ++k) {
    const int nv = iv + di[k];
    const int np = ip + dj[k];
    if (!s.in_grid(nv, np) || !s.feasible(nv, np)) {
      return true;
    }
  }
  return false;
}

}  // namespace

MirrorValidation validate_mirror(const EnvelopeSlice& mirrored,
                                 const AircraftParams& params,
                                 const SolverConfig& config, int sample_count,
                                 std::uint64_t seed, double tolerance) {
  MirrorValidation v;
  v.tolerance = tolerance;

  std::vector<std::pair<int, int>> pool;
  for (int ip = 0; ip < mirrored.psidot_degps.count; ++ip) {
    for (int iv = 0; iv < mirrored.v_kt.count; ++iv) {
      if (mirrored.feasible(iv, ip) && boundary_adjacent(mirrored, iv, ip)) {
        pool.emplace_back(iv, ip);
      }
    }
  }
  if (pool.empty()) {
    for (int ip = 0; ip < mirrored.psidot_degps.count; ++ip) {
      for (int iv = 0; iv < mirrored.v_kt.count; ++iv) {
        if (mirrored.feasible(iv, ip)) {
          pool.emplace_back(iv, ip);
        }
      }
    }
  }

  std::mt19937_64 rng(seed);
  std::shuffle(pool.begin(), pool.end(), rng);
  const int n = std::min<int>(sample_count, static_cast<int>(pool.size()));

  v.passed = true;
  for (int k = 0; k < n; ++k) {
    const auto [iv, ip] = pool[k];
    const TrimResult& cell = mirrored.at(iv, ip);

    // Re-solve seeded at the mirrored point: if it really is a trim of the
    // mirrored problem the solver accepts it essentially unchanged.
    TrimResult check =
        solve_trim(cell.target, mirrored.provenance.failure, params, config,
                   std::make_pair(cell.state, cell.controls));

    MirrorValidation::Sample s;
    s.iv = iv;
    s.ip = ip;
    s.status_match = check.status == cell.status;
    double d = 0.0;
    d = std::max(d, std::abs(check.state.alpha - cell.state.alpha));
    d = std::max(d, std::abs(check.state.beta - cell.state.beta));
    d = std::max(d, std::abs(check.state.phi - cell.state.phi));
    d = std::max(d, std::abs(check.state.theta - cell.state.theta));
    d = std::max(d, std::abs(check.controls.throttle - cell.controls.throttle));
    d = std::max(d, std::abs(check.controls.elevator - cell.controls.elevator));
    d = std::max(d, std::abs(check.controls.aileron - cell.controls.aileron));
    d = std::max(d, std::abs(check.controls.rudder - cell.controls.rudder));
    s.max_abs_diff = d;
    v.samples.push_back(s);
    if (!s.status_match || d > tolerance) {
      v.passed = false;
    }
  }
  return v;
}

}  // namespace mfe
