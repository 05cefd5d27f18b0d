// Command-line front end: trim single points, sweep envelopes from a run
// manifest, classify boundaries, verify structural properties of computed
// envelopes, and export plot data.
//
// Exit codes: 0 success (verify: property holds), 1 verification failed or
// trim infeasible, 2 bad input, 3 internal error.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mfe/boundary.hpp"
#include "mfe/envelope.hpp"
#include "mfe/failure.hpp"
#include "mfe/flight_model.hpp"
#include "mfe/io.hpp"
#include "mfe/linear_analysis.hpp"
#include "mfe/params.hpp"
#include "mfe/trim.hpp"
#include "mfe/units.hpp"
#include "mfe/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitInternal = 3;

struct BadInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CheckFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

mfe::AircraftParams params_from_option(const std::string& path) {
  if (path.empty()) {
    return mfe::default_params();
  }
  return mfe::load_params(path);
}

// "surface:lower:upper" (degrees; throttle as a fraction) or "surface:value"
// for a jam.
mfe::FailureSpec parse_failure(const std::string& text) {
  std::vector<std::string> parts;
  std::string::size_type pos = 0;
  while (true) {
    const auto colon = text.find(':', pos);
    parts.push_back(text.substr(pos, colon - pos));
    if (colon == std::string::npos) {
      break;
    }
    pos = colon + 1;
  }
  if (parts.size() != 2 && parts.size() != 3) {
    throw BadInput("failure must be surface:value or surface:lower:upper");
  }
  mfe::FailureSpec f;
  f.surface = mfe::surface_from_name(parts[0]);
  auto num = [](const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) {
      throw BadInput("bad number '" + s + "' in failure spec");
    }
    return v;
  };
  double lo = num(parts[1]);
  double up = parts.size() == 3 ? num(parts[2]) : lo;
  if (f.surface != mfe::Surface::Throttle) {
    lo = mfe::deg2rad(lo);
    up = mfe::deg2rad(up);
  }
  f.lower = lo;
  f.upper = up;
  return f;
}

std::string output_dir(const std::string& flag_value) {
  if (!flag_value.empty()) {
    return flag_value;
  }
  if (const char* env = std::getenv("MFE_OUTPUT_DIR"); env && *env) {
    return env;
  }
  return ".";
}

// ---------------------------------------------------------------- trim ----

struct TrimArgs {
  std::string params_path;
  double alt_ft = 0.0;
  double v_kt = 0.0;
  double gamma_deg = 0.0;
  double psidot_degps = 0.0;
  std::string failure;
  std::string dump_linear;
  bool as_json = false;
};

int run_trim(const TrimArgs& a) {
  const mfe::AircraftParams params = params_from_option(a.params_path);
  std::optional<mfe::FailureSpec> failure;
  if (!a.failure.empty()) {
    failure = parse_failure(a.failure);
  }

  mfe::TrimTarget target;
  target.h = mfe::ft2m(a.alt_ft);
  target.V = mfe::kt2mps(a.v_kt);
  target.gamma = mfe::deg2rad(a.gamma_deg);
  target.psidot = mfe::deg2rad(a.psidot_degps);

  const mfe::TrimResult r = mfe::solve_trim(target, failure, params);

  if (a.as_json) {
    json j = {
        {"target",
         {{"altitude_ft", a.alt_ft},
          {"V_kt", a.v_kt},
          {"gamma_deg", a.gamma_deg},
          {"psidot_degps", a.psidot_degps}}},
        {"status", mfe::trim_status_name(r.status)},
        {"iterations", r.iterations},
        {"residual", r.residual},
        {"xdot_inf", r.xdot_inf},
        {"state",
         {{"alpha_deg", mfe::rad2deg(r.state.alpha)},
          {"beta_deg", mfe::rad2deg(r.state.beta)},
          {"phi_deg", mfe::rad2deg(r.state.phi)},
          {"theta_deg", mfe::rad2deg(r.state.theta)},
          {"p_radps", r.state.p},
          {"q_radps", r.state.q},
          {"r_radps", r.state.r}}},
        {"controls",
         {{"throttle", r.controls.throttle},
          {"elevator_deg", mfe::rad2deg(r.controls.elevator)},
          {"aileron_deg", mfe::rad2deg(r.controls.aileron)},
          {"rudder_deg", mfe::rad2deg(r.controls.rudder)}}},
        {"active_constraints", mfe::active_constraints_to_string(r.active)},
    };
    if (failure) {
      j["failure"] = failure->describe();
    }
    std::cout << j.dump(2) << "\n";
  } else {
    std::printf("target:   h = %g ft, V = %g kt, gamma = %g deg, psidot = %g deg/s\n",
                a.alt_ft, a.v_kt, a.gamma_deg, a.psidot_degps);
    if (failure) {
      std::printf("failure:  %s\n", failure->describe().c_str());
    }
    std::printf("status:   %s  (%d iterations, J = %.3e, |xdot| = %.3e)\n",
                mfe::trim_status_name(r.status), r.iterations, r.residual,
                r.xdot_inf);
    std::printf("state:    alpha = %.4f  beta = %.4f  phi = %.4f  theta = %.4f deg\n",
                mfe::rad2deg(r.state.alpha), mfe::rad2deg(r.state.beta),
                mfe::rad2deg(r.state.phi), mfe::rad2deg(r.state.theta));
    std::printf("rates:    p = %.5f  q = %.5f  r = %.5f rad/s\n", r.state.p,
                r.state.q, r.state.r);
    std::printf("controls: throttle = %.4f  elevator = %.4f  aileron = %.4f  rudder = %.4f\n",
                r.controls.throttle, mfe::rad2deg(r.controls.elevator),
                mfe::rad2deg(r.controls.aileron),
                mfe::rad2deg(r.controls.rudder));
    const std::string active = mfe::active_constraints_to_string(r.active);
    if (!active.empty()) {
      std::printf("active:   %s\n", active.c_str());
    }
  }

  if (!r.feasible()) {
    return kExitFail;
  }

  if (!a.dump_linear.empty()) {
    const mfe::LinearModel lm =
        mfe::linearize(r.state, r.controls, params, failure);
    auto dump = [](const std::string& path, const auto& mat,
                   const std::string& header) {
      std::string out = header + "\n";
      char buf[40];
      for (int i = 0; i < mat.rows(); ++i) {
        for (int j = 0; j < mat.cols(); ++j) {
          std::snprintf(buf, sizeof(buf), "%.17g", mat(i, j));
          out += buf;
          out += j + 1 < mat.cols() ? ',' : '\n';
        }
      }
      std::ofstream f(path);
      if (!f) {
        throw std::runtime_error("cannot write '" + path + "'");
      }
      f << out;
    };
    static const char* kControlNames[] = {"throttle", "elevator", "aileron",
                                          "rudder"};
    std::string b_header;
    for (std::size_t k = 0; k < lm.control_indices.size(); ++k) {
      b_header += kControlNames[lm.control_indices[k]];
      if (k + 1 < lm.control_indices.size()) {
        b_header += ',';
      }
    }
    dump(a.dump_linear + "_A.csv", lm.A,
         "V,alpha,beta,p,q,r,phi,theta");
    dump(a.dump_linear + "_B.csv", lm.B, b_header);
    std::fprintf(stderr, "wrote %s_A.csv and %s_B.csv\n",
                 a.dump_linear.c_str(), a.dump_linear.c_str());
  }
  return kExitOk;
}

// ------------------------------------------------------------ envelope ----

struct EnvelopeArgs {
  std::string manifest_path;
  std::string out;
  int parallelism = 0;
  bool quiet = false;
};

int run_envelope(const EnvelopeArgs& a) {
  const mfe::RunManifest manifest = mfe::load_manifest(a.manifest_path);
  mfe::AircraftParams params;
  if (manifest.params_path) {
    const fs::path base = fs::path(a.manifest_path).parent_path();
    params = mfe::load_params((base / *manifest.params_path).string());
  } else {
    params = mfe::default_params();
  }

  const fs::path dir = output_dir(a.out);
  fs::create_directories(dir);

  mfe::SolverConfig config;
  mfe::SweepOptions options;
  options.parallelism = a.parallelism;

  json summary;
  summary["tool_version"] = mfe::version_string();
  summary["params_hash"] = mfe::params_fingerprint(params);
  summary["cases"] = json::array();

  std::map<std::string, std::vector<mfe::EnvelopeSlice>> computed;
  bool validations_ok = true;

  for (const mfe::CaseSpec& c : manifest.cases) {
    json case_json;
    case_json["name"] = c.name;
    if (c.failure) {
      case_json["failure"] = c.failure->describe();
    }
    if (c.mirror_of) {
      case_json["mirror_of"] = *c.mirror_of;
    }
    case_json["slices"] = json::array();

    std::vector<mfe::EnvelopeSlice> slices;
    if (c.mirror_of) {
      const auto src = computed.find(*c.mirror_of);
      if (src == computed.end()) {
        throw BadInput("case '" + c.name + "' mirrors case '" + *c.mirror_of +
                       "' which was not computed first");
      }
      std::uint64_t sample_seed = manifest.validation_seed;
      for (const mfe::EnvelopeSlice& s : src->second) {
        mfe::EnvelopeSlice m = mfe::mirror_envelope(s, params);
        const mfe::MirrorValidation v = mfe::validate_mirror(
            m, params, config, manifest.validation_samples, sample_seed++);
        json vj = {{"samples", v.samples.size()},
                   {"tolerance", v.tolerance},
                   {"passed", v.passed}};
        if (!v.passed) {
          validations_ok = false;
          std::fprintf(stderr,
                       "mirror validation FAILED for case '%s' (h = %g ft, "
                       "gamma = %g deg)\n",
                       c.name.c_str(), m.altitude_ft, m.gamma_deg);
        }
        json sj = {{"altitude_ft", m.altitude_ft},
                   {"gamma_deg", m.gamma_deg},
                   {"cells", m.cells.size()},
                   {"feasible", m.feasible_count()},
                   {"validation", vj}};
        const std::string fname =
            mfe::slice_filename(c.name, m.altitude_ft, m.gamma_deg);
        mfe::save_envelope_slice(m, (dir / fname).string());
        sj["file"] = fname;
        case_json["slices"].push_back(sj);
        slices.push_back(std::move(m));
      }
    } else {
      const mfe::Envelope3D env =
          mfe::sweep_3d(params, manifest.grid, c.failure, config, options);
      for (const mfe::EnvelopeSlice& s : env.slices) {
        const std::string fname =
            mfe::slice_filename(c.name, s.altitude_ft, s.gamma_deg);
        mfe::save_envelope_slice(s, (dir / fname).string());
        if (!a.quiet) {
          std::fprintf(stderr, "%s: %d/%zu feasible\n", fname.c_str(),
                       s.feasible_count(), s.cells.size());
        }
        case_json["slices"].push_back({{"altitude_ft", s.altitude_ft},
                                       {"gamma_deg", s.gamma_deg},
                                       {"cells", s.cells.size()},
                                       {"feasible", s.feasible_count()},
                                       {"file", fname}});
        slices.push_back(s);
      }
    }
    computed[c.name] = std::move(slices);
    summary["cases"].push_back(std::move(case_json));
  }

  std::ofstream f(dir / "run_summary.json");
  f << summary.dump(2) << "\n";
  if (!a.quiet) {
    std::fprintf(stderr, "wrote %s\n", (dir / "run_summary.json").c_str());
  }
  return validations_ok ? kExitOk : kExitFail;
}

// ------------------------------------------------------------ boundary ----

struct BoundaryArgs {
  std::string envelope_path;
  std::string params_path;
  std::string out;
  std::string compare_to;
  std::string separation_out;
};

int run_boundary(const BoundaryArgs& a) {
  const mfe::AircraftParams params = params_from_option(a.params_path);
  const mfe::EnvelopeSlice slice = mfe::load_envelope_slice(a.envelope_path);
  const mfe::BoundaryReport report = mfe::analyze_boundary(slice, params);

  std::map<std::string, int> histogram;
  for (const mfe::BoundaryPoint& p : report.points) {
    ++histogram[mfe::factor_name(p.factor)];
  }
  std::printf("boundary cells: %zu (%zu on the contour, %zu off it)\n",
              report.points.size(), report.trace.walk.size(),
              report.trace.extras.size());
  for (const auto& [name, count] : histogram) {
    std::printf("  %-22s %d\n", name.c_str(), count);
  }

  if (!a.out.empty()) {
    mfe::save_boundary_report(report, slice, a.out);
    std::fprintf(stderr, "wrote %s\n", a.out.c_str());
  }

  if (!a.compare_to.empty()) {
    const mfe::EnvelopeSlice reference =
        mfe::load_envelope_slice(a.compare_to);
    const mfe::SeparationReport sep = mfe::separation_report(
        mfe::feasibility_mask(reference), mfe::feasibility_mask(slice));
    auto side = [](const char* name, const mfe::SeparationReport::Side& s) {
      std::printf("  %-6s retreat %d cells (%g), %s, lost %d\n", name,
                  s.retreat_cells, s.retreat_units,
                  s.attached ? "attached" : "separated", s.lost_cells);
    };
    std::printf("separation vs %s:\n", a.compare_to.c_str());
    side("left", sep.left);
    side("right", sep.right);
    side("top", sep.top);
    side("bottom", sep.bottom);
    std::printf("  most affected: %s\n", sep.most_affected.c_str());
    if (!a.separation_out.empty()) {
      mfe::save_separation_report(sep, a.separation_out);
      std::fprintf(stderr, "wrote %s\n", a.separation_out.c_str());
    }
  }
  return kExitOk;
}

// -------------------------------------------------------------- verify ----

int run_verify_intersection(const std::string& jam_path,
                            const std::string& lower_path,
                            const std::string& upper_path,
                            int max_exceptions) {
  const mfe::EnvelopeSlice jam = mfe::load_envelope_slice(jam_path);
  const mfe::EnvelopeSlice lower = mfe::load_envelope_slice(lower_path);
  const mfe::EnvelopeSlice upper = mfe::load_envelope_slice(upper_path);

  const mfe::FeasibilityMask expected = mfe::intersect_masks(
      mfe::feasibility_mask(lower), mfe::feasibility_mask(upper));
  const mfe::MaskDiff diff =
      mfe::compare_masks(mfe::feasibility_mask(jam), expected);

  const std::size_t exceptions =
      diff.only_in_a.size() + diff.only_in_b.size();
  std::printf("jam file:            %s\n", jam_path.c_str());
  std::printf("intersection of:     %s, %s\n", lower_path.c_str(),
              upper_path.c_str());
  std::printf("cells only in jam:   %zu\n", diff.only_in_a.size());
  std::printf("cells only in both-restrictions intersection: %zu\n",
              diff.only_in_b.size());
  auto show = [&jam](const char* label,
                     const std::vector<std::pair<int, int>>& cells) {
    for (std::size_t i = 0; i < cells.size() && i < 10; ++i) {
      const auto [iv, ip] = cells[i];
      std::printf("  %s V = %g kt, psidot = %g deg/s\n", label,
                  jam.v_kt.value(iv), jam.psidot_degps.value(ip));
    }
  };
  show("jam-only:", diff.only_in_a);
  show("intersection-only:", diff.only_in_b);

  const bool pass = exceptions <= static_cast<std::size_t>(max_exceptions);
  std::printf("verdict: %s (%zu exception(s), %d allowed)\n",
              pass ? "PASS" : "FAIL", exceptions, max_exceptions);
  return pass ? kExitOk : kExitFail;
}

int run_verify_symmetry(const std::string& a_path, const std::string& b_path,
                        const std::string& params_path, double tol) {
  const mfe::AircraftParams params = params_from_option(params_path);
  const mfe::EnvelopeSlice a = mfe::load_envelope_slice(a_path);
  const mfe::EnvelopeSlice b = mfe::load_envelope_slice(b_path);

  const mfe::EnvelopeSlice mirrored = mfe::mirror_envelope(a, params);
  const mfe::MaskDiff diff = mfe::compare_masks(
      mfe::feasibility_mask(mirrored), mfe::feasibility_mask(b));

  std::size_t bad_cells = 0;
  double worst = 0.0;
  if (diff.equal()) {
    for (int ip = 0; ip < b.psidot_degps.count; ++ip) {
      for (int iv = 0; iv < b.v_kt.count; ++iv) {
        const mfe::TrimResult& x = mirrored.at(iv, ip);
        const mfe::TrimResult& y = b.at(iv, ip);
        double d = std::abs(x.state.alpha - y.state.alpha);
        d = std::max(d, std::abs(x.state.beta - y.state.beta));
        d = std::max(d, std::abs(x.state.phi - y.state.phi));
        d = std::max(d, std::abs(x.state.theta - y.state.theta));
        d = std::max(d, std::abs(x.controls.throttle - y.controls.throttle));
        d = std::max(d, std::abs(x.controls.elevator - y.controls.elevator));
        d = std::max(d, std::abs(x.controls.aileron - y.controls.aileron));
        d = std::max(d, std::abs(x.controls.rudder - y.controls.rudder));
        worst = std::max(worst, d);
        if (d > tol) {
          if (++bad_cells <= 10) {
            std::printf("  mismatch %.3g at V = %g kt, psidot = %g deg/s\n",
                        d, b.v_kt.value(iv), b.psidot_degps.value(ip));
          }
        }
      }
    }
  }

  const bool pass = diff.equal() && bad_cells == 0;
  std::printf("mask differences: %zu\n",
              diff.only_in_a.size() + diff.only_in_b.size());
  std::printf("value mismatches beyond %g: %zu (worst %.3g)\n", tol,
              bad_cells, worst);
  std::printf("verdict: %s\n", pass ? "PASS" : "FAIL");
  return pass ? kExitOk : kExitFail;
}

int run_verify_laws(const std::string& envelope_path,
                    const std::string& params_path, double rel_tol) {
  const mfe::AircraftParams params = params_from_option(params_path);
  const mfe::EnvelopeSlice slice = mfe::load_envelope_slice(envelope_path);
  const double h_m = mfe::ft2m(slice.altitude_ft);
  const double gamma = mfe::deg2rad(slice.gamma_deg);
  const int j0 = slice.j_zero();

  int min_iv = -1;
  int max_iv = -1;
  for (int iv = 0; iv < slice.v_kt.count; ++iv) {
    if (slice.feasible(iv, j0)) {
      if (min_iv < 0) {
        min_iv = iv;
      }
      max_iv = iv;
    }
  }

  bool all_pass = true;
  auto report = [&all_pass](const char* law, bool ok, const std::string& detail) {
    std::printf("%s %-28s %s\n", ok ? "PASS" : "FAIL", law, detail.c_str());
    all_pass = all_pass && ok;
  };

  const double step = slice.v_kt.step;
  const double gamma_cap = mfe::max_climb_angle(params, h_m);

  if (min_iv < 0) {
    // An empty straight-flight row is only right when the climb demand
    // exceeds what full throttle can do.
    const bool ok = gamma > gamma_cap - mfe::deg2rad(0.1);
    report("empty-row climb ceiling", ok,
           "gamma = " + std::to_string(slice.gamma_deg) +
               " deg vs ceiling " + std::to_string(mfe::rad2deg(gamma_cap)) +
               " deg");
    std::printf("verdict: %s\n", all_pass ? "PASS" : "FAIL");
    return all_pass ? kExitOk : kExitFail;
  }

  {
    const double vs_kt = mfe::mps2kt(mfe::stall_speed(params, h_m));
    const double lo_kt = slice.v_kt.value(min_iv);
    const bool ok = lo_kt >= vs_kt - step - rel_tol * vs_kt &&
                    lo_kt <= vs_kt + step + rel_tol * vs_kt;
    char buf[120];
    std::snprintf(buf, sizeof(buf),
                  "slow edge %.1f kt vs stall speed %.1f kt", lo_kt, vs_kt);
    report("stall boundary", ok, buf);
  }

  {
    // Fast edge: where available thrust stops covering required thrust.
    auto excess = [&](double v_kt) {
      const double V = mfe::kt2mps(v_kt);
      return mfe::thrust_available(h_m, V, 1.0, params.propulsion) -
             mfe::thrust_required(params, h_m, V, gamma);
    };
    const double grid_hi = slice.v_kt.max();
    const double hi_kt = slice.v_kt.value(max_iv);
    if (excess(grid_hi) > 0.0) {
      const bool ok = max_iv == slice.v_kt.count - 1;
      report("thrust boundary", ok,
             "thrust still available at the grid edge; envelope should reach "
             "it");
    } else {
      double lo = slice.v_kt.value(min_iv);
      double hi = grid_hi;
      for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) > 0.0 ? lo : hi) = mid;
      }
      const bool ok = std::abs(hi_kt - lo) <= step + rel_tol * lo;
      char buf[120];
      std::snprintf(buf, sizeof(buf),
                    "fast edge %.1f kt vs thrust balance %.1f kt", hi_kt, lo);
      report("thrust boundary", ok, buf);
    }
  }

  {
    const bool ok = gamma <= gamma_cap + mfe::deg2rad(0.5);
    char buf[120];
    std::snprintf(buf, sizeof(buf), "gamma %.2f deg, ceiling %.2f deg",
                  slice.gamma_deg, mfe::rad2deg(gamma_cap));
    report("climb ceiling", ok, buf);
  }

  std::printf("verdict: %s\n", all_pass ? "PASS" : "FAIL");
  return all_pass ? kExitOk : kExitFail;
}

// ------------------------------------------------------------ plotdata ----

std::optional<std::string> opt_str(const std::string& s) {
  if (s.empty()) {
    return std::nullopt;
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maneuvering flight envelope toolkit"};
  app.set_version_flag("--version", std::string(mfe::version_string()));
  app.require_subcommand(1);

  // trim
  TrimArgs trim_args;
  CLI::App* trim = app.add_subcommand("trim", "solve a single trim point");
  trim->add_option("--params", trim_args.params_path,
                   "aircraft parameter JSON (default: built-in surrogate)");
  trim->add_option("--alt-ft", trim_args.alt_ft, "altitude [ft]");
  trim->add_option("--v-kt", trim_args.v_kt, "airspeed [kt]")->required();
  trim->add_option("--gamma-deg", trim_args.gamma_deg,
                   "flight-path angle [deg]");
  trim->add_option("--psidot-degps", trim_args.psidot_degps,
                   "turn rate [deg/s]");
  trim->add_option("--failure", trim_args.failure,
                   "surface:value (jam) or surface:lower:upper [deg]");
  trim->add_option("--dump-linear", trim_args.dump_linear,
                   "write <prefix>_A.csv / <prefix>_B.csv at the solution");
  trim->add_flag("--json", trim_args.as_json, "machine-readable output");

  // params
  std::string params_dump_out, params_dump_in;
  CLI::App* params_cmd =
      app.add_subcommand("params", "write a parameter set as JSON");
  params_cmd->add_option("--params", params_dump_in,
                         "source JSON (default: built-in surrogate)");
  params_cmd->add_option("--out", params_dump_out, "output path")->required();

  // envelope
  EnvelopeArgs env_args;
  CLI::App* envelope =
      app.add_subcommand("envelope", "sweep envelopes from a run manifest");
  envelope->add_option("--manifest", env_args.manifest_path, "run manifest JSON")
      ->required();
  envelope->add_option("--out", env_args.out,
                       "output directory (default: $MFE_OUTPUT_DIR or .)");
  envelope->add_option("--parallelism", env_args.parallelism,
                       "worker threads, 0 = all cores");
  envelope->add_flag("--quiet", env_args.quiet, "suppress progress output");

  // boundary
  BoundaryArgs bnd_args;
  CLI::App* boundary = app.add_subcommand(
      "boundary", "classify the limiting factors of an envelope boundary");
  boundary->add_option("--envelope", bnd_args.envelope_path,
                       "envelope slice CSV")
      ->required();
  boundary->add_option("--params", bnd_args.params_path,
                       "aircraft parameter JSON");
  boundary->add_option("--out", bnd_args.out, "boundary report CSV");
  boundary->add_option("--compare-to", bnd_args.compare_to,
                       "reference slice CSV for a separation report");
  boundary->add_option("--separation-out", bnd_args.separation_out,
                       "separation report JSON");

  // verify
  CLI::App* verify =
      app.add_subcommand("verify", "check structural envelope properties");
  verify->require_subcommand(1);

  std::string v_jam, v_lower, v_upper;
  int v_max_exceptions = 0;
  CLI::App* v_inter = verify->add_subcommand(
      "intersection",
      "jam envelope equals the intersection of its two one-sided restrictions");
  v_inter->add_option("--jam", v_jam, "jam slice CSV")->required();
  v_inter->add_option("--lower", v_lower, "[nominal-lower, x] slice CSV")
      ->required();
  v_inter->add_option("--upper", v_upper, "[x, nominal-upper] slice CSV")
      ->required();
  v_inter->add_option("--max-exceptions", v_max_exceptions,
                      "tolerated differing cells");

  std::string v_sym_a, v_sym_b, v_sym_params;
  double v_sym_tol = 0.0;
  CLI::App* v_sym = verify->add_subcommand(
      "symmetry", "slice B is the lateral mirror image of slice A");
  v_sym->add_option("--a", v_sym_a, "slice CSV")->required();
  v_sym->add_option("--b", v_sym_b, "mirror candidate slice CSV")->required();
  v_sym->add_option("--params", v_sym_params, "aircraft parameter JSON");
  v_sym->add_option("--tol", v_sym_tol,
                    "numeric tolerance on mirrored values (default exact)");

  std::string v_laws_env, v_laws_params;
  double v_laws_tol = 0.08;
  CLI::App* v_laws = verify->add_subcommand(
      "laws", "straight-flight edges match closed-form stall/thrust laws");
  v_laws->add_option("--envelope", v_laws_env, "envelope slice CSV")
      ->required();
  v_laws->add_option("--params", v_laws_params, "aircraft parameter JSON");
  v_laws->add_option("--rel-tol", v_laws_tol, "relative tolerance");

  // plotdata
  CLI::App* plotdata =
      app.add_subcommand("plotdata", "export plot-ready CSV (and SVG)");
  plotdata->require_subcommand(1);

  std::string pd_env, pd_out, pd_svg, pd_params;
  CLI::App* pd_envelope =
      plotdata->add_subcommand("envelope", "feasibility grid");
  pd_envelope->add_option("--envelope", pd_env, "slice CSV")->required();
  pd_envelope->add_option("--out", pd_out, "output CSV")->required();
  pd_envelope->add_option("--svg", pd_svg, "also render an SVG");

  std::string pb_env, pb_out, pb_svg, pb_params;
  CLI::App* pd_boundary =
      plotdata->add_subcommand("boundary", "contour with limiting factors");
  pd_boundary->add_option("--envelope", pb_env, "slice CSV")->required();
  pd_boundary->add_option("--params", pb_params, "aircraft parameter JSON");
  pd_boundary->add_option("--out", pb_out, "output CSV")->required();
  pd_boundary->add_option("--svg", pb_svg, "also render an SVG");

  std::string tc_params, tc_out, tc_svg, tc_alts = "0";
  double tc_vmin = 40.0, tc_vmax = 200.0, tc_step = 2.0;
  CLI::App* pd_thrust = plotdata->add_subcommand(
      "thrust_curves", "thrust available vs required per altitude");
  pd_thrust->add_option("--params", tc_params, "aircraft parameter JSON");
  pd_thrust->add_option("--alts-ft", tc_alts,
                        "comma-separated altitudes [ft]");
  pd_thrust->add_option("--v-min-kt", tc_vmin, "sweep start [kt]");
  pd_thrust->add_option("--v-max-kt", tc_vmax, "sweep end [kt]");
  pd_thrust->add_option("--step-kt", tc_step, "sweep step [kt]");
  pd_thrust->add_option("--out", tc_out, "output CSV")->required();
  pd_thrust->add_option("--svg", tc_svg, "also render an SVG");

  std::string st_env, st_out, st_svg;
  CLI::App* pd_traces = plotdata->add_subcommand(
      "state_traces", "trim traces along the straight-flight row");
  pd_traces->add_option("--envelope", st_env, "slice CSV")->required();
  pd_traces->add_option("--out", st_out, "output CSV")->required();
  pd_traces->add_option("--svg", st_svg, "also render an SVG");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  try {
    if (*trim) {
      return run_trim(trim_args);
    }
    if (*params_cmd) {
      mfe::save_params(params_from_option(params_dump_in), params_dump_out);
      return kExitOk;
    }
    if (*envelope) {
      return run_envelope(env_args);
    }
    if (*boundary) {
      return run_boundary(bnd_args);
    }
    if (*v_inter) {
      return run_verify_intersection(v_jam, v_lower, v_upper,
                                     v_max_exceptions);
    }
    if (*v_sym) {
      return run_verify_symmetry(v_sym_a, v_sym_b, v_sym_params, v_sym_tol);
    }
    if (*v_laws) {
      return run_verify_laws(v_laws_env, v_laws_params, v_laws_tol);
    }
    if (*pd_envelope) {
      mfe::write_envelope_plotdata(mfe::load_envelope_slice(pd_env), pd_out,
                                   opt_str(pd_svg));
      return kExitOk;
    }
    if (*pd_boundary) {
      const mfe::AircraftParams params = params_from_option(pb_params);
      const mfe::EnvelopeSlice slice = mfe::load_envelope_slice(pb_env);
      mfe::write_boundary_plotdata(mfe::analyze_boundary(slice, params), slice,
                                   pb_out, opt_str(pb_svg));
      return kExitOk;
    }
    if (*pd_thrust) {
      std::vector<double> alts;
      std::string::size_type pos = 0;
      while (pos <= tc_alts.size()) {
        const auto comma = tc_alts.find(',', pos);
        const std::string tok = tc_alts.substr(pos, comma - pos);
        if (!tok.empty()) {
          alts.push_back(std::stod(tok));
        }
        if (comma == std::string::npos) {
          break;
        }
        pos = comma + 1;
      }
      mfe::write_thrust_curves(params_from_option(tc_params), alts, tc_vmin,
                               tc_vmax, tc_step, tc_out, opt_str(tc_svg));
      return kExitOk;
    }
    if (*pd_traces) {
      mfe::write_state_traces(mfe::load_envelope_slice(st_env), st_out,
                              opt_str(st_svg));
      return kExitOk;
    }
    std::fprintf(stderr, "no subcommand selected\n");
    return kExitBadInput;
  } catch (const BadInput& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBadInput;
  } catch (const mfe::FileFormatError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBadInput;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBadInput;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kExitInternal;
  }
}
