#include <algorithm>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "io_common.hpp"
#include "mfe/io.hpp"
#include "mfe/units.hpp"

namespace mfe {

using nlohmann::json;

namespace {

json window_to_deg(const Window& w) {
  return json::array({rad2deg(w.lower), rad2deg(w.upper)});
}

Window window_from_deg(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 2) {
    throw FileFormatError("'" + key + "' must be a [lower, upper] pair");
  }
  return {deg2rad(j[0].get<double>()), deg2rad(j[1].get<double>())};
}

[[noreturn]] void rethrow_as_format_error(const std::string& path,
                                          const std::exception& e) {
  throw FileFormatError(path + ": " + e.what());
}

}  // namespace

AircraftParams load_params(const std::string& path) {
  json j;
  try {
    j = json::parse(io_detail::read_file(path));
  } catch (const json::exception& e) {
    rethrow_as_format_error(path, e);
  }

  AircraftParams p;
  try {
    p.name = j.at("name").get<std::string>();

    const json& mg = j.at("mass_geometry");
    p.weight = mg.at("weight_N").get<double>();
    p.mass = mg.at("mass_kg").get<double>();
    p.wing_area = mg.at("wing_area_m2").get<double>();
    p.span = mg.at("span_m").get<double>();
    p.chord = mg.at("chord_m").get<double>();
    p.Ixx = mg.at("Ixx_kgm2").get<double>();
    p.Iyy = mg.at("Iyy_kgm2").get<double>();
    p.Izz = mg.at("Izz_kgm2").get<double>();
    p.Ixz = mg.at("Ixz_kgm2").get<double>();

    const json& a = j.at("aero");
    AeroDerivativeSet& d = p.aero;
    d.CL0 = a.at("CL0").get<double>();
    d.CLalpha = a.at("CLalpha").get<double>();
    d.alpha_crit = deg2rad(a.at("alpha_crit_deg").get<double>());
    d.post_stall_slope = a.at("post_stall_slope").get<double>();
    d.stall_blend = deg2rad(a.value("stall_blend_deg", 0.0));
    d.CD0 = a.at("CD0").get<double>();
    d.K = a.at("K").get<double>();
    d.CDbeta = a.at("CDbeta").get<double>();
    d.CYbeta = a.at("CYbeta").get<double>();
    d.Clbeta = a.at("Clbeta").get<double>();
    d.Clp = a.at("Clp").get<double>();
    d.Clr = a.at("Clr").get<double>();
    d.Clda = a.at("Clda").get<double>();
    d.Cldr = a.at("Cldr").get<double>();
    d.Cm0 = a.at("Cm0").get<double>();
    d.Cmalpha = a.at("Cmalpha").get<double>();
    d.Cmq = a.at("Cmq").get<double>();
    d.Cmde = a.at("Cmde").get<double>();
    d.Cnbeta = a.at("Cnbeta").get<double>();
    d.Cnp = a.at("Cnp").get<double>();
    d.Cnr = a.at("Cnr").get<double>();
    d.Cnda = a.at("Cnda").get<double>();
    d.Cndr = a.at("Cndr").get<double>();
    d.CY0 = a.value("CY0", 0.0);
    d.Cl0 = a.value("Cl0", 0.0);
    d.Cn0 = a.value("Cn0", 0.0);

    const json& pr = j.at("propulsion");
    p.propulsion.max_static_thrust = pr.at("max_static_thrust_N").get<double>();
    p.propulsion.density_exponent = pr.at("density_exponent").get<double>();
    p.propulsion.speed_falloff_c1 = pr.value("speed_falloff_c1", 0.0);
    p.propulsion.speed_falloff_c2 = pr.value("speed_falloff_c2", 0.0);

    const json& lim = j.at("limits");
    const Window alpha = window_from_deg(lim.at("alpha_deg"), "alpha_deg");
    p.limits.alpha_min = alpha.lower;
    p.limits.alpha_max = alpha.upper;
    p.limits.beta_max = deg2rad(lim.at("beta_max_deg").get<double>());
    p.limits.phi_max = deg2rad(lim.at("phi_max_deg").get<double>());
    p.limits.elevator = window_from_deg(lim.at("elevator_deg"), "elevator_deg");
    p.limits.aileron = window_from_deg(lim.at("aileron_deg"), "aileron_deg");
    p.limits.rudder = window_from_deg(lim.at("rudder_deg"), "rudder_deg");
    const json& th = lim.at("throttle");
    if (!th.is_array() || th.size() != 2) {
      throw FileFormatError("'throttle' must be a [lower, upper] pair");
    }
    p.limits.throttle = {th[0].get<double>(), th[1].get<double>()};
  } catch (const json::exception& e) {
    rethrow_as_format_error(path, e);
  }

  validate_params(p);
  return p;
}

void save_params(const AircraftParams& p, const std::string& path) {
  const AeroDerivativeSet& d = p.aero;
  json j = {
      {"name", p.name},
      {"mass_geometry",
       {{"weight_N", p.weight},
        {"mass_kg", p.mass},
        {"wing_area_m2", p.wing_area},
        {"span_m", p.span},
        {"chord_m", p.chord},
        {"Ixx_kgm2", p.Ixx},
        {"Iyy_kgm2", p.Iyy},
        {"Izz_kgm2", p.Izz},
        {"Ixz_kgm2", p.Ixz}}},
      {"aero",
       {{"CL0", d.CL0},
        {"CLalpha", d.CLalpha},
        {"alpha_crit_deg", rad2deg(d.alpha_crit)},
        {"post_stall_slope", d.post_stall_slope},
        {"stall_blend_deg", rad2deg(d.stall_blend)},
        {"CD0", d.CD0},
        {"K", d.K},
        {"CDbeta", d.CDbeta},
        {"CYbeta", d.CYbeta},
        {"Clbeta", d.Clbeta},
        {"Clp", d.Clp},
        {"Clr", d.Clr},
        {"Clda", d.Clda},
        {"Cldr", d.Cldr},
        {"Cm0", d.Cm0},
        {"Cmalpha", d.Cmalpha},
        {"Cmq", d.Cmq},
        {"Cmde", d.Cmde},
        {"Cnbeta", d.Cnbeta},
        {"Cnp", d.Cnp},
        {"Cnr", d.Cnr},
        {"Cnda", d.Cnda},
        {"Cndr", d.Cndr},
        {"CY0", d.CY0},
        {"Cl0", d.Cl0},
        {"Cn0", d.Cn0}}},
      {"propulsion",
       {{"max_static_thrust_N", p.propulsion.max_static_thrust},
        {"density_exponent", p.propulsion.density_exponent},
        {"speed_falloff_c1", p.propulsion.speed_falloff_c1},
        {"speed_falloff_c2", p.propulsion.speed_falloff_c2}}},
      {"limits",
       {{"alpha_deg",
         json::array({rad2deg(p.limits.alpha_min), rad2deg(p.limits.alpha_max)})},
        {"beta_max_deg", rad2deg(p.limits.beta_max)},
        {"phi_max_deg", rad2deg(p.limits.phi_max)},
        {"elevator_deg", window_to_deg(p.limits.elevator)},
        {"aileron_deg", window_to_deg(p.limits.aileron)},
        {"rudder_deg", window_to_deg(p.limits.rudder)},
        {"throttle",
         json::array({p.limits.throttle.lower, p.limits.throttle.upper})}}},
  };
  io_detail::write_atomic(path, j.dump(2) + "\n");
}

namespace {

AxisSpec axis_from_json(const json& j, const std::string& key) {
  if (j.is_number()) {
    return AxisSpec{j.get<double>(), 1.0, 1};  // single-value axis
  }
  try {
    return AxisSpec::from_range(j.at("min").get<double>(),
                                j.at("max").get<double>(),
                                j.at("step").get<double>());
  } catch (const json::exception& e) {
    throw FileFormatError("grid axis '" + key + "': " + e.what());
  }
}

}  // namespace

RunManifest load_manifest(const std::string& path) {
  json j;
  try {
    j = json::parse(io_detail::read_file(path));
  } catch (const json::exception& e) {
    rethrow_as_format_error(path, e);
  }

  RunManifest m;
  try {
    if (j.contains("params")) {
      m.params_path = j.at("params").get<std::string>();
    }
    const json& g = j.at("grid");
    m.grid.v_kt = axis_from_json(g.at("v_kt"), "v_kt");
    m.grid.psidot_degps = axis_from_json(g.at("psidot_degps"), "psidot_degps");
    m.grid.gamma_deg = axis_from_json(g.at("gamma_deg"), "gamma_deg");
    m.grid.altitudes_ft = g.at("altitudes_ft").get<std::vector<double>>();

    for (const json& c : j.at("cases")) {
      CaseSpec spec;
      spec.name = c.at("name").get<std::string>();
      if (spec.name.empty() ||
          spec.name.find_first_of("/\\ \t") != std::string::npos) {
        throw FileFormatError("case name '" + spec.name +
                              "' is empty or not filename-safe");
      }
      if (c.contains("failure")) {
        const json& f = c.at("failure");
        FailureSpec fs;
        fs.surface = surface_from_name(f.at("surface").get<std::string>());
        const double lo = f.at("lower").get<double>();
        const double up = f.at("upper").get<double>();
        if (fs.surface == Surface::Throttle) {
          fs.lower = lo;
          fs.upper = up;
        } else {
          fs.lower = deg2rad(lo);
          fs.upper = deg2rad(up);
        }
        spec.failure = fs;
      }
      if (c.contains("mirror_of")) {
        spec.mirror_of = c.at("mirror_of").get<std::string>();
      }
      m.cases.push_back(std::move(spec));
    }

    if (j.contains("validation")) {
      const json& v = j.at("validation");
      m.validation_samples = v.value("samples", m.validation_samples);
      m.validation_seed = v.value("seed", m.validation_seed);
    }
  } catch (const json::exception& e) {
    rethrow_as_format_error(path, e);
  }

  for (const CaseSpec& c : m.cases) {
    if (!c.mirror_of) {
      continue;
    }
    if (c.failure) {
      throw FileFormatError("case '" + c.name +
                            "' gives both a failure and mirror_of");
    }
    const auto src = std::find_if(
        m.cases.begin(), m.cases.end(),
        [&](const CaseSpec& o) { return o.name == *c.mirror_of; });
    if (src == m.cases.end() || src->name == c.name) {
      throw FileFormatError("case '" + c.name + "' mirrors unknown case '" +
                            *c.mirror_of + "'");
    }
    if (src->mirror_of) {
      throw FileFormatError("case '" + c.name +
                            "' mirrors another mirrored case");
    }
  }
  return m;
}

void save_separation_report(const SeparationReport& r,
                            const std::string& path) {
  auto side = [](const SeparationReport::Side& s) {
    return json{{"retreat_cells", s.retreat_cells},
                {"retreat_units", s.retreat_units},
                {"attached", s.attached},
                {"lost_cells", s.lost_cells}};
  };
  json j = {{"left", side(r.left)},
            {"right", side(r.right)},
            {"top", side(r.top)},
            {"bottom", side(r.bottom)},
            {"most_affected", r.most_affected}};
  io_detail::write_atomic(path, j.dump(2) + "\n");
}

}  // namespace mfe
