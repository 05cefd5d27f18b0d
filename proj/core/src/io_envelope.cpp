#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "io_common.hpp"
#include "mfe/io.hpp"
#include "mfe/units.hpp"

namespace mfe {

namespace {

using io_detail::fmt;

using io_detail::append_kv;
using io_detail::append_provenance;

constexpr const char* kSliceMagic = "# mfe envelope slice";
constexpr const char* kSliceColumns =
    "h_ft,V_kt,gamma_deg,psidot_degps,status,alpha_deg,beta_deg,phi_deg,"
    "theta_deg,p_radps,q_radps,r_radps,dth,de_deg,da_deg,dr_deg,residual";

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    out.push_back(field);
  }
  if (!line.empty() && line.back() == ',') {
    out.emplace_back();
  }
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw FileFormatError("bad number '" + s + "' in " + what);
  }
  return v;
}

struct HeaderMap {
  std::map<std::string, std::string> kv;
  std::string path;

  const std::string& require(const std::string& key) const {
    const auto it = kv.find(key);
    if (it == kv.end()) {
      throw FileFormatError(path + ": header is missing '" + key + "'");
    }
    return it->second;
  }
  double require_num(const std::string& key) const {
    return parse_double(require(key), "header key '" + key + "'");
  }
  bool has(const std::string& key) const { return kv.count(key) != 0; }
};

// Reads "# key = value" lines after the magic line; returns the index of the
// first non-header line.
std::size_t parse_header(const std::vector<std::string>& lines,
                         const std::string& path, const char* magic,
                         HeaderMap& header) {
  if (lines.empty() || lines[0] != magic) {
    throw FileFormatError(path +
                          ": missing provenance header; refusing to guess "
                          "what this file contains");
  }
  std::size_t i = 1;
  for (; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.rfind("# ", 0) != 0) {
      break;
    }
    const std::size_t eq = line.find(" = ");
    if (eq == std::string::npos) {
      throw FileFormatError(path + ": malformed header line '" + line + "'");
    }
    header.kv[line.substr(2, eq - 2)] = line.substr(eq + 3);
  }
  return i;
}

std::vector<std::string> split_lines(const std::string& content) {
  std::vector<std::string> lines;
  std::stringstream ss(content);
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    lines.push_back(line);
  }
  return lines;
}

int axis_index(const AxisSpec& axis, double value, const char* what,
               const std::string& path) {
  const int i = static_cast<int>(std::lround((value - axis.min) / axis.step));
  if (i < 0 || i >= axis.count ||
      std::abs(axis.value(i) - value) >
          1e-9 * std::max(1.0, std::abs(value))) {
    throw FileFormatError(path + ": " + what + " value " + fmt(value) +
                          " is not on the declared grid");
  }
  return i;
}

}  // namespace

void save_envelope_slice(const EnvelopeSlice& s, const std::string& path) {
  std::string out;
  out.reserve(s.cells.size() * 180 + 1024);
  out += kSliceMagic;
  out += "\n";
  append_kv(out, "altitude_ft", fmt(s.altitude_ft));
  append_kv(out, "gamma_deg", fmt(s.gamma_deg));
  append_kv(out, "v_kt_min", fmt(s.v_kt.min));
  append_kv(out, "v_kt_step", fmt(s.v_kt.step));
  append_kv(out, "v_kt_count", std::to_string(s.v_kt.count));
  append_kv(out, "psidot_degps_min", fmt(s.psidot_degps.min));
  append_kv(out, "psidot_degps_step", fmt(s.psidot_degps.step));
  append_kv(out, "psidot_degps_count", std::to_string(s.psidot_degps.count));
  append_provenance(out, s.provenance);
  out += kSliceColumns;
  out += "\n";

  for (int ip = 0; ip < s.psidot_degps.count; ++ip) {
    for (int iv = 0; iv < s.v_kt.count; ++iv) {
      const TrimResult& c = s.at(iv, ip);
      out += fmt(s.altitude_ft);
      out += ',';
      out += fmt(s.v_kt.value(iv));
      out += ',';
      out += fmt(s.gamma_deg);
      out += ',';
      out += fmt(s.psidot_degps.value(ip));
      out += ',';
      out += trim_status_name(c.status);
      out += ',';
      out += fmt(rad2deg(c.state.alpha));
      out += ',';
      out += fmt(rad2deg(c.state.beta));
      out += ',';
      out += fmt(rad2deg(c.state.phi));
      out += ',';
      out += fmt(rad2deg(c.state.theta));
      out += ',';
      out += fmt(c.state.p);
      out += ',';
      out += fmt(c.state.q);
      out += ',';
      out += fmt(c.state.r);
      out += ',';
      out += fmt(c.controls.throttle);
      out += ',';
      out += fmt(rad2deg(c.controls.elevator));
      out += ',';
      out += fmt(rad2deg(c.controls.aileron));
      out += ',';
      out += fmt(rad2deg(c.controls.rudder));
      out += ',';
      out += fmt(c.residual);
      out += '\n';
    }
  }
  io_detail::write_atomic(path, out);
}

EnvelopeSlice load_envelope_slice(const std::string& path) {
  const std::vector<std::string> lines =
      split_lines(io_detail::read_file(path));
  HeaderMap header;
  header.path = path;
  std::size_t row = parse_header(lines, path, kSliceMagic, header);

  if (row >= lines.size() || lines[row] != kSliceColumns) {
    throw FileFormatError(path + ": unexpected column layout");
  }
  ++row;

  EnvelopeSlice s;
  s.altitude_ft = header.require_num("altitude_ft");
  s.gamma_deg = header.require_num("gamma_deg");
  s.v_kt.min = header.require_num("v_kt_min");
  s.v_kt.step = header.require_num("v_kt_step");
  s.v_kt.count = static_cast<int>(header.require_num("v_kt_count"));
  s.psidot_degps.min = header.require_num("psidot_degps_min");
  s.psidot_degps.step = header.require_num("psidot_degps_step");
  s.psidot_degps.count =
      static_cast<int>(header.require_num("psidot_degps_count"));
  if (s.v_kt.count < 1 || s.psidot_degps.count < 1 || s.v_kt.step <= 0.0 ||
      s.psidot_degps.step <= 0.0) {
    throw FileFormatError(path + ": degenerate grid axes in header");
  }

  s.provenance.tool_version = header.require("version");
  s.provenance.params_hash = header.require("params_hash");
  s.provenance.mirrored = header.require("mirrored") == "1";
  if (header.has("failure_surface")) {
    FailureSpec f;
    try {
      f.surface = surface_from_name(header.require("failure_surface"));
    } catch (const std::invalid_argument& e) {
      throw FileFormatError(path + ": " + e.what());
    }
    const bool ang = f.surface != Surface::Throttle;
    const double lo = header.require_num("failure_lower");
    const double up = header.require_num("failure_upper");
    f.lower = ang ? deg2rad(lo) : lo;
    f.upper = ang ? deg2rad(up) : up;
    s.provenance.failure = f;
  }
  s.provenance.solver.tol_J = header.require_num("solver_tol_j");
  s.provenance.solver.tol_xdot_inf = header.require_num("solver_tol_xdot");
  s.provenance.solver.max_iterations =
      static_cast<int>(header.require_num("solver_max_iterations"));

  const std::size_t ncells =
      static_cast<std::size_t>(s.v_kt.count) * s.psidot_degps.count;
  s.cells.resize(ncells);
  std::vector<char> seen(ncells, 0);

  for (; row < lines.size(); ++row) {
    if (lines[row].empty()) {
      continue;
    }
    const std::vector<std::string> f = split_csv(lines[row]);
    if (f.size() != 17) {
      throw FileFormatError(path + ": row with " + std::to_string(f.size()) +
                            " fields, expected 17");
    }
    const std::string where = "row " + std::to_string(row + 1);
    const double h_ft = parse_double(f[0], where);
    const double v_kt = parse_double(f[1], where);
    const double gamma_deg = parse_double(f[2], where);
    const double psidot = parse_double(f[3], where);
    if (std::abs(h_ft - s.altitude_ft) > 1e-9 ||
        std::abs(gamma_deg - s.gamma_deg) > 1e-9) {
      throw FileFormatError(path + ": " + where +
                            " disagrees with the header altitude or gamma");
    }
    const int iv = axis_index(s.v_kt, v_kt, "V_kt", path);
    const int ip = axis_index(s.psidot_degps, psidot, "psidot_degps", path);
    const int idx = s.index(iv, ip);
    if (seen[idx]) {
      throw FileFormatError(path + ": duplicate cell at V = " + f[1] +
                            ", psidot = " + f[3]);
    }
    seen[idx] = 1;

    TrimResult& c = s.cells[idx];
    c.target.h = ft2m(h_ft);
    c.target.V = kt2mps(v_kt);
    c.target.gamma = deg2rad(gamma_deg);
    c.target.psidot = deg2rad(psidot);
    try {
      c.status = trim_status_from_name(f[4]);
    } catch (const std::invalid_argument& e) {
      throw FileFormatError(path + ": " + where + ": " + e.what());
    }
    c.state.V = c.target.V;
    c.state.h = c.target.h;
    c.state.alpha = deg2rad(parse_double(f[5], where));
    c.state.beta = deg2rad(parse_double(f[6], where));
    c.state.phi = deg2rad(parse_double(f[7], where));
    c.state.theta = deg2rad(parse_double(f[8], where));
    c.state.p = parse_double(f[9], where);
    c.state.q = parse_double(f[10], where);
    c.state.r = parse_double(f[11], where);
    c.controls.throttle = parse_double(f[12], where);
    c.controls.elevator = deg2rad(parse_double(f[13], where));
    c.controls.aileron = deg2rad(parse_double(f[14], where));
    c.controls.rudder = deg2rad(parse_double(f[15], where));
    c.residual = parse_double(f[16], where);
    c.reason = c.feasible() ? InfeasibleReason::None
                            : InfeasibleReason::ConstraintBound;
  }

  for (std::size_t i = 0; i < ncells; ++i) {
    if (!seen[i]) {
      throw FileFormatError(path + ": grid is missing cells");
    }
  }
  return s;
}

std::string slice_filename(const std::string& case_name, double altitude_ft,
                           double gamma_deg) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s_h%gft_g%gdeg.csv", case_name.c_str(),
                altitude_ft, gamma_deg);
  return buf;
}

void save_boundary_report(const BoundaryReport& report,
                          const EnvelopeSlice& slice, const std::string& path) {
  std::string out;
  out += "# mfe boundary report\n";
  append_kv(out, "altitude_ft", fmt(slice.altitude_ft));
  append_kv(out, "gamma_deg", fmt(slice.gamma_deg));
  append_provenance(out, slice.provenance);
  append_kv(out, "walk_cells", std::to_string(report.trace.walk.size()));
  append_kv(out, "extra_cells", std::to_string(report.trace.extras.size()));
  out +=
      "V_kt,psidot_degps,factor,alpha_deg,phi_deg,beta_deg,dth,de_deg,da_deg,"
      "dr_deg\n";
  for (const BoundaryPoint& p : report.points) {
    const TrimResult& c = *p.cell;
    out += fmt(p.v_kt);
    out += ',';
    out += fmt(p.psidot_degps);
    out += ',';
    out += factor_name(p.factor);
    out += ',';
    out += fmt(rad2deg(c.state.alpha));
    out += ',';
    out += fmt(rad2deg(c.state.phi));
    out += ',';
    out += fmt(rad2deg(c.state.beta));
    out += ',';
    out += fmt(c.controls.throttle);
    out += ',';
    out += fmt(rad2deg(c.controls.elevator));
    out += ',';
    out += fmt(rad2deg(c.controls.aileron));
    out += ',';
    out += fmt(rad2deg(c.controls.rudder));
    out += '\n';
  }
  io_detail::write_atomic(path, out);
}

}  // namespace mfe
