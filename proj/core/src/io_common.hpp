#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "mfe/envelope.hpp"
#include "mfe/io.hpp"
#include "mfe/units.hpp"

namespace mfe::io_detail {

// Enough digits for an exact double round trip, locale-independent.
inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void append_kv(std::string& out, const char* key,
                      const std::string& value) {
  out += "# ";
  out += key;
  out += " = ";
  out += value;
  out += "\n";
}

inline void append_provenance(std::string& out, const SliceProvenance& prov) {
  append_kv(out, "version", prov.tool_version);
  append_kv(out, "params_hash", prov.params_hash);
  append_kv(out, "mirrored", prov.mirrored ? "1" : "0");
  if (prov.failure) {
    const FailureSpec& f = *prov.failure;
    append_kv(out, "failure_surface", surface_name(f.surface));
    const bool ang = f.surface != Surface::Throttle;
    append_kv(out, "failure_lower", fmt(ang ? rad2deg(f.lower) : f.lower));
    append_kv(out, "failure_upper", fmt(ang ? rad2deg(f.upper) : f.upper));
  }
  append_kv(out, "solver_tol_j", fmt(prov.solver.tol_J));
  append_kv(out, "solver_tol_xdot", fmt(prov.solver.tol_xdot_inf));
  append_kv(out, "solver_max_iterations",
            std::to_string(prov.solver.max_iterations));
}

// Write-to-temp-then-rename so readers never see a partial file.
inline void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open '" + tmp + "' for writing");
    }
    out << content;
    out.flush();
    if (!out) {
      throw std::runtime_error("write to '" + tmp + "' failed");
    }
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw FileFormatError("cannot open '" + path + "'");
  }
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  return content;
}

}  // namespace mfe::io_detail
