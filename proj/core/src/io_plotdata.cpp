#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "io_common.hpp"
#include "mfe/boundary.hpp"
#include "mfe/flight_model.hpp"
#include "mfe/io.hpp"
#include "mfe/units.hpp"

namespace mfe {

namespace {

using io_detail::append_kv;
using io_detail::append_provenance;
using io_detail::fmt;

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.5g", v);
  return buf;
}

// Minimal SVG line/scatter plot: fixed canvas, linear axes, a handful of
// ticks.  Good enough to eyeball results without a plotting stack.
class SvgPlot {
 public:
  SvgPlot(std::string title, std::string xlabel, std::string ylabel)
      : title_(std::move(title)),
        xlabel_(std::move(xlabel)),
        ylabel_(std::move(ylabel)) {}

  void set_range(double xmin, double xmax, double ymin, double ymax) {
    if (xmax <= xmin) {
      xmax = xmin + 1.0;
    }
    if (ymax <= ymin) {
      ymax = ymin + 1.0;
    }
    xmin_ = xmin;
    xmax_ = xmax;
    ymin_ = ymin;
    ymax_ = ymax;
  }

  // Grow the range to cover a data series, with a little padding later.
  void include(double x, double y) {
    xmin_ = std::min(xmin_, x);
    xmax_ = std::max(xmax_, x);
    ymin_ = std::min(ymin_, y);
    ymax_ = std::max(ymax_, y);
  }
  bool has_range() const { return xmax_ >= xmin_; }
  void pad_range(double frac = 0.05) {
    const double dx = (xmax_ - xmin_) * frac + 1e-12;
    const double dy = (ymax_ - ymin_) * frac + 1e-12;
    set_range(xmin_ - dx, xmax_ + dx, ymin_ - dy, ymax_ + dy);
  }

  double sx(double x) const {
    return kLeft + (x - xmin_) / (xmax_ - xmin_) * (kWidth - kLeft - kRight);
  }
  double sy(double y) const {
    return kHeight - kBottom -
           (y - ymin_) / (ymax_ - ymin_) * (kHeight - kTop - kBottom);
  }

  void polyline(const std::vector<std::pair<double, double>>& pts,
                const char* color, double width, bool dashed = false) {
    if (pts.size() < 2) {
      return;
    }
    body_ += "<polyline fill=\"none\" stroke=\"";
    body_ += color;
    body_ += "\" stroke-width=\"" + short_num(width) + "\"";
    if (dashed) {
      body_ += " stroke-dasharray=\"6 4\"";
    }
    body_ += " points=\"";
    for (const auto& [x, y] : pts) {
      body_ += short_num(sx(x)) + "," + short_num(sy(y)) + " ";
    }
    body_ += "\"/>\n";
  }

  void rect(double x0, double y0, double x1, double y1, const char* fill) {
    const double px = sx(std::min(x0, x1));
    const double py = sy(std::max(y0, y1));
    const double w = std::abs(sx(x1) - sx(x0));
    const double h = std::abs(sy(y1) - sy(y0));
    body_ += "<rect x=\"" + short_num(px) + "\" y=\"" + short_num(py) +
             "\" width=\"" + short_num(w) + "\" height=\"" + short_num(h) +
             "\" fill=\"" + fill + "\"/>\n";
  }

  void circle(double x, double y, double r_px, const char* color) {
    body_ += "<circle cx=\"" + short_num(sx(x)) + "\" cy=\"" +
             short_num(sy(y)) + "\" r=\"" + short_num(r_px) + "\" fill=\"" +
             color + "\"/>\n";
  }

  void legend_entry(const char* color, const std::string& label) {
    legend_.emplace_back(color, label);
  }

  std::string render() const {
    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           short_num(kWidth) + "\" height=\"" + short_num(kHeight) +
           "\" viewBox=\"0 0 " + short_num(kWidth) + " " + short_num(kHeight) +
           "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // Gridlines and tick labels, five intervals per axis.
    for (int i = 0; i <= 5; ++i) {
      const double fx = xmin_ + (xmax_ - xmin_) * i / 5.0;
      const double fy = ymin_ + (ymax_ - ymin_) * i / 5.0;
      const double px = sx(fx);
      const double py = sy(fy);
      out += "<line x1=\"" + short_num(px) + "\" y1=\"" + short_num(sy(ymin_)) +
             "\" x2=\"" + short_num(px) + "\" y2=\"" + short_num(sy(ymax_)) +
             "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
      out += "<line x1=\"" + short_num(sx(xmin_)) + "\" y1=\"" +
             short_num(py) + "\" x2=\"" + short_num(sx(xmax_)) + "\" y2=\"" +
             short_num(py) + "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
      out += "<text x=\"" + short_num(px) + "\" y=\"" +
             short_num(kHeight - kBottom + 18) +
             "\" font-size=\"11\" text-anchor=\"middle\">" + short_num(fx) +
             "</text>\n";
      out += "<text x=\"" + short_num(kLeft - 8) + "\" y=\"" +
             short_num(py + 4) +
             "\" font-size=\"11\" text-anchor=\"end\">" + short_num(fy) +
             "</text>\n";
    }
    // Frame.
    out += "<rect x=\"" + short_num(kLeft) + "\" y=\"" + short_num(kTop) +
           "\" width=\"" + short_num(kWidth - kLeft - kRight) +
           "\" height=\"" + short_num(kHeight - kTop - kBottom) +
           "\" fill=\"none\" stroke=\"#333333\"/>\n";

    out += body_;

    out += "<text x=\"" + short_num(kWidth / 2) + "\" y=\"" +
           short_num(kTop - 12) +
           "\" font-size=\"14\" text-anchor=\"middle\">" + title_ +
           "</text>\n";
    out += "<text x=\"" + short_num(kWidth / 2) + "\" y=\"" +
           short_num(kHeight - 12) +
           "\" font-size=\"12\" text-anchor=\"middle\">" + xlabel_ +
           "</text>\n";
    out += "<text x=\"16\" y=\"" + short_num(kHeight / 2) +
           "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 "
           "16 " +
           short_num(kHeight / 2) + ")\">" + ylabel_ + "</text>\n";

    double ly = kTop + 14;
    for (const auto& [color, label] : legend_) {
      out += "<rect x=\"" + short_num(kWidth - kRight - 150) + "\" y=\"" +
             short_num(ly - 9) +
             "\" width=\"12\" height=\"12\" fill=\"" + color + "\"/>\n";
      out += "<text x=\"" + short_num(kWidth - kRight - 133) + "\" y=\"" +
             short_num(ly + 1) + "\" font-size=\"11\">" + label + "</text>\n";
      ly += 16;
    }
    out += "</svg>\n";
    return out;
  }

 private:
  static constexpr double kWidth = 720.0;
  static constexpr double kHeight = 480.0;
  static constexpr double kLeft = 70.0;
  static constexpr double kRight = 24.0;
  static constexpr double kTop = 40.0;
  static constexpr double kBottom = 56.0;

  std::string title_, xlabel_, ylabel_;
  double xmin_ = std::numeric_limits<double>::infinity();
  double xmax_ = -std::numeric_limits<double>::infinity();
  double ymin_ = std::numeric_limits<double>::infinity();
  double ymax_ = -std::numeric_limits<double>::infinity();
  std::string body_;
  std::vector<std::pair<const char*, std::string>> legend_;
};

const char* factor_color(LimitingFactor f) {
  switch (f) {
    case LimitingFactor::StallAlpha:
      return "#d62728";
    case LimitingFactor::AileronSaturation:
      return "#1f77b4";
    case LimitingFactor::RudderSaturation:
      return "#9467bd";
    case LimitingFactor::ElevatorSaturation:
      return "#2ca02c";
    case LimitingFactor::ThrustSaturation:
      return "#ff7f0e";
    case LimitingFactor::BankOnly:
      return "#8c564b";
    case LimitingFactor::Mixed:
      return "#7f7f7f";
  }
  return "#000000";
}

void slice_cell_rects(SvgPlot& plot, const EnvelopeSlice& slice) {
  const double hv = slice.v_kt.step / 2.0;
  const double hp = slice.psidot_degps.step / 2.0;
  plot.set_range(slice.v_kt.min - hv, slice.v_kt.max() + hv,
                 slice.psidot_degps.min - hp, slice.psidot_degps.max() + hp);
  for (int ip = 0; ip < slice.psidot_degps.count; ++ip) {
    for (int iv = 0; iv < slice.v_kt.count; ++iv) {
      const double v = slice.v_kt.value(iv);
      const double p = slice.psidot_degps.value(ip);
      plot.rect(v - hv, p - hp, v + hv, p + hp,
                slice.feasible(iv, ip) ? "#b5dcb5" : "#f0f0f0");
    }
  }
}

std::string slice_title(const EnvelopeSlice& slice) {
  std::string t = "h = " + short_num(slice.altitude_ft) +
                  " ft, gamma = " + short_num(slice.gamma_deg) + " deg";
  if (slice.provenance.failure) {
    t += ", " + slice.provenance.failure->describe();
  }
  return t;
}

}  // namespace

void write_envelope_plotdata(const EnvelopeSlice& slice,
                             const std::string& csv_path,
                             const std::optional<std::string>& svg_path) {
  std::string out;
  out += "# mfe envelope plotdata\n";
  append_kv(out, "altitude_ft", fmt(slice.altitude_ft));
  append_kv(out, "gamma_deg", fmt(slice.gamma_deg));
  append_provenance(out, slice.provenance);
  out += "V_kt,psidot_degps,feasible,status\n";
  for (int ip = 0; ip < slice.psidot_degps.count; ++ip) {
    for (int iv = 0; iv < slice.v_kt.count; ++iv) {
      out += fmt(slice.v_kt.value(iv));
      out += ',';
      out += fmt(slice.psidot_degps.value(ip));
      out += ',';
      out += slice.feasible(iv, ip) ? '1' : '0';
      out += ',';
      out += trim_status_name(slice.at(iv, ip).status);
      out += '\n';
    }
  }
  io_detail::write_atomic(csv_path, out);

  if (svg_path) {
    SvgPlot plot("Envelope, " + slice_title(slice), "V [kt]",
                 "turn rate [deg/s]");
    slice_cell_rects(plot, slice);
    plot.legend_entry("#b5dcb5", "feasible");
    plot.legend_entry("#f0f0f0", "infeasible");
    io_detail::write_atomic(*svg_path, plot.render());
  }
}

void write_boundary_plotdata(const BoundaryReport& report,
                             const EnvelopeSlice& slice,
                             const std::string& csv_path,
                             const std::optional<std::string>& svg_path) {
  std::string out;
  out += "# mfe boundary plotdata\n";
  append_kv(out, "altitude_ft", fmt(slice.altitude_ft));
  append_kv(out, "gamma_deg", fmt(slice.gamma_deg));
  append_provenance(out, slice.provenance);
  out += "seq,part,V_kt,psidot_degps,factor\n";
  const std::size_t walk_points =
      report.points.size() -
      std::min(report.points.size(), report.trace.extras.size());
  for (std::size_t i = 0; i < report.points.size(); ++i) {
    const BoundaryPoint& p = report.points[i];
    out += std::to_string(i);
    out += ',';
    out += i < walk_points ? "walk" : "extra";
    out += ',';
    out += fmt(p.v_kt);
    out += ',';
    out += fmt(p.psidot_degps);
    out += ',';
    out += factor_name(p.factor);
    out += '\n';
  }
  io_detail::write_atomic(csv_path, out);

  if (svg_path) {
    SvgPlot plot("Envelope boundary, " + slice_title(slice), "V [kt]",
                 "turn rate [deg/s]");
    slice_cell_rects(plot, slice);

    std::vector<std::pair<double, double>> contour;
    for (const auto& [iv, ip] : report.trace.walk) {
      contour.emplace_back(slice.v_kt.value(iv),
                           slice.psidot_degps.value(ip));
    }
    if (contour.size() > 2) {
      contour.push_back(contour.front());
    }
    plot.polyline(contour, "#555555", 1.0);

    std::set<LimitingFactor> present;
    for (const BoundaryPoint& p : report.points) {
      plot.circle(p.v_kt, p.psidot_degps, 3.0, factor_color(p.factor));
      present.insert(p.factor);
    }
    for (LimitingFactor f : present) {
      plot.legend_entry(factor_color(f), factor_name(f));
    }
    io_detail::write_atomic(*svg_path, plot.render());
  }
}

void write_thrust_curves(const AircraftParams& params,
                         const std::vector<double>& altitudes_ft,
                         double v_min_kt, double v_max_kt, double step_kt,
                         const std::string& csv_path,
                         const std::optional<std::string>& svg_path) {
  if (altitudes_ft.empty() || !(step_kt > 0.0) || v_max_kt < v_min_kt ||
      !(v_min_kt > 0.0)) {
    throw std::invalid_argument("write_thrust_curves: bad sweep range");
  }
  const AxisSpec v_axis = AxisSpec::from_range(v_min_kt, v_max_kt, step_kt);

  std::string out;
  out += "# mfe thrust curves\n";
  append_kv(out, "params_hash", params_fingerprint(params));
  out += "h_ft,V_kt,thrust_available_N,thrust_required_N\n";

  struct Curve {
    std::vector<std::pair<double, double>> avail, req;
  };
  std::vector<Curve> curves(altitudes_ft.size());

  for (std::size_t a = 0; a < altitudes_ft.size(); ++a) {
    const double h_m = ft2m(altitudes_ft[a]);
    for (int i = 0; i < v_axis.count; ++i) {
      const double v_kt = v_axis.value(i);
      const double V = kt2mps(v_kt);
      const double ta = thrust_available(h_m, V, 1.0, params.propulsion);
      const double tr = thrust_required(params, h_m, V, 0.0, 0.0, 0.0);
      out += fmt(altitudes_ft[a]);
      out += ',';
      out += fmt(v_kt);
      out += ',';
      out += fmt(ta);
      out += ',';
      out += fmt(tr);
      out += '\n';
      curves[a].avail.emplace_back(v_kt, ta);
      curves[a].req.emplace_back(v_kt, tr);
    }
  }
  io_detail::write_atomic(csv_path, out);

  if (svg_path) {
    static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                     "#9467bd", "#ff7f0e", "#8c564b"};
    SvgPlot plot("Thrust available (solid) vs required (dashed)", "V [kt]",
                 "thrust [N]");
    for (const Curve& c : curves) {
      for (const auto& [x, y] : c.avail) {
        plot.include(x, y);
      }
      for (const auto& [x, y] : c.req) {
        plot.include(x, y);
      }
    }
    plot.pad_range();
    for (std::size_t a = 0; a < curves.size(); ++a) {
      const char* color = kPalette[a % 6];
      plot.polyline(curves[a].avail, color, 1.5);
      plot.polyline(curves[a].req, color, 1.5, true);
      plot.legend_entry(color, "h = " + short_num(altitudes_ft[a]) + " ft");
    }
    io_detail::write_atomic(*svg_path, plot.render());
  }
}

void write_state_traces(const EnvelopeSlice& slice, const std::string& csv_path,
                        const std::optional<std::string>& svg_path) {
  const int j0 = slice.j_zero();

  std::string out;
  out += "# mfe state traces (psidot = 0 row)\n";
  append_kv(out, "altitude_ft", fmt(slice.altitude_ft));
  append_kv(out, "gamma_deg", fmt(slice.gamma_deg));
  append_provenance(out, slice.provenance);
  out +=
      "V_kt,status,alpha_deg,theta_deg,beta_deg,phi_deg,dth,de_deg,da_deg,"
      "dr_deg,residual\n";

  std::vector<std::pair<double, double>> alpha_pts, de_pts, dth_pts;
  for (int iv = 0; iv < slice.v_kt.count; ++iv) {
    const TrimResult& c = slice.at(iv, j0);
    const double v_kt = slice.v_kt.value(iv);
    out += fmt(v_kt);
    out += ',';
    out += trim_status_name(c.status);
    out += ',';
    out += fmt(rad2deg(c.state.alpha));
    out += ',';
    out += fmt(rad2deg(c.state.theta));
    out += ',';
    out += fmt(rad2deg(c.state.beta));
    out += ',';
    out += fmt(rad2deg(c.state.phi));
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
    if (c.feasible()) {
      alpha_pts.emplace_back(v_kt, rad2deg(c.state.alpha));
      de_pts.emplace_back(v_kt, rad2deg(c.controls.elevator));
      dth_pts.emplace_back(v_kt, c.controls.throttle * 10.0);
    }
  }
  io_detail::write_atomic(csv_path, out);

  if (svg_path) {
    SvgPlot plot("Straight-flight trim traces, " + slice_title(slice),
                 "V [kt]", "deg / (throttle x 10)");
    for (const auto& series : {alpha_pts, de_pts, dth_pts}) {
      for (const auto& [x, y] : series) {
        plot.include(x, y);
      }
    }
    plot.pad_range();
    plot.polyline(alpha_pts, "#d62728", 1.5);
    plot.polyline(de_pts, "#1f77b4", 1.5);
    plot.polyline(dth_pts, "#7f7f7f", 1.5, true);
    plot.legend_entry("#d62728", "alpha [deg]");
    plot.legend_entry("#1f77b4", "elevator [deg]");
    plot.legend_entry("#7f7f7f", "throttle x 10");
    io_detail::write_atomic(*svg_path, plot.render());
  }
}

}  // namespace mfe
