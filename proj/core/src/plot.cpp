#include "lavfem/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "lavfem/verification.hpp"

namespace lavfem {

std::string to_string(PlotKind kind) {
  switch (kind) {
    case PlotKind::error_curve: return "error-curve";
    case PlotKind::solution_1d: return "solution-1d";
    case PlotKind::error_surface_2d: return "error-surface-2d";
  }
  return "unknown";
}

PlotKind parse_plot_kind(const std::string& s) {
  if (s == "error-curve") return PlotKind::error_curve;
  if (s == "solution-1d") return PlotKind::solution_1d;
  if (s == "error-surface-2d") return PlotKind::error_surface_2d;
  throw std::invalid_argument("unknown plot kind '" + s +
                              "' (expected error-curve, solution-1d or error-surface-2d)");
}

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0, kRight = 190.0, kTop = 40.0, kBottom = 60.0;

const std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                          "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v, int prec = 4) {
  std::ostringstream ss;
  ss.precision(prec);
  ss << v;
  return ss.str();
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

void header(std::ostream& os, const std::string& title) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
     << escape(title) << "</text>\n";
}

// Maps data coordinates to the plot box, optionally in log10.
struct Axis {
  double lo, hi;
  bool log;
  double pix_lo, pix_hi;

  double operator()(double v) const {
    const double a = log ? std::log10(lo) : lo;
    const double b = log ? std::log10(hi) : hi;
    const double t = ((log ? std::log10(v) : v) - a) / (b - a);
    return pix_lo + t * (pix_hi - pix_lo);
  }
};

void frame(std::ostream& os) {
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth - kLeft - kRight
     << "\" height=\"" << kHeight - kTop - kBottom
     << "\" fill=\"none\" stroke=\"black\"/>\n";
}

void ticks(std::ostream& os, const Axis& ax, bool horizontal) {
  std::vector<double> at;
  if (ax.log) {
    for (int p = static_cast<int>(std::floor(std::log10(ax.lo)));
         p <= static_cast<int>(std::ceil(std::log10(ax.hi))); ++p) {
      const double v = std::pow(10.0, p);
      if (v >= ax.lo * (1 - 1e-12) && v <= ax.hi * (1 + 1e-12)) at.push_back(v);
    }
    if (at.empty()) at = {ax.lo, ax.hi};
  } else {
    for (int k = 0; k <= 4; ++k) at.push_back(ax.lo + (ax.hi - ax.lo) * k / 4.0);
  }
  for (double v : at) {
    const double p = ax(v);
    const std::string label = ax.log ? "1e" + num(std::round(std::log10(v)), 3) : num(v, 3);
    if (horizontal) {
      os << "<line x1=\"" << p << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << p << "\" y2=\""
         << kHeight - kBottom + 5 << "\" stroke=\"black\"/>\n"
         << "<text x=\"" << p << "\" y=\"" << kHeight - kBottom + 20
         << "\" text-anchor=\"middle\" font-size=\"11\">" << label << "</text>\n";
    } else {
      os << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << p << "\" x2=\"" << kLeft << "\" y2=\"" << p
         << "\" stroke=\"black\"/>\n"
         << "<text x=\"" << kLeft - 8 << "\" y=\"" << p + 4
         << "\" text-anchor=\"end\" font-size=\"11\">" << label << "</text>\n";
    }
  }
}

void axis_label(std::ostream& os, const std::string& text) {
  os << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 15
     << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(text) << "</text>\n";
}

void legend_entry(std::ostream& os, std::size_t k, const std::string& color,
                  const std::string& text, bool dashed = false) {
  const double y = kTop + 12 + 20.0 * static_cast<double>(k);
  const double x = kWidth - kRight + 12;
  os << "<line x1=\"" << x << "\" y1=\"" << y << "\" x2=\"" << x + 22 << "\" y2=\"" << y
     << "\" stroke=\"" << color << "\" stroke-width=\"2\""
     << (dashed ? " stroke-dasharray=\"5,3\"" : "") << "/>\n"
     << "<text x=\"" << x + 28 << "\" y=\"" << y + 4 << "\" font-size=\"11\">" << escape(text)
     << "</text>\n";
}

// Viridis-like ramp through five anchors.
std::string ramp(double t) {
  static constexpr std::array<std::array<double, 3>, 5> kAnchors{{{68, 1, 84},
                                                                   {59, 82, 139},
                                                                   {33, 145, 140},
                                                                   {94, 201, 98},
                                                                   {253, 231, 37}}};
  t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
  const double s = t * (kAnchors.size() - 1);
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(s), kAnchors.size() - 2);
  const double f = s - static_cast<double>(i);
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                static_cast<int>(std::lround(kAnchors[i][0] + f * (kAnchors[i + 1][0] - kAnchors[i][0]))),
                static_cast<int>(std::lround(kAnchors[i][1] + f * (kAnchors[i + 1][1] - kAnchors[i][1]))),
                static_cast<int>(std::lround(kAnchors[i][2] + f * (kAnchors[i + 1][2] - kAnchors[i][2]))));
  return buf;
}

}  // namespace

void write_loglog_svg(std::ostream& os, std::span<const Series> series, const std::string& title,
                      const std::string& x_label) {
  double xlo = std::numeric_limits<double>::infinity(), xhi = 0.0;
  double ylo = std::numeric_limits<double>::infinity(), yhi = 0.0;
  for (const Series& s : series) {
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0) || !std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xlo = std::min(xlo, s.x[i]);
      xhi = std::max(xhi, s.x[i]);
      ylo = std::min(ylo, s.y[i]);
      yhi = std::max(yhi, s.y[i]);
    }
  }
  if (!(xhi > 0.0)) throw std::invalid_argument("write_loglog_svg: no positive data to plot");
  // Pad degenerate ranges so a single point still gets a frame.
  if (xlo == xhi) { xlo /= 2.0; xhi *= 2.0; }
  if (ylo == yhi) { ylo /= 2.0; yhi *= 2.0; }
  xlo /= 1.15; xhi *= 1.15; ylo /= 1.5; yhi *= 1.5;

  const Axis ax{xlo, xhi, true, kLeft, kWidth - kRight};
  const Axis ay{ylo, yhi, true, kHeight - kBottom, kTop};

  header(os, title);
  frame(os);
  ticks(os, ax, true);
  ticks(os, ay, false);
  axis_label(os, x_label);

  for (std::size_t k = 0; k < series.size(); ++k) {
    const Series& s = series[k];
    const std::string color = kPalette[k % kPalette.size()];
    std::vector<double> fx, fy;
    std::ostringstream pts;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0) || !std::isfinite(s.y[i])) continue;
      fx.push_back(s.x[i]);
      fy.push_back(s.y[i]);
      pts << ax(s.x[i]) << ',' << ay(s.y[i]) << ' ';
      os << "<circle cx=\"" << ax(s.x[i]) << "\" cy=\"" << ay(s.y[i]) << "\" r=\"3.5\" fill=\""
         << color << "\"/>\n";
    }
    if (fx.size() >= 2) {
      os << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << color
         << "\" stroke-width=\"1.5\"/>\n";
    }
    std::string text = s.label;
    if (auto slope = loglog_slope(fx, fy)) text += " (slope " + num(*slope, 3) + ")";
    legend_entry(os, k, color, text);
  }
  os << "</svg>\n";
}

void write_solution_overlay_svg(std::ostream& os, std::span<const FeFunction> fields,
                                std::span<const std::string> labels, const ScalarField& exact,
                                double x_min, double x_max, const std::string& title) {
  if (fields.empty() && !exact) throw std::invalid_argument("write_solution_overlay_svg: nothing to plot");
  for (const FeFunction& f : fields) {
    if (f.space().dim() != 1) throw std::invalid_argument("write_solution_overlay_svg: fields must be 1-D");
  }
  constexpr int kSamples = 400;
  double ylo = std::numeric_limits<double>::infinity(), yhi = -ylo;
  auto track = [&](double v) {
    if (std::isfinite(v)) {
      ylo = std::min(ylo, v);
      yhi = std::max(yhi, v);
    }
  };

  // Piecewise-polynomial fields sampled per element inside [x_min, x_max].
  std::vector<std::vector<std::pair<double, double>>> curves;
  for (const FeFunction& f : fields) {
    const Mesh& mesh = f.space().mesh();
    std::vector<std::pair<double, double>> c;
    const int per = f.space().degree() == 1 ? 1 : 8;
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
      for (int k = 0; k <= per; ++k) {
        if (e > 0 && k == 0) continue;
        const Coord ref{static_cast<double>(k) / per, 0.0};
        const double x = mesh.map_to_physical(e, ref)[0];
        if (x < x_min - 1e-14 || x > x_max + 1e-14) continue;
        const double v = f.value_at(e, ref);
        c.emplace_back(x, v);
        track(v);
      }
    }
    curves.push_back(std::move(c));
  }
  std::vector<std::pair<double, double>> ex;
  if (exact) {
    for (int i = 0; i <= kSamples; ++i) {
      const double x = x_min + (x_max - x_min) * i / kSamples;
      const double v = exact({x, 0.0});
      ex.emplace_back(x, v);
      track(v);
    }
  }
  if (!(yhi >= ylo)) { ylo = 0.0; yhi = 1.0; }
  if (ylo == yhi) { ylo -= 0.5; yhi += 0.5; }
  const double pad = 0.05 * (yhi - ylo);

  const Axis ax{x_min, x_max, false, kLeft, kWidth - kRight};
  const Axis ay{ylo - pad, yhi + pad, false, kHeight - kBottom, kTop};
  header(os, title);
  frame(os);
  ticks(os, ax, true);
  ticks(os, ay, false);
  axis_label(os, "x");

  std::size_t entry = 0;
  if (!ex.empty()) {
    os << "<polyline points=\"";
    for (auto [x, v] : ex) os << ax(x) << ',' << ay(v) << ' ';
    os << "\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n";
    legend_entry(os, entry++, "black", "exact");
  }
  for (std::size_t k = 0; k < curves.size(); ++k) {
    const std::string color = kPalette[k % kPalette.size()];
    os << "<polyline points=\"";
    for (auto [x, v] : curves[k]) os << ax(x) << ',' << ay(v) << ' ';
    os << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.3\" stroke-dasharray=\"5,3\"/>\n";
    legend_entry(os, entry++, color, k < labels.size() ? labels[k] : "u_h", true);
  }
  os << "</svg>\n";
}

void write_error_surface_svg(std::ostream& os, const FeFunction& field, const ScalarField& exact,
                             const std::string& title) {
  const Mesh& mesh = field.space().mesh();
  if (mesh.dim() != 2) throw std::invalid_argument("write_error_surface_svg: field must be 2-D");
  std::vector<double> err(mesh.num_vertices());
  double emax = 0.0;
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    err[v] = std::abs(field.coeffs()[static_cast<Eigen::Index>(v)] - exact(mesh.vertex(v)));
    if (std::isfinite(err[v])) emax = std::max(emax, err[v]);
  }
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
  for (const Coord& c : mesh.vertices()) {
    xlo = std::min(xlo, c[0]);
    xhi = std::max(xhi, c[0]);
    ylo = std::min(ylo, c[1]);
    yhi = std::max(yhi, c[1]);
  }
  // Equal scaling on both axes.
  const double box_w = kWidth - kLeft - kRight, box_h = kHeight - kTop - kBottom;
  const double scale = std::min(box_w / (xhi - xlo), box_h / (yhi - ylo));
  const Axis ax{xlo, xhi, false, kLeft, kLeft + scale * (xhi - xlo)};
  const Axis ay{ylo, yhi, false, kTop + scale * (yhi - ylo), kTop};

  header(os, title);
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const Element& el = mesh.element(e);
    const double mean = (err[el[0]] + err[el[1]] + err[el[2]]) / 3.0;
    os << "<polygon points=\"";
    for (int k = 0; k < 3; ++k) os << ax(mesh.vertex(el[k])[0]) << ',' << ay(mesh.vertex(el[k])[1]) << ' ';
    const std::string color = ramp(emax > 0.0 ? mean / emax : 0.0);
    os << "\" fill=\"" << color << "\" stroke=\"" << color << "\" stroke-width=\"0.3\"/>\n";
  }
  ticks(os, ax, true);
  ticks(os, ay, false);
  axis_label(os, "x");

  // Color bar.
  const double bx = kWidth - kRight + 40, bw = 18, btop = kTop, bh = box_h;
  constexpr int kSteps = 32;
  for (int i = 0; i < kSteps; ++i) {
    const double t = (i + 0.5) / kSteps;
    os << "<rect x=\"" << bx << "\" y=\"" << btop + bh * (1.0 - (i + 1.0) / kSteps) << "\" width=\""
       << bw << "\" height=\"" << bh / kSteps + 0.5 << "\" fill=\"" << ramp(t) << "\"/>\n";
  }
  os << "<text x=\"" << bx + bw + 6 << "\" y=\"" << btop + 10 << "\" font-size=\"11\">"
     << num(emax, 3) << "</text>\n"
     << "<text x=\"" << bx + bw + 6 << "\" y=\"" << btop + bh << "\" font-size=\"11\">0</text>\n"
     << "<text x=\"" << bx << "\" y=\"" << btop + bh + 20 << "\" font-size=\"11\">|u - u_h|</text>\n";
  os << "</svg>\n";
}

void emit_plot(const StudyReport& report, const Problem& problem,
               const std::filesystem::path& path, PlotKind kind) {
  if (report.rows.empty()) throw std::invalid_argument("emit_plot: report has no rows");
  std::ostringstream svg;
  const std::string tag =
      report.problem_name + ", alpha = " + num(report.alpha, 4) + ", P" + std::to_string(report.degree);

  switch (kind) {
    case PlotKind::error_curve: {
      std::vector<Series> series(3);
      series[0].label = "L-inf error (" + to_string(report.error_norm) + ")";
      series[1].label = "Jh(u_h)";
      series[2].label = "Jh(I_h u)";
      for (const StudyRow& r : report.rows) {
        for (auto& s : series) s.x.push_back(r.h);
        series[0].y.push_back(r.linf_error);
        series[1].y.push_back(r.Jh_min);
        series[2].y.push_back(r.Jh_interp);
      }
      write_loglog_svg(svg, series, "Convergence: " + tag, "h");
      break;
    }
    case PlotKind::solution_1d: {
      std::vector<FeFunction> fields;
      std::vector<std::string> labels;
      for (std::size_t k = 0; k < report.rows.size(); ++k) {
        if (k < report.minimizers.size() && report.minimizers[k]) {
          fields.push_back(*report.minimizers[k]);
          labels.push_back("N = " + std::to_string(report.rows[k].n));
        }
      }
      if (fields.empty()) throw std::invalid_argument("emit_plot: report carries no solution fields");
      write_solution_overlay_svg(svg, fields, labels,
                                 problem.exact_minimizer ? *problem.exact_minimizer : ScalarField{},
                                 0.0, 0.4, "Minimizers: " + tag);
      break;
    }
    case PlotKind::error_surface_2d: {
      if (!problem.exact_minimizer) throw std::invalid_argument("emit_plot: problem has no exact minimizer");
      const FeFunction* finest = nullptr;
      int n = 0;
      for (std::size_t k = 0; k < report.minimizers.size(); ++k) {
        if (report.minimizers[k]) {
          finest = &*report.minimizers[k];
          n = report.rows[k].n;
        }
      }
      if (finest == nullptr) throw std::invalid_argument("emit_plot: report carries no solution fields");
      write_error_surface_svg(svg, *finest, *problem.exact_minimizer,
                              "|u - u_h|, N = " + std::to_string(n) + ": " + tag);
      break;
    }
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FileError(path, "cannot open file for writing");
  out << svg.str();
  out.flush();
  if (!out) throw FileError(path, "write failed");
}

}  // namespace lavfem
