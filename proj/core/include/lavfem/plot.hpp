#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lavfem/experiments.hpp"
#include "lavfem/fem.hpp"

namespace lavfem {

enum class PlotKind { error_curve, solution_1d, error_surface_2d };

std::string to_string(PlotKind kind);
PlotKind parse_plot_kind(const std::string& s);

/// One polyline on a log-log chart.
struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Log-log chart. Each series with at least two positive points gets its
/// least-squares slope appended to the legend entry.
void write_loglog_svg(std::ostream& os, std::span<const Series> series, const std::string& title,
                      const std::string& x_label);

/// Overlay of 1-D fields against the exact solution on [x_min, x_max].
void write_solution_overlay_svg(std::ostream& os, std::span<const FeFunction> fields,
                                std::span<const std::string> labels, const ScalarField& exact,
                                double x_min, double x_max, const std::string& title);

/// Triangles of a 2-D field colored by the mean of |u - u_h| at their vertices.
void write_error_surface_svg(std::ostream& os, const FeFunction& field, const ScalarField& exact,
                             const std::string& title);

/// Renders a study. error_curve: error and J_h^alpha columns against h;
/// solution_1d: every level's minimizer against the exact solution on
/// [0, 0.4]; error_surface_2d: the finest level's pointwise error.
void emit_plot(const StudyReport& report, const Problem& problem,
               const std::filesystem::path& path, PlotKind kind);

}  // namespace lavfem
