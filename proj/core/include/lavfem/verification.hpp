#pragma once

#include <optional>
#include <span>
#include <vector>

#include "lavfem/problems.hpp"

namespace lavfem {

/// Energies of the nodal interpolant of the exact minimizer on one mesh.
struct InterpolantRow {
  int n = 0;
  double h = 0.0;
  double Jh = 0.0;  // J_h^alpha(I_h u)
  double J = 0.0;   // J(I_h u)
};

/// Optimizer-free check that J_h^alpha(I_h u) tends to J(u) under refinement.
/// quad_degree < 0 selects the default exactness for the problem dimension.
std::vector<InterpolantRow> verify_interpolant_convergence(const Problem& problem, double alpha,
                                                           std::span<const int> levels,
                                                           int degree, int quad_degree = -1,
                                                           unsigned threads = 1);

/// Least-squares slope of log(y) against log(x); nullopt with fewer than two
/// points or any non-positive entry.
std::optional<double> loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace lavfem
