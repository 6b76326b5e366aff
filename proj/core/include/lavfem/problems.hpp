#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lavfem/energy.hpp"
#include "lavfem/fem.hpp"
#include "lavfem/mesh.hpp"

namespace lavfem {

/// Interval (dim 1, y_range unused) or axis-aligned rectangle (dim 2).
struct Domain {
  int dim = 1;
  std::pair<double, double> x_range{0.0, 1.0};
  std::pair<double, double> y_range{0.0, 0.0};

  double measure() const;
  /// Uniform mesh with n elements per unit of each side count: n intervals
  /// in 1-D, an n-by-n cell grid in 2-D.
  Mesh build_mesh(int n) const;
};

/// Benchmark variational problem: density, domain, Dirichlet data and what is
/// known about its minimizers.
struct Problem {
  std::string name;
  EnergyDensity density;
  Domain domain;
  std::vector<DirichletCondition> bc;
  std::optional<ScalarField> exact_minimizer;
  double inf_A = 0.0;
  /// Infimum over Lipschitz admissible functions, when its value is known.
  std::optional<double> inf_Ainf;
  /// The Lipschitz infimum is known to be strictly above inf_A.
  bool has_gap = true;
  /// Sufficient upper bound for alpha from the interpolant-energy analysis.
  double alpha_sufficient = 0.0;
  double alpha_default = 0.0;
  ScalarField initial_guess;
  bool warm_start_default = false;
  std::vector<int> default_levels;
};

/// Mania: f(p, v, x) = p^6 (v^3 - x)^2 on (0, 1), v(0) = 0, v(1) = 1,
/// minimized over W^{1,1} by u = x^(1/3).
Problem mania_problem();

/// Foss: f(p, v, (x, y)) = C (y/(y-1))^14 |v|^((14-3y)/(y-1))
/// (|v|^(y/(y-1)) - x)^2 p_x^14 with C = 66 (13/14)^14 on
/// (0, 1) x (3/2, 5/2), v = 0 at x = 0 and v = 1 at x = 1. The W^{1,1}
/// minimizer is u = x^((y-1)/y).
Problem foss_problem();

/// "mania" or "foss"; throws std::invalid_argument otherwise.
Problem problem_by_name(const std::string& name);

}  // namespace lavfem
