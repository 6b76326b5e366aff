#pragma once

#include <memory>
#include <optional>

#include "lavfem/optimize.hpp"
#include "lavfem/problems.hpp"

namespace lavfem {

struct SolveOptions {
  MinimizeOptions minimize;
  /// Quadrature exactness; negative selects the default for the dimension.
  int quad_degree = -1;
  unsigned threads = 1;
  /// Overrides the problem's initial guess when set.
  std::optional<ScalarField> initial_guess;

  QuadratureRule rule(int dim) const {
    return rule_for_dim(dim, quad_degree < 0 ? default_quad_degree(dim) : quad_degree);
  }
};

/// Space of the given degree carrying the problem's Dirichlet data.
std::shared_ptr<const FeSpace> make_space(const Problem& problem, std::shared_ptr<const Mesh> mesh,
                                          int degree);

/// Interpolated initial guess with constrained DOFs set to their data.
FeFunction initial_function(const Problem& problem, std::shared_ptr<const FeSpace> space,
                            const SolveOptions& opts);

/// Minimizes J over the Lagrange space, starting from the initial guess.
MinimizeResult solve_standard_fem(const Problem& problem, std::shared_ptr<const Mesh> mesh,
                                  int degree, const SolveOptions& opts = {});

/// Minimizes J_h^alpha with h taken from the mesh. With warm_start the
/// standard-FEM minimizer is computed first and used as the starting point.
MinimizeResult solve_enhanced_fem(const Problem& problem, std::shared_ptr<const Mesh> mesh,
                                  int degree, double alpha, const SolveOptions& opts = {},
                                  bool warm_start = false);

/// Minimizes J_h^alpha starting from an explicit admissible function.
MinimizeResult solve_enhanced_fem_from(const Problem& problem, const FeFunction& init,
                                       double alpha, const SolveOptions& opts = {});

}  // namespace lavfem
