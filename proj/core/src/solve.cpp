#include "lavfem/solve.hpp"

#include <stdexcept>

namespace lavfem {

std::shared_ptr<const FeSpace> make_space(const Problem& problem, std::shared_ptr<const Mesh> mesh,
                                          int degree) {
  return std::make_shared<const FeSpace>(std::move(mesh), degree, problem.bc);
}

FeFunction initial_function(const Problem& problem, std::shared_ptr<const FeSpace> space,
                            const SolveOptions& opts) {
  const ScalarField& guess = opts.initial_guess ? *opts.initial_guess : problem.initial_guess;
  if (!guess) throw std::invalid_argument("problem '" + problem.name + "' has no initial guess");
  FeFunction f = interpolate(std::move(space), guess);
  f.apply_constraints();
  return f;
}

MinimizeResult solve_standard_fem(const Problem& problem, std::shared_ptr<const Mesh> mesh,
                                  int degree, const SolveOptions& opts) {
  auto space = make_space(problem, std::move(mesh), degree);
  auto assembler = std::make_shared<const EnergyAssembler>(
      problem.density, space, opts.rule(space->dim()), std::nullopt, opts.threads);
  return minimize(make_objective(assembler), initial_function(problem, space, opts), opts.minimize);
}

MinimizeResult solve_enhanced_fem_from(const Problem& problem, const FeFunction& init,
                                       double alpha, const SolveOptions& opts) {
  if (!(alpha > 0.0)) throw std::invalid_argument("solve_enhanced_fem: alpha must be positive");
  auto space = init.space_ptr();
  const CutoffParams params = CutoffParams::for_mesh(alpha, space->mesh());
  auto assembler = std::make_shared<const EnergyAssembler>(
      problem.density, space, opts.rule(space->dim()), params, opts.threads);
  return minimize(make_objective(assembler), init, opts.minimize);
}

MinimizeResult solve_enhanced_fem(const Problem& problem, std::shared_ptr<const Mesh> mesh,
                                  int degree, double alpha, const SolveOptions& opts,
                                  bool warm_start) {
  if (!(alpha > 0.0)) throw std::invalid_argument("solve_enhanced_fem: alpha must be positive");
  if (warm_start) {
    const MinimizeResult standard = solve_standard_fem(problem, std::move(mesh), degree, opts);
    return solve_enhanced_fem_from(problem, standard.minimizer, alpha, opts);
  }
  auto space = make_space(problem, std::move(mesh), degree);
  return solve_enhanced_fem_from(problem, initial_function(problem, space, opts), alpha, opts);
}

}  // namespace lavfem
