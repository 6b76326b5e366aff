#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lavfem/energy.hpp"
#include "lavfem/fem.hpp"

namespace lavfem {

struct MinimizeOptions {
  double grad_tol = 1e-8;      // stop when max |gradient| <= grad_tol
  double step_tol = 1e-12;     // stop when max |coefficient change| <= step_tol
  std::size_t max_iters = 20000;
  std::size_t memory = 10;     // L-BFGS history length
  double armijo_c = 1e-4;
  double backtrack_factor = 0.5;
  std::size_t max_line_search = 60;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

enum class MinimizeStatus { converged, max_iters, line_search_failure };

std::string to_string(MinimizeStatus status);

struct MinimizeResult {
  FeFunction minimizer;
  double final_energy = 0.0;
  double final_grad_norm = 0.0;
  std::size_t iterations = 0;
  MinimizeStatus status = MinimizeStatus::max_iters;
  /// Objective at the start and after every accepted step.
  std::vector<double> energy_trace;
};

/// Energy and gradient over the free coefficients of a function.
struct Objective {
  std::function<double(const FeFunction&)> value;
  std::function<Eigen::VectorXd(const FeFunction&)> gradient;
};

Objective make_objective(std::shared_ptr<const EnergyAssembler> assembler);

/// Objective is not finite (or constraints are violated) at the start point.
class InvalidStart : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Limited-memory BFGS with Armijo backtracking over the free DOFs of init.
/// Constrained coefficients are never touched. A step whose objective is
/// non-finite counts as a failed trial and is backtracked. When backtracking
/// fails the memory is dropped and a steepest-descent step is tried before
/// giving up with status line_search_failure and the best iterate so far.
MinimizeResult minimize(const Objective& objective, const FeFunction& init,
                        const MinimizeOptions& opts = {});

}  // namespace lavfem
