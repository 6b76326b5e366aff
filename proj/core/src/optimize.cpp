#include "lavfem/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace lavfem {

void MinimizeOptions::validate() const {
  if (!(grad_tol > 0.0)) throw std::invalid_argument("MinimizeOptions: grad_tol must be positive");
  if (!(step_tol > 0.0)) throw std::invalid_argument("MinimizeOptions: step_tol must be positive");
  if (max_iters == 0) throw std::invalid_argument("MinimizeOptions: max_iters must be positive");
  if (memory == 0) throw std::invalid_argument("MinimizeOptions: memory must be positive");
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) {
    throw std::invalid_argument("MinimizeOptions: armijo_c must lie in (0,1)");
  }
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) {
    throw std::invalid_argument("MinimizeOptions: backtrack_factor must lie in (0,1)");
  }
  if (max_line_search == 0) {
    throw std::invalid_argument("MinimizeOptions: max_line_search must be positive");
  }
}

std::string to_string(MinimizeStatus status) {
  switch (status) {
    case MinimizeStatus::converged: return "converged";
    case MinimizeStatus::max_iters: return "max-iters";
    case MinimizeStatus::line_search_failure: return "line-search-failure";
  }
  return "unknown";
}

Objective make_objective(std::shared_ptr<const EnergyAssembler> assembler) {
  return {[assembler](const FeFunction& f) { return assembler->value(f); },
          [assembler](const FeFunction& f) { return assembler->gradient(f); }};
}

namespace {

struct Pair {
  Eigen::VectorXd s;
  Eigen::VectorXd y;
  double rho;
};

double max_abs(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

Eigen::VectorXd two_loop(const std::deque<Pair>& hist, const Eigen::VectorXd& g) {
  Eigen::VectorXd q = g;
  std::vector<double> a(hist.size());
  for (std::size_t k = hist.size(); k-- > 0;) {
    a[k] = hist[k].rho * hist[k].s.dot(q);
    q -= a[k] * hist[k].y;
  }
  if (!hist.empty()) {
    const Pair& last = hist.back();
    q *= last.s.dot(last.y) / last.y.squaredNorm();
  }
  for (std::size_t k = 0; k < hist.size(); ++k) {
    const double b = hist[k].rho * hist[k].y.dot(q);
    q += (a[k] - b) * hist[k].s;
  }
  return -q;
}

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

}  // namespace

MinimizeResult minimize(const Objective& objective, const FeFunction& init,
                        const MinimizeOptions& opts) {
  opts.validate();
  if (!objective.value || !objective.gradient) {
    throw std::invalid_argument("minimize: objective is missing a callable");
  }
  if (!init.satisfies_constraints(0.0)) {
    throw InvalidStart("minimize: initial function violates the Dirichlet constraints");
  }

  FeFunction x = init;
  double fx = 0.0;
  Eigen::VectorXd g;
  try {
    fx = objective.value(x);
    g = objective.gradient(x);
  } catch (const NonFiniteEnergy& e) {
    throw InvalidStart(std::string("minimize: ") + e.what() + " at the initial function");
  }
  if (!std::isfinite(fx) || !all_finite(g)) {
    throw InvalidStart("minimize: objective is not finite at the initial function");
  }

  MinimizeResult result{x, fx, max_abs(g), 0, MinimizeStatus::max_iters, {fx}};
  std::deque<Pair> hist;
  Eigen::VectorXd c = x.free_coeffs();
  FeFunction trial = x;

  // Returns the objective at c + t d, or +inf if it is not finite.
  auto try_value = [&](const Eigen::VectorXd& ct) {
    trial.set_free_coeffs(ct);
    try {
      const double v = objective.value(trial);
      return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    } catch (const NonFiniteEnergy&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  bool stopped = false;
  while (result.iterations < opts.max_iters) {
    const double gnorm = max_abs(g);
    if (gnorm <= opts.grad_tol) {
      result.status = MinimizeStatus::converged;
      stopped = true;
      break;
    }

    bool accepted = false;
    Eigen::VectorXd c_new, g_new;
    double f_new = fx;
    // First pass uses the quasi-Newton direction; on failure, retry once
    // with a fresh steepest-descent step.
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      if (attempt == 1) {
        if (hist.empty()) break;
        hist.clear();
      }
      Eigen::VectorXd d = two_loop(hist, g);
      double slope = g.dot(d);
      if (!(slope < 0.0) || !all_finite(d)) {
        hist.clear();
        d = -g;
        slope = -g.squaredNorm();
      }
      double t = hist.empty() ? std::min(1.0, 1.0 / gnorm) : 1.0;
      for (std::size_t ls = 0; ls < opts.max_line_search; ++ls, t *= opts.backtrack_factor) {
        Eigen::VectorXd ct = c + t * d;
        const double ft = try_value(ct);
        if (ft <= fx + opts.armijo_c * t * slope) {
          trial.set_free_coeffs(ct);
          Eigen::VectorXd gt;
          try {
            gt = objective.gradient(trial);
          } catch (const NonFiniteEnergy&) {
            continue;
          }
          if (!all_finite(gt)) continue;
          c_new = std::move(ct);
          g_new = std::move(gt);
          f_new = ft;
          accepted = true;
          break;
        }
      }
    }
    if (!accepted) {
      result.status = MinimizeStatus::line_search_failure;
      stopped = true;
      break;
    }

    Eigen::VectorXd s = c_new - c;
    Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > std::numeric_limits<double>::epsilon() * s.norm() * y.norm() && sy > 0.0) {
      hist.push_back({s, y, 1.0 / sy});
      if (hist.size() > opts.memory) hist.pop_front();
    }
    c = std::move(c_new);
    g = std::move(g_new);
    fx = f_new;
    ++result.iterations;
    result.energy_trace.push_back(fx);

    if (max_abs(s) <= opts.step_tol) {
      result.status = MinimizeStatus::converged;
      stopped = true;
      break;
    }
  }
  if (!stopped) result.status = MinimizeStatus::max_iters;

  x.set_free_coeffs(c);
  result.minimizer = std::move(x);
  result.final_energy = fx;
  result.final_grad_norm = max_abs(g);
  return result;
}

}  // namespace lavfem
