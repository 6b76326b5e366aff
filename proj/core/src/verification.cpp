#include "lavfem/verification.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace lavfem {

std::vector<InterpolantRow> verify_interpolant_convergence(const Problem& problem, double alpha,
                                                           std::span<const int> levels,
                                                           int degree, int quad_degree,
                                                           unsigned threads) {
  if (!problem.exact_minimizer) {
    throw std::invalid_argument("verify_interpolant_convergence: problem '" + problem.name +
                                "' has no exact minimizer");
  }
  const QuadratureRule rule = rule_for_dim(
      problem.domain.dim, quad_degree < 0 ? default_quad_degree(problem.domain.dim) : quad_degree);

  std::vector<InterpolantRow> rows;
  rows.reserve(levels.size());
  for (int n : levels) {
    auto mesh = std::make_shared<const Mesh>(problem.domain.build_mesh(n));
    auto space = std::make_shared<const FeSpace>(mesh, degree, problem.bc);
    const FeFunction iu = interpolate(space, *problem.exact_minimizer);
    const CutoffParams params = CutoffParams::for_mesh(alpha, *mesh);
    InterpolantRow row;
    row.n = n;
    row.h = mesh->h();
    row.Jh = EnergyAssembler(problem.density, space, rule, params, threads).value(iu);
    row.J = EnergyAssembler(problem.density, space, rule, std::nullopt, threads).value(iu);
    rows.push_back(row);
  }
  return rows;
}

std::optional<double> loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) return std::nullopt;
    sx += std::log(x[i]);
    sy += std::log(y[i]);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y[i]) - my);
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

}  // namespace lavfem
