#include "lavfem/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace lavfem {

void gauss_legendre_nodes(std::size_t m, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(m, 0.0);
  weights.assign(m, 0.0);
  if (m == 0) return;
  const std::size_t half = (m + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // Chebyshev-like initial guess, then Newton on P_m.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(m) + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= m; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      const double pm = m == 1 ? x : p1;
      const double pm1 = m == 1 ? 1.0 : p0;
      dp = static_cast<double>(m) * (x * pm - pm1) / (x * x - 1.0);
      const double dx = pm / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (std::size_t k = 2; k <= m; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
      p0 = p1;
      p1 = pk;
    }
    const double pm1 = m == 1 ? 1.0 : p0;
    const double pm = m == 1 ? x : p1;
    dp = static_cast<double>(m) * (x * pm - pm1) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[m - 1 - i] = x;
    weights[i] = w;
    weights[m - 1 - i] = w;
  }
  if (m % 2 == 1) nodes[m / 2] = 0.0;
}

QuadratureRule gauss_interval(int exact_degree) {
  if (exact_degree < 0) throw std::invalid_argument("gauss_interval: negative degree");
  if (exact_degree > kMaxIntervalDegree) throw UnsupportedDegree(exact_degree, kMaxIntervalDegree);
  const auto m = static_cast<std::size_t>((exact_degree + 2) / 2);
  std::vector<double> x, w;
  gauss_legendre_nodes(m, x, w);
  QuadratureRule rule;
  rule.dim = 1;
  rule.exact_degree = exact_degree;
  rule.points.resize(m);
  rule.weights.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    rule.points[i] = {0.5 * (x[i] + 1.0), 0.0};
    rule.weights[i] = 0.5 * w[i];
  }
  return rule;
}

namespace {

void add_centroid(QuadratureRule& r, double w) {
  r.points.push_back({1.0 / 3.0, 1.0 / 3.0});
  r.weights.push_back(w);
}

// Barycentric orbit (a, a, 1-2a).
void add_orbit3(QuadratureRule& r, double a, double w) {
  const double c = 1.0 - 2.0 * a;
  r.points.push_back({a, a});
  r.points.push_back({c, a});
  r.points.push_back({a, c});
  for (int k = 0; k < 3; ++k) r.weights.push_back(w);
}

QuadratureRule collapsed_rule(int exact_degree) {
  // (xi, eta) = (u, v (1 - u)), dxi deta = (1 - u) du dv. The u-integrand
  // gains one degree from the Jacobian.
  QuadratureRule u_rule = gauss_interval(exact_degree + 1);
  QuadratureRule v_rule = gauss_interval(exact_degree);
  QuadratureRule r;
  r.dim = 2;
  r.exact_degree = exact_degree;
  for (std::size_t i = 0; i < u_rule.size(); ++i) {
    const double u = u_rule.points[i][0];
    for (std::size_t j = 0; j < v_rule.size(); ++j) {
      const double v = v_rule.points[j][0];
      r.points.push_back({u, v * (1.0 - u)});
      r.weights.push_back(u_rule.weights[i] * v_rule.weights[j] * (1.0 - u));
    }
  }
  return r;
}

}  // namespace

QuadratureRule gauss_triangle(int exact_degree) {
  if (exact_degree < 0) throw std::invalid_argument("gauss_triangle: negative degree");
  if (exact_degree > kMaxTriangleDegree) throw UnsupportedDegree(exact_degree, kMaxTriangleDegree);

  QuadratureRule r;
  r.dim = 2;
  r.exact_degree = exact_degree;
  switch (exact_degree) {
    case 0:
    case 1:
      add_centroid(r, 0.5);
      return r;
    case 2:
      add_orbit3(r, 1.0 / 6.0, 1.0 / 6.0);
      return r;
    case 4:
      // Dunavant degree 4, 6 points.
      add_orbit3(r, 0.44594849091596488631832925388305, 0.5 * 0.22338158967801146569500700843312);
      add_orbit3(r, 0.09157621350977074345957146340220, 0.5 * 0.10995174365532186763832632490021);
      return r;
    case 5:
      // Dunavant degree 5, 7 points.
      add_centroid(r, 0.5 * 0.225);
      add_orbit3(r, 0.47014206410511508977044120951345, 0.5 * 0.13239415278850618073764938783315);
      add_orbit3(r, 0.10128650732345633880098736191512, 0.5 * 0.12593918054482715259568394550018);
      return r;
    default:
      return collapsed_rule(exact_degree);
  }
}

QuadratureRule rule_for_dim(int dim, int exact_degree) {
  if (dim == 1) return gauss_interval(exact_degree);
  if (dim == 2) return gauss_triangle(exact_degree);
  throw std::invalid_argument("rule_for_dim: dimension must be 1 or 2");
}

}  // namespace lavfem
