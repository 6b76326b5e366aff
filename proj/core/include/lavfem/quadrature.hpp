#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "lavfem/mesh.hpp"

namespace lavfem {

/// Quadrature rule on the reference interval [0,1] or the reference triangle
/// {(xi, eta) : xi, eta >= 0, xi + eta <= 1}.
struct QuadratureRule {
  int dim = 1;
  std::vector<Coord> points;
  std::vector<double> weights;
  int exact_degree = 0;

  std::size_t size() const { return weights.size(); }
};

class UnsupportedDegree : public std::invalid_argument {
 public:
  UnsupportedDegree(int requested, int max_available)
      : std::invalid_argument("quadrature degree " + std::to_string(requested) +
                              " unsupported (maximum available: " +
                              std::to_string(max_available) + ")"),
        max_available_(max_available) {}
  int max_available() const { return max_available_; }

 private:
  int max_available_;
};

inline constexpr int kMaxIntervalDegree = 199;
inline constexpr int kMaxTriangleDegree = 60;

/// Default exactness used for energy assembly.
inline constexpr int kDefaultQuadDegree1D = 12;
inline constexpr int kDefaultQuadDegree2D = 10;

inline int default_quad_degree(int dim) {
  return dim == 1 ? kDefaultQuadDegree1D : kDefaultQuadDegree2D;
}

/// Nodes and weights of the m-point Gauss-Legendre rule on [-1, 1].
void gauss_legendre_nodes(std::size_t m, std::vector<double>& nodes, std::vector<double>& weights);

/// Gauss-Legendre rule on [0,1] with ceil((exact_degree+1)/2) points.
QuadratureRule gauss_interval(int exact_degree);

/// Positive-weight rule on the reference triangle. Degrees 1, 2, 4 and 5 use
/// fully symmetric rules; every other degree uses a collapsed (Duffy)
/// Gauss-Legendre product rule.
QuadratureRule gauss_triangle(int exact_degree);

/// Rule of the requested degree for a mesh dimension.
QuadratureRule rule_for_dim(int dim, int exact_degree);

}  // namespace lavfem
