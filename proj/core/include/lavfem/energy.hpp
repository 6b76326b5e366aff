#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lavfem/fem.hpp"
#include "lavfem/mesh.hpp"
#include "lavfem/quadrature.hpp"

namespace lavfem {

/// Exponent alpha and mesh size h of the gradient cut-off; the clamp level
/// is h^(-alpha).
class CutoffParams {
 public:
  CutoffParams(double alpha, double h);

  /// Takes h from the mesh so the threshold always matches the mesh.
  static CutoffParams for_mesh(double alpha, const Mesh& mesh) { return {alpha, mesh.h()}; }

  double alpha() const { return alpha_; }
  double h() const { return h_; }
  double threshold() const { return threshold_; }

 private:
  double alpha_;
  double h_;
  double threshold_;
};

/// Component-wise clamp of the first dim entries of s to [-t, t] with
/// t = threshold. |s_i| == t stays on the identity branch. NaN passes through.
Coord cutoff_apply(const Coord& s, int dim, const CutoffParams& params);

/// Diagonal of the a.e. Jacobian of cutoff_apply: 1 where |s_i| <= t, else 0.
Coord cutoff_jacobian_diag(const Coord& s, int dim, const CutoffParams& params);

/// Integrand f(p, v, x) of an energy functional with its partial derivatives.
struct EnergyDensity {
  int dim = 1;
  std::function<double(const Coord& p, double v, const Coord& x)> f;
  std::function<Coord(const Coord& p, double v, const Coord& x)> df_dp;
  std::function<double(const Coord& p, double v, const Coord& x)> df_dv;
};

/// Raised when the density evaluates to a non-finite value during assembly.
class NonFiniteEnergy : public std::runtime_error {
 public:
  explicit NonFiniteEnergy(std::size_t element)
      : std::runtime_error("non-finite energy density on element " + std::to_string(element)),
        element_(element) {}
  std::size_t element() const { return element_; }

 private:
  std::size_t element_;
};

/// Element-wise assembly of J or J_h^alpha and its gradient with respect to
/// the free coefficients of a fixed space. Geometry and basis tabulation are
/// computed once; evaluation is pure and reentrant.
///
/// Summation runs over elements in index order within each worker chunk and
/// over chunks in order, so results are bitwise reproducible for a fixed
/// thread count.
class EnergyAssembler {
 public:
  EnergyAssembler(EnergyDensity density, std::shared_ptr<const FeSpace> space,
                  QuadratureRule rule, std::optional<CutoffParams> cutoff = std::nullopt,
                  unsigned threads = 1);

  double value(const FeFunction& f) const;
  Eigen::VectorXd gradient(const FeFunction& f) const;

  const std::optional<CutoffParams>& cutoff() const { return cutoff_; }
  const QuadratureRule& rule() const { return table_.rule(); }
  const FeSpace& space() const { return *space_; }

 private:
  void check_function(const FeFunction& f) const;

  EnergyDensity density_;
  std::shared_ptr<const FeSpace> space_;
  BasisTable table_;
  std::optional<CutoffParams> cutoff_;
  unsigned threads_;
  std::vector<ElementGeometry> geometry_;
  std::vector<Coord> points_;  // mapped quadrature points, element-major
};

/// J(v) = integral of f(grad v, v, x).
double energy_J(const EnergyDensity& density, const FeFunction& f, const QuadratureRule& rule,
                unsigned threads = 1);

/// J_h^alpha(v) = integral of f(cutoff(grad v), v, x). params.h() must equal
/// the mesh parameter of f's space.
double energy_Jh(const EnergyDensity& density, const FeFunction& f, const CutoffParams& params,
                 const QuadratureRule& rule, unsigned threads = 1);

/// Gradient of J with respect to the free coefficients.
Eigen::VectorXd grad_J(const EnergyDensity& density, const FeFunction& f,
                       const QuadratureRule& rule, unsigned threads = 1);

/// Gradient of J_h^alpha with respect to the free coefficients, using the
/// a.e. derivative of the clamp.
Eigen::VectorXd grad_Jh(const EnergyDensity& density, const FeFunction& f,
                        const CutoffParams& params, const QuadratureRule& rule,
                        unsigned threads = 1);

}  // namespace lavfem
