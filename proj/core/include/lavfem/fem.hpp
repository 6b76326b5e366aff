#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lavfem/mesh.hpp"
#include "lavfem/quadrature.hpp"

namespace lavfem {

using ScalarField = std::function<double(const Coord&)>;

/// Dirichlet data g imposed on one labeled side of the mesh boundary.
struct DirichletCondition {
  std::string side;
  ScalarField g;
};

/// Lagrange P1/P2 space over a Mesh with a set of Dirichlet-constrained DOFs.
///
/// Local DOF order: vertices first (in element order), then for P2 the edge
/// midpoints. In 1-D the single midpoint follows the two endpoints; on a
/// triangle (v0, v1, v2) the midpoints are those of edges 01, 12, 20.
class FeSpace {
 public:
  FeSpace(std::shared_ptr<const Mesh> mesh, int degree, std::vector<DirichletCondition> bc);

  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  int dim() const { return mesh_->dim(); }
  int degree() const { return degree_; }

  std::size_t num_dofs() const { return dof_coords_.size(); }
  std::size_t dofs_per_element() const { return dofs_per_element_; }
  std::span<const Coord> dof_coords() const { return dof_coords_; }
  std::span<const std::size_t> element_dofs(std::size_t e) const {
    return {element_dofs_.data() + e * dofs_per_element_, dofs_per_element_};
  }

  /// Sorted constrained DOF indices with their prescribed values.
  std::span<const std::size_t> constrained_dofs() const { return constrained_; }
  std::span<const double> constrained_values() const { return constrained_values_; }
  std::span<const std::size_t> free_dofs() const { return free_; }
  std::size_t num_free() const { return free_.size(); }
  /// Position of a DOF in free_dofs(), or kNotFree.
  std::size_t free_index(std::size_t dof) const { return free_index_[dof]; }
  bool is_constrained(std::size_t dof) const { return free_index_[dof] == kNotFree; }

  static constexpr std::size_t kNotFree = static_cast<std::size_t>(-1);

  /// Reference basis values and reference gradients at a reference point.
  void reference_basis(const Coord& ref, std::span<double> values, std::span<Coord> grads) const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  int degree_;
  std::size_t dofs_per_element_;
  std::vector<Coord> dof_coords_;
  std::vector<std::size_t> element_dofs_;
  std::vector<std::size_t> constrained_;
  std::vector<double> constrained_values_;
  std::vector<std::size_t> free_;
  std::vector<std::size_t> free_index_;
};

FeSpace build_space(std::shared_ptr<const Mesh> mesh, int degree,
                    std::vector<DirichletCondition> bc);

/// Piecewise-polynomial field: one coefficient per global DOF.
class FeFunction {
 public:
  explicit FeFunction(std::shared_ptr<const FeSpace> space);
  FeFunction(std::shared_ptr<const FeSpace> space, Eigen::VectorXd coeffs);

  const FeSpace& space() const { return *space_; }
  std::shared_ptr<const FeSpace> space_ptr() const { return space_; }

  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  Eigen::VectorXd& coeffs() { return coeffs_; }

  Eigen::VectorXd free_coeffs() const;
  void set_free_coeffs(const Eigen::VectorXd& values);

  /// Overwrites constrained DOFs with their prescribed values.
  void apply_constraints();
  /// True when every constrained DOF holds its prescribed value within tol.
  bool satisfies_constraints(double tol = 0.0) const;

  /// Value at a reference point of element e.
  double value_at(std::size_t e, const Coord& ref) const;

 private:
  std::shared_ptr<const FeSpace> space_;
  Eigen::VectorXd coeffs_;
};

/// Nodal interpolant: coeffs[i] = v(dof_coords[i]).
FeFunction interpolate(std::shared_ptr<const FeSpace> space, const ScalarField& v);

/// Field data at one mapped quadrature point.
struct PointEval {
  double value = 0.0;
  Coord gradient{0.0, 0.0};
  Coord point{0.0, 0.0};
  double weight = 0.0;  // rule weight times |det J|
};

/// Reference basis tabulated at the points of a quadrature rule.
class BasisTable {
 public:
  BasisTable(const FeSpace& space, const QuadratureRule& rule);

  std::size_t num_points() const { return num_points_; }
  std::size_t dofs_per_element() const { return ndofs_; }
  double value(std::size_t q, std::size_t i) const { return values_[q * ndofs_ + i]; }
  const Coord& ref_grad(std::size_t q, std::size_t i) const { return grads_[q * ndofs_ + i]; }
  const QuadratureRule& rule() const { return rule_; }

 private:
  QuadratureRule rule_;
  std::size_t num_points_;
  std::size_t ndofs_;
  std::vector<double> values_;
  std::vector<Coord> grads_;
};

/// Affine map data for one element: physical gradient = inv_jt * reference gradient.
struct ElementGeometry {
  std::array<double, 4> inv_jt{};  // row-major 2x2; only [0] is used in 1-D
  double abs_det = 0.0;

  Coord physical_gradient(const Coord& ref_grad) const {
    return {inv_jt[0] * ref_grad[0] + inv_jt[1] * ref_grad[1],
            inv_jt[2] * ref_grad[0] + inv_jt[3] * ref_grad[1]};
  }
};

ElementGeometry element_geometry(const Mesh& mesh, std::size_t e);

/// Values and gradients of f at the mapped points of rule on element e.
std::vector<PointEval> eval_on_element(const FeFunction& f, std::size_t e,
                                       const QuadratureRule& rule);

/// Max of |f - exact| over equispaced per-element samples. The sample set is
/// the union of the m-point grids for m = 2..samples_per_element (per edge in
/// 2-D), so the result never decreases as samples_per_element grows.
double linf_error(const FeFunction& f, const ScalarField& exact, int samples_per_element);

inline constexpr int kDefaultLinfSamples1D = 50;
inline constexpr int kDefaultLinfSamples2D = 10;

/// One line per DOF: `x [y] value`.
void write_fe_function(std::ostream& os, const FeFunction& f);

}  // namespace lavfem
