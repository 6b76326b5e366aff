#include "lavfem/fem.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

namespace lavfem {

namespace {

std::size_t local_dof_count(int dim, int degree) {
  if (dim == 1) return degree == 1 ? 2 : 3;
  return degree == 1 ? 3 : 6;
}

// Local vertex pairs of the P2 edge DOFs.
constexpr std::array<std::array<int, 2>, 3> kTriangleEdges{{{0, 1}, {1, 2}, {2, 0}}};

}  // namespace

FeSpace::FeSpace(std::shared_ptr<const Mesh> mesh, int degree, std::vector<DirichletCondition> bc)
    : mesh_(std::move(mesh)), degree_(degree) {
  if (!mesh_) throw std::invalid_argument("FeSpace: null mesh");
  if (degree_ != 1 && degree_ != 2) throw std::invalid_argument("FeSpace: degree must be 1 or 2");
  for (const auto& c : bc) {
    if (!mesh_->has_side(c.side)) {
      throw std::invalid_argument("FeSpace: unknown boundary label '" + c.side + "'");
    }
    if (!c.g) throw std::invalid_argument("FeSpace: empty boundary function for '" + c.side + "'");
  }

  const Mesh& m = *mesh_;
  const std::size_t nv = m.num_vertices();
  const std::size_t ne = m.num_elements();
  dofs_per_element_ = local_dof_count(m.dim(), degree_);

  dof_coords_.assign(m.vertices().begin(), m.vertices().end());
  element_dofs_.resize(ne * dofs_per_element_);

  // Each DOF beyond the vertices is an edge midpoint; remember its endpoints
  // to decide side membership.
  std::vector<std::array<std::size_t, 2>> edge_ends;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_dof;

  for (std::size_t e = 0; e < ne; ++e) {
    const Element& el = m.element(e);
    std::size_t* dofs = element_dofs_.data() + e * dofs_per_element_;
    for (std::size_t k = 0; k < m.vertices_per_element(); ++k) dofs[k] = el[k];
    if (degree_ == 1) continue;

    auto midpoint_dof = [&](std::size_t a, std::size_t b) {
      auto key = std::minmax(a, b);
      auto [it, inserted] = edge_dof.try_emplace({key.first, key.second}, dof_coords_.size());
      if (inserted) {
        const Coord& pa = m.vertex(a);
        const Coord& pb = m.vertex(b);
        dof_coords_.push_back({0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])});
        edge_ends.push_back({a, b});
      }
      return it->second;
    };
    if (m.dim() == 1) {
      dofs[2] = midpoint_dof(el[0], el[1]);
    } else {
      for (std::size_t k = 0; k < 3; ++k) {
        dofs[3 + k] = midpoint_dof(el[kTriangleEdges[k][0]], el[kTriangleEdges[k][1]]);
      }
    }
  }

  const std::size_t ndofs = dof_coords_.size();
  std::vector<int> owner(ndofs, -1);  // index into bc, first listed side wins
  for (std::size_t c = 0; c < bc.size(); ++c) {
    for (std::size_t v : m.side_vertices(bc[c].side)) {
      if (owner[v] < 0) owner[v] = static_cast<int>(c);
    }
    for (std::size_t k = 0; k < edge_ends.size(); ++k) {
      const std::size_t dof = nv + k;
      if (owner[dof] < 0 && m.vertex_on_side(bc[c].side, edge_ends[k][0]) &&
          m.vertex_on_side(bc[c].side, edge_ends[k][1])) {
        owner[dof] = static_cast<int>(c);
      }
    }
  }

  free_index_.assign(ndofs, kNotFree);
  for (std::size_t i = 0; i < ndofs; ++i) {
    if (owner[i] >= 0) {
      constrained_.push_back(i);
      constrained_values_.push_back(bc[static_cast<std::size_t>(owner[i])].g(dof_coords_[i]));
    } else {
      free_index_[i] = free_.size();
      free_.push_back(i);
    }
  }
}

void FeSpace::reference_basis(const Coord& ref, std::span<double> values,
                              std::span<Coord> grads) const {
  const double x = ref[0];
  if (dim() == 1) {
    if (degree_ == 1) {
      values[0] = 1.0 - x;
      values[1] = x;
      grads[0] = {-1.0, 0.0};
      grads[1] = {1.0, 0.0};
    } else {
      values[0] = (1.0 - x) * (1.0 - 2.0 * x);
      values[1] = x * (2.0 * x - 1.0);
      values[2] = 4.0 * x * (1.0 - x);
      grads[0] = {4.0 * x - 3.0, 0.0};
      grads[1] = {4.0 * x - 1.0, 0.0};
      grads[2] = {4.0 - 8.0 * x, 0.0};
    }
    return;
  }

  const double y = ref[1];
  const std::array<double, 3> lam{1.0 - x - y, x, y};
  constexpr std::array<Coord, 3> dlam{{{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}}};
  if (degree_ == 1) {
    for (int i = 0; i < 3; ++i) {
      values[i] = lam[i];
      grads[i] = dlam[i];
    }
    return;
  }
  for (int i = 0; i < 3; ++i) {
    values[i] = lam[i] * (2.0 * lam[i] - 1.0);
    const double s = 4.0 * lam[i] - 1.0;
    grads[i] = {s * dlam[i][0], s * dlam[i][1]};
  }
  for (int k = 0; k < 3; ++k) {
    const int a = kTriangleEdges[k][0];
    const int b = kTriangleEdges[k][1];
    values[3 + k] = 4.0 * lam[a] * lam[b];
    grads[3 + k] = {4.0 * (dlam[a][0] * lam[b] + lam[a] * dlam[b][0]),
                    4.0 * (dlam[a][1] * lam[b] + lam[a] * dlam[b][1])};
  }
}

FeSpace build_space(std::shared_ptr<const Mesh> mesh, int degree,
                    std::vector<DirichletCondition> bc) {
  return FeSpace(std::move(mesh), degree, std::move(bc));
}

FeFunction::FeFunction(std::shared_ptr<const FeSpace> space)
    : space_(std::move(space)), coeffs_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space_->num_dofs()))) {}

FeFunction::FeFunction(std::shared_ptr<const FeSpace> space, Eigen::VectorXd coeffs)
    : space_(std::move(space)), coeffs_(std::move(coeffs)) {
  if (static_cast<std::size_t>(coeffs_.size()) != space_->num_dofs()) {
    throw std::invalid_argument("FeFunction: coefficient count does not match the space");
  }
}

Eigen::VectorXd FeFunction::free_coeffs() const {
  const auto free = space_->free_dofs();
  Eigen::VectorXd out(static_cast<Eigen::Index>(free.size()));
  for (std::size_t k = 0; k < free.size(); ++k) out[static_cast<Eigen::Index>(k)] = coeffs_[static_cast<Eigen::Index>(free[k])];
  return out;
}

void FeFunction::set_free_coeffs(const Eigen::VectorXd& values) {
  const auto free = space_->free_dofs();
  if (static_cast<std::size_t>(values.size()) != free.size()) {
    throw std::invalid_argument("FeFunction: free coefficient count mismatch");
  }
  for (std::size_t k = 0; k < free.size(); ++k) coeffs_[static_cast<Eigen::Index>(free[k])] = values[static_cast<Eigen::Index>(k)];
}

void FeFunction::apply_constraints() {
  const auto dofs = space_->constrained_dofs();
  const auto vals = space_->constrained_values();
  for (std::size_t k = 0; k < dofs.size(); ++k) coeffs_[static_cast<Eigen::Index>(dofs[k])] = vals[k];
}

bool FeFunction::satisfies_constraints(double tol) const {
  const auto dofs = space_->constrained_dofs();
  const auto vals = space_->constrained_values();
  for (std::size_t k = 0; k < dofs.size(); ++k) {
    if (!(std::abs(coeffs_[static_cast<Eigen::Index>(dofs[k])] - vals[k]) <= tol)) return false;
  }
  return true;
}

double FeFunction::value_at(std::size_t e, const Coord& ref) const {
  const std::size_t nd = space_->dofs_per_element();
  std::array<double, 6> vals{};
  std::array<Coord, 6> grads{};
  space_->reference_basis(ref, std::span(vals.data(), nd), std::span(grads.data(), nd));
  const auto dofs = space_->element_dofs(e);
  double v = 0.0;
  for (std::size_t i = 0; i < nd; ++i) v += coeffs_[static_cast<Eigen::Index>(dofs[i])] * vals[i];
  return v;
}

FeFunction interpolate(std::shared_ptr<const FeSpace> space, const ScalarField& v) {
  FeFunction f(space);
  const auto coords = space->dof_coords();
  for (std::size_t i = 0; i < coords.size(); ++i) f.coeffs()[static_cast<Eigen::Index>(i)] = v(coords[i]);
  return f;
}

BasisTable::BasisTable(const FeSpace& space, const QuadratureRule& rule)
    : rule_(rule), num_points_(rule.size()), ndofs_(space.dofs_per_element()) {
  if (rule.dim != space.dim()) {
    throw std::invalid_argument("BasisTable: quadrature dimension does not match the mesh");
  }
  values_.resize(num_points_ * ndofs_);
  grads_.resize(num_points_ * ndofs_);
  for (std::size_t q = 0; q < num_points_; ++q) {
    space.reference_basis(rule.points[q], std::span(values_.data() + q * ndofs_, ndofs_),
                          std::span(grads_.data() + q * ndofs_, ndofs_));
  }
}

ElementGeometry element_geometry(const Mesh& mesh, std::size_t e) {
  const Element& el = mesh.element(e);
  const Coord& a = mesh.vertex(el[0]);
  const Coord& b = mesh.vertex(el[1]);
  ElementGeometry g;
  if (mesh.dim() == 1) {
    const double len = b[0] - a[0];
    g.inv_jt = {1.0 / len, 0.0, 0.0, 0.0};
    g.abs_det = std::abs(len);
    return g;
  }
  const Coord& c = mesh.vertex(el[2]);
  // J = [b-a, c-a] column-wise.
  const double j00 = b[0] - a[0], j01 = c[0] - a[0];
  const double j10 = b[1] - a[1], j11 = c[1] - a[1];
  const double det = j00 * j11 - j01 * j10;
  // inv(J)^T = (1/det) [[j11, -j10], [-j01, j00]]
  g.inv_jt = {j11 / det, -j10 / det, -j01 / det, j00 / det};
  g.abs_det = std::abs(det);
  return g;
}

std::vector<PointEval> eval_on_element(const FeFunction& f, std::size_t e,
                                       const QuadratureRule& rule) {
  const FeSpace& space = f.space();
  if (e >= space.mesh().num_elements()) {
    throw std::out_of_range("eval_on_element: element index out of range");
  }
  const BasisTable table(space, rule);
  const ElementGeometry geo = element_geometry(space.mesh(), e);
  const auto dofs = space.element_dofs(e);
  std::vector<PointEval> out(table.num_points());
  for (std::size_t q = 0; q < table.num_points(); ++q) {
    PointEval& pe = out[q];
    Coord ref_grad{0.0, 0.0};
    for (std::size_t i = 0; i < dofs.size(); ++i) {
      const double c = f.coeffs()[static_cast<Eigen::Index>(dofs[i])];
      pe.value += c * table.value(q, i);
      ref_grad[0] += c * table.ref_grad(q, i)[0];
      ref_grad[1] += c * table.ref_grad(q, i)[1];
    }
    pe.gradient = geo.physical_gradient(ref_grad);
    if (space.dim() == 1) pe.gradient[1] = 0.0;
    pe.point = space.mesh().map_to_physical(e, rule.points[q]);
    pe.weight = rule.weights[q] * geo.abs_det;
  }
  return out;
}

double linf_error(const FeFunction& f, const ScalarField& exact, int samples_per_element) {
  if (samples_per_element < 2) throw std::invalid_argument("linf_error: need at least 2 samples");
  const Mesh& mesh = f.space().mesh();
  double worst = 0.0;
  auto probe = [&](std::size_t e, const Coord& ref) {
    const double err = std::abs(f.value_at(e, ref) - exact(mesh.map_to_physical(e, ref)));
    if (std::isnan(err)) {
      worst = err;
    } else if (!std::isnan(worst)) {
      worst = std::max(worst, err);
    }
  };
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    for (int m = 2; m <= samples_per_element; ++m) {
      const double step = 1.0 / (m - 1);
      if (mesh.dim() == 1) {
        for (int i = 0; i < m; ++i) probe(e, {i * step, 0.0});
      } else {
        for (int j = 0; j < m; ++j) {
          for (int i = 0; i + j < m; ++i) probe(e, {i * step, j * step});
        }
      }
    }
  }
  return worst;
}

void write_fe_function(std::ostream& os, const FeFunction& f) {
  const auto old_precision = os.precision(17);
  const auto coords = f.space().dof_coords();
  for (std::size_t i = 0; i < coords.size(); ++i) {
    os << coords[i][0] << ' ';
    if (f.space().dim() == 2) os << coords[i][1] << ' ';
    os << f.coeffs()[static_cast<Eigen::Index>(i)] << '\n';
  }
  os.precision(old_precision);
}

}  // namespace lavfem
