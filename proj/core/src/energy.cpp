#include "lavfem/energy.hpp"

#include <cmath>

#include "lavfem/parallel.hpp"

namespace lavfem {

CutoffParams::CutoffParams(double alpha, double h) : alpha_(alpha), h_(h) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("CutoffParams: alpha must be a positive finite number");
  }
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw std::invalid_argument("CutoffParams: h must be a positive finite number");
  }
  threshold_ = std::pow(h_, -alpha_);
}

Coord cutoff_apply(const Coord& s, int dim, const CutoffParams& params) {
  const double t = params.threshold();
  Coord out = s;
  for (int i = 0; i < dim; ++i) {
    if (std::abs(s[i]) > t) out[i] = std::copysign(t, s[i]);
  }
  return out;
}

Coord cutoff_jacobian_diag(const Coord& s, int dim, const CutoffParams& params) {
  const double t = params.threshold();
  Coord out{0.0, 0.0};
  for (int i = 0; i < dim; ++i) out[i] = std::abs(s[i]) <= t ? 1.0 : 0.0;
  return out;
}

EnergyAssembler::EnergyAssembler(EnergyDensity density, std::shared_ptr<const FeSpace> space,
                                 QuadratureRule rule, std::optional<CutoffParams> cutoff,
                                 unsigned threads)
    : density_(std::move(density)),
      space_(std::move(space)),
      table_(*space_, rule),
      cutoff_(cutoff),
      threads_(threads) {
  if (density_.dim != space_->dim()) {
    throw std::invalid_argument("EnergyAssembler: density dimension does not match the mesh");
  }
  if (!density_.f || !density_.df_dp || !density_.df_dv) {
    throw std::invalid_argument("EnergyAssembler: density is missing a component");
  }
  const Mesh& mesh = space_->mesh();
  if (cutoff_ && cutoff_->h() != mesh.h()) {
    throw std::invalid_argument("EnergyAssembler: cut-off h does not match the mesh parameter");
  }
  const std::size_t ne = mesh.num_elements();
  const std::size_t nq = table_.num_points();
  geometry_.resize(ne);
  points_.resize(ne * nq);
  for (std::size_t e = 0; e < ne; ++e) {
    geometry_[e] = element_geometry(mesh, e);
    for (std::size_t q = 0; q < nq; ++q) {
      points_[e * nq + q] = mesh.map_to_physical(e, table_.rule().points[q]);
    }
  }
}

void EnergyAssembler::check_function(const FeFunction& f) const {
  if (f.space().num_dofs() != space_->num_dofs()) {
    throw std::invalid_argument("EnergyAssembler: function lives on a different space");
  }
}

namespace {

struct FieldAtPoint {
  double value;
  Coord grad;
};

template <typename Dofs>
FieldAtPoint field_at(const Eigen::VectorXd& c, const Dofs& dofs, const BasisTable& table,
                      std::size_t q, const ElementGeometry& geo, int dim) {
  double value = 0.0;
  Coord ref{0.0, 0.0};
  for (std::size_t i = 0; i < dofs.size(); ++i) {
    const double ci = c[static_cast<Eigen::Index>(dofs[i])];
    value += ci * table.value(q, i);
    ref[0] += ci * table.ref_grad(q, i)[0];
    ref[1] += ci * table.ref_grad(q, i)[1];
  }
  Coord g = geo.physical_gradient(ref);
  if (dim == 1) g[1] = 0.0;
  return {value, g};
}

}  // namespace

double EnergyAssembler::value(const FeFunction& f) const {
  check_function(f);
  const std::size_t ne = space_->mesh().num_elements();
  const std::size_t nq = table_.num_points();
  const int dim = space_->dim();
  const auto& rule = table_.rule();
  const Eigen::VectorXd& c = f.coeffs();

  std::vector<double> partial(chunk_count(ne, threads_), 0.0);
  for_each_chunk(ne, threads_, [&](std::size_t begin, std::size_t end, std::size_t chunk) {
    double sum = 0.0;
    for (std::size_t e = begin; e < end; ++e) {
      const auto dofs = space_->element_dofs(e);
      const ElementGeometry& geo = geometry_[e];
      double elem = 0.0;
      for (std::size_t q = 0; q < nq; ++q) {
        const FieldAtPoint fp = field_at(c, dofs, table_, q, geo, dim);
        const Coord p = cutoff_ ? cutoff_apply(fp.grad, dim, *cutoff_) : fp.grad;
        const double dens = density_.f(p, fp.value, points_[e * nq + q]);
        if (!std::isfinite(dens)) throw NonFiniteEnergy(e);
        elem += rule.weights[q] * dens;
      }
      sum += elem * geo.abs_det;
    }
    partial[chunk] = sum;
  });

  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

Eigen::VectorXd EnergyAssembler::gradient(const FeFunction& f) const {
  check_function(f);
  const std::size_t ne = space_->mesh().num_elements();
  const std::size_t nq = table_.num_points();
  const std::size_t nd = table_.dofs_per_element();
  const int dim = space_->dim();
  const auto& rule = table_.rule();
  const Eigen::VectorXd& c = f.coeffs();
  const auto nfree = static_cast<Eigen::Index>(space_->num_free());

  std::vector<Eigen::VectorXd> partial(chunk_count(ne, threads_), Eigen::VectorXd::Zero(nfree));
  for_each_chunk(ne, threads_, [&](std::size_t begin, std::size_t end, std::size_t chunk) {
    Eigen::VectorXd& g = partial[chunk];
    std::array<double, 6> local{};
    for (std::size_t e = begin; e < end; ++e) {
      const auto dofs = space_->element_dofs(e);
      const ElementGeometry& geo = geometry_[e];
      local.fill(0.0);
      for (std::size_t q = 0; q < nq; ++q) {
        const FieldAtPoint fp = field_at(c, dofs, table_, q, geo, dim);
        Coord p = fp.grad;
        Coord mask{1.0, 1.0};
        if (cutoff_) {
          p = cutoff_apply(fp.grad, dim, *cutoff_);
          mask = cutoff_jacobian_diag(fp.grad, dim, *cutoff_);
        }
        const Coord& x = points_[e * nq + q];
        Coord dp = density_.df_dp(p, fp.value, x);
        dp[0] *= mask[0];
        dp[1] *= dim == 2 ? mask[1] : 0.0;
        const double dv = density_.df_dv(p, fp.value, x);
        if (!std::isfinite(dp[0]) || !std::isfinite(dp[1]) || !std::isfinite(dv)) {
          throw NonFiniteEnergy(e);
        }
        const double w = rule.weights[q] * geo.abs_det;
        for (std::size_t i = 0; i < nd; ++i) {
          const Coord gi = geo.physical_gradient(table_.ref_grad(q, i));
          local[i] += w * (dp[0] * gi[0] + dp[1] * gi[1] + dv * table_.value(q, i));
        }
      }
      for (std::size_t i = 0; i < nd; ++i) {
        const std::size_t k = space_->free_index(dofs[i]);
        if (k != FeSpace::kNotFree) g[static_cast<Eigen::Index>(k)] += local[i];
      }
    }
  });

  Eigen::VectorXd total = Eigen::VectorXd::Zero(nfree);
  for (const auto& p : partial) total += p;
  return total;
}

namespace {

std::shared_ptr<const FeSpace> borrow(const FeFunction& f) { return f.space_ptr(); }

void require_matching_h(const CutoffParams& params, const FeFunction& f) {
  if (params.h() != f.space().mesh().h()) {
    throw std::invalid_argument("cut-off h does not match the mesh parameter of the function");
  }
}

}  // namespace

double energy_J(const EnergyDensity& density, const FeFunction& f, const QuadratureRule& rule,
                unsigned threads) {
  return EnergyAssembler(density, borrow(f), rule, std::nullopt, threads).value(f);
}

double energy_Jh(const EnergyDensity& density, const FeFunction& f, const CutoffParams& params,
                 const QuadratureRule& rule, unsigned threads) {
  require_matching_h(params, f);
  return EnergyAssembler(density, borrow(f), rule, params, threads).value(f);
}

Eigen::VectorXd grad_J(const EnergyDensity& density, const FeFunction& f,
                       const QuadratureRule& rule, unsigned threads) {
  return EnergyAssembler(density, borrow(f), rule, std::nullopt, threads).gradient(f);
}

Eigen::VectorXd grad_Jh(const EnergyDensity& density, const FeFunction& f,
                        const CutoffParams& params, const QuadratureRule& rule,
                        unsigned threads) {
  require_matching_h(params, f);
  return EnergyAssembler(density, borrow(f), rule, params, threads).gradient(f);
}

}  // namespace lavfem
