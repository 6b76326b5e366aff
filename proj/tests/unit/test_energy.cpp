#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <random>

#include "lavfem/energy.hpp"
#include "lavfem/problems.hpp"
#include "lavfem/solve.hpp"

using namespace lavfem;

namespace {

std::shared_ptr<const Mesh> interval(int n) {
  return std::make_shared<const Mesh>(build_interval_mesh(0.0, 1.0, n));
}

std::shared_ptr<const Mesh> rect(int n) {
  return std::make_shared<const Mesh>(build_rect_tri_mesh({0.0, 1.0}, {1.5, 2.5}, n, n));
}

// Composite Simpson on [a, b] with m (even) panels.
template <class F>
double simpson(F&& g, double a, double b, int m) {
  const double d = (b - a) / m;
  double s = g(a) + g(b);
  for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * g(a + i * d);
  return s * d / 3.0;
}

// J_h^alpha of the P1 interpolant of x^(1/3) on n uniform elements,
// integrated element by element with Simpson's rule.
double mania_interp_Jh_oracle(int n, double alpha) {
  const double h = 1.0 / n;
  const double t = std::pow(h, -alpha);
  double total = 0.0;
  for (int k = 0; k < n; ++k) {
    const double a = k * h, b = (k + 1) * h;
    const double ua = std::cbrt(a), ub = std::cbrt(b);
    const double slope = (ub - ua) / h;
    const double p = std::min(slope, t);
    total += simpson(
        [&](double x) {
          const double v = ua + slope * (x - a);
          const double r = v * v * v - x;
          return std::pow(p, 6) * r * r;
        },
        a, b, 2000);
  }
  return total;
}

// Smallest distance of any quadrature-point gradient component to +-t,
// relative to t.
double kink_distance(const FeFunction& f, const QuadratureRule& rule, double t) {
  double d = INFINITY;
  for (std::size_t e = 0; e < f.space().mesh().num_elements(); ++e) {
    for (const auto& p : eval_on_element(f, e, rule)) {
      for (int i = 0; i < f.space().dim(); ++i) d = std::min(d, std::abs(std::abs(p.gradient[i]) - t) / t);
    }
  }
  return d;
}

// Random admissible function: interpolated initial guess plus a bounded
// perturbation of the free coefficients.
FeFunction random_admissible(const Problem& pb, std::shared_ptr<const FeSpace> sp,
                             std::mt19937_64& rng, double amp) {
  std::uniform_real_distribution<double> u(-amp, amp);
  FeFunction f = interpolate(sp, pb.initial_guess);
  f.apply_constraints();
  Eigen::VectorXd free = f.free_coeffs();
  for (Eigen::Index i = 0; i < free.size(); ++i) free[i] += u(rng);
  f.set_free_coeffs(free);
  return f;
}

struct FdStats {
  int checked = 0;
  double worst = 0.0;
};

// Central differences of value() along random directions against gradient().
FdStats check_gradient(const Problem& pb, std::shared_ptr<const FeSpace> sp,
                       std::optional<CutoffParams> cutoff, int samples, std::uint64_t seed,
                       double amp) {
  const QuadratureRule rule = rule_for_dim(pb.density.dim, default_quad_degree(pb.density.dim));
  const EnergyAssembler asmb(pb.density, sp, rule, cutoff);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  FdStats st;
  const double eps = 1e-6;
  int attempts = 0;
  while (st.checked < samples && attempts < 50 * samples) {
    ++attempts;
    const FeFunction f = random_admissible(pb, sp, rng, amp);
    Eigen::VectorXd dir(static_cast<Eigen::Index>(sp->num_free()));
    for (Eigen::Index i = 0; i < dir.size(); ++i) dir[i] = nd(rng);
    dir /= dir.lpNorm<Eigen::Infinity>();
    // A perturbation of eps moves a gradient component by at most
    // eps * max|grad phi| * dofs-per-element; stay well clear of the kink.
    if (cutoff) {
      const double margin = 1e-3;
      if (kink_distance(f, rule, cutoff->threshold()) < margin) continue;
    }
    FeFunction fp = f, fm = f;
    fp.set_free_coeffs(f.free_coeffs() + eps * dir);
    fm.set_free_coeffs(f.free_coeffs() - eps * dir);
    const double fd = (asmb.value(fp) - asmb.value(fm)) / (2 * eps);
    const double an = asmb.gradient(f).dot(dir);
    const double rel = std::abs(fd - an) / (1.0 + std::abs(an));
    st.worst = std::max(st.worst, rel);
    ++st.checked;
  }
  return st;
}

}  // namespace

TEST(CutoffParams, Validation) {
  EXPECT_THROW(CutoffParams(0.0, 0.1), std::invalid_argument);
  EXPECT_THROW(CutoffParams(-0.1, 0.1), std::invalid_argument);
  EXPECT_THROW(CutoffParams(0.25, 0.0), std::invalid_argument);
  EXPECT_THROW(CutoffParams(0.25, -1.0), std::invalid_argument);
  EXPECT_THROW(CutoffParams(NAN, 0.1), std::invalid_argument);
  EXPECT_DOUBLE_EQ(CutoffParams(0.25, 0.0625).threshold(), 2.0);
}

TEST(Cutoff, Examples) {
  const CutoffParams p(0.25, 0.0625);  // threshold 2
  auto r = cutoff_apply({3.0, -0.5}, 2, p);
  EXPECT_EQ(r[0], 2.0);
  EXPECT_EQ(r[1], -0.5);
  r = cutoff_apply({-5.0, 0.0}, 1, p);
  EXPECT_EQ(r[0], -2.0);
  r = cutoff_apply({2.0, -2.0}, 2, p);
  EXPECT_EQ(r[0], 2.0);
  EXPECT_EQ(r[1], -2.0);
  auto j = cutoff_jacobian_diag({2.0, -2.0000001}, 2, p);
  EXPECT_EQ(j[0], 1.0);
  EXPECT_EQ(j[1], 0.0);
  j = cutoff_jacobian_diag({0.3, 0.0}, 1, p);
  EXPECT_EQ(j[0], 1.0);
  EXPECT_TRUE(std::isnan(cutoff_apply({NAN, 0.0}, 1, p)[0]));
}

TEST(Cutoff, RandomProperties) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ua(0.01, 1.0), uh(1e-3, 1.0), us(-1.0, 1.0);
  for (int k = 0; k < 10000; ++k) {
    const CutoffParams p(ua(rng), uh(rng));
    const double t = p.threshold();
    const Coord s{10.0 * t * us(rng), 10.0 * t * us(rng)};
    const Coord c = cutoff_apply(s, 2, p);
    const Coord cc = cutoff_apply(c, 2, p);
    ASSERT_EQ(c, cc);
    for (int i = 0; i < 2; ++i) {
      ASSERT_LE(std::abs(c[i]), t);
      if (std::abs(s[i]) <= t) ASSERT_EQ(c[i], s[i]);
      else ASSERT_EQ(c[i], std::copysign(t, s[i]));
    }
  }
}

TEST(Energy, ManiaLinearFunctionExact) {
  // integral of (x^3 - x)^2 over (0, 1) = 1/7 - 2/5 + 1/3 = 8/105
  const auto pb = mania_problem();
  for (int n : {1, 10, 37}) {
    const auto sp = make_space(pb, interval(n), 1);
    const FeFunction f = interpolate(sp, [](const Coord& x) { return x[0]; });
    EXPECT_NEAR(energy_J(pb.density, f, gauss_interval(12)), 8.0 / 105.0, 1e-14);
  }
}

TEST(Energy, ManiaInterpolantJhMatchesOracle) {
  const auto pb = mania_problem();
  for (int n : {10, 20, 160}) {
    const auto mesh = interval(n);
    const auto sp = make_space(pb, mesh, 1);
    const FeFunction f = interpolate(sp, *pb.exact_minimizer);
    const double v = energy_Jh(pb.density, f, CutoffParams::for_mesh(0.25, *mesh), gauss_interval(12));
    const double oracle = mania_interp_Jh_oracle(n, 0.25);
    EXPECT_NEAR(v, oracle, 1e-9 * oracle) << "n = " << n;
  }
}

TEST(Energy, ManiaInterpolantJhReferenceValues) {
  const auto pb = mania_problem();
  const auto m10 = interval(10), m160 = interval(160);
  const FeFunction f10 = interpolate(make_space(pb, m10, 1), *pb.exact_minimizer);
  const FeFunction f160 = interpolate(make_space(pb, m160, 1), *pb.exact_minimizer);
  EXPECT_NEAR(energy_Jh(pb.density, f10, CutoffParams::for_mesh(0.25, *m10), gauss_interval(12)),
              2.41e-3, 0.01 * 2.41e-3);
  EXPECT_NEAR(energy_Jh(pb.density, f160, CutoffParams::for_mesh(0.25, *m160), gauss_interval(12)),
              3.91e-5, 0.01 * 3.91e-5);
}

TEST(Energy, InactiveCutoffIsBitwiseIdentical) {
  const auto pb = mania_problem();
  const auto mesh = interval(10);
  const auto sp = make_space(pb, mesh, 2);
  const FeFunction f = interpolate(sp, [](const Coord& x) { return x[0] * (2.0 - x[0]); });
  const CutoffParams p = CutoffParams::for_mesh(0.5, *mesh);  // threshold 3.16 > max slope 2
  EXPECT_EQ(energy_Jh(pb.density, f, p, gauss_interval(12)), energy_J(pb.density, f, gauss_interval(12)));
  EXPECT_EQ(grad_Jh(pb.density, f, p, gauss_interval(12)), grad_J(pb.density, f, gauss_interval(12)));
}

TEST(Energy, CutoffMeshMismatchRejected) {
  const auto pb = mania_problem();
  const auto sp = make_space(pb, interval(10), 1);
  const FeFunction f = interpolate(sp, pb.initial_guess);
  EXPECT_THROW(energy_Jh(pb.density, f, CutoffParams(0.25, 0.2), gauss_interval(12)),
               std::invalid_argument);
}

TEST(Energy, NonFiniteReportsElement) {
  EnergyDensity d;
  d.dim = 1;
  d.f = [](const Coord&, double, const Coord& x) { return x[0] > 0.5 ? NAN : 1.0; };
  d.df_dp = [](const Coord&, double, const Coord&) { return Coord{0, 0}; };
  d.df_dv = [](const Coord&, double, const Coord&) { return 0.0; };
  const auto sp = std::make_shared<const FeSpace>(interval(10), 1, std::vector<DirichletCondition>{});
  const FeFunction f(sp);
  for (unsigned threads : {1u, 3u}) {
    try {
      energy_J(d, f, gauss_interval(4), threads);
      FAIL() << "expected NonFiniteEnergy";
    } catch (const NonFiniteEnergy& e) {
      EXPECT_EQ(e.element(), 5u);
    }
  }
}

TEST(Energy, NonNegativeOnRandomFunctions) {
  std::mt19937_64 rng(5);
  const auto mania = mania_problem();
  const auto foss = foss_problem();
  const auto m1 = interval(12);
  const auto m2 = rect(4);
  const auto s1 = make_space(mania, m1, 1);
  const auto s2 = make_space(foss, m2, 1);
  for (int k = 0; k < 100; ++k) {
    const FeFunction f1 = random_admissible(mania, s1, rng, 0.5);
    const FeFunction f2 = random_admissible(foss, s2, rng, 0.1);
    EXPECT_GE(energy_J(mania.density, f1, gauss_interval(12)), 0.0);
    EXPECT_GE(energy_Jh(mania.density, f1, CutoffParams::for_mesh(0.25, *m1), gauss_interval(12)), 0.0);
    EXPECT_GE(energy_Jh(foss.density, f2, CutoffParams::for_mesh(1.0 / 6.0, *m2), gauss_triangle(10)), 0.0);
  }
}

TEST(EnergyGradient, ManiaFiniteDifferences) {
  const auto pb = mania_problem();
  const auto mesh = interval(8);
  for (int degree : {1, 2}) {
    const auto sp = make_space(pb, mesh, degree);
    const auto plain = check_gradient(pb, sp, std::nullopt, 100, 1 + degree, 0.3);
    EXPECT_EQ(plain.checked, 100);
    EXPECT_LT(plain.worst, 1e-6);
    const auto cut = check_gradient(pb, sp, CutoffParams::for_mesh(0.25, *mesh), 100, 11 + degree, 0.3);
    EXPECT_EQ(cut.checked, 100);
    EXPECT_LT(cut.worst, 1e-6);
  }
}

TEST(EnergyGradient, FossFiniteDifferences) {
  const auto pb = foss_problem();
  const auto mesh = rect(3);
  for (int degree : {1, 2}) {
    const auto sp = make_space(pb, mesh, degree);
    const auto plain = check_gradient(pb, sp, std::nullopt, 100, 21 + degree, 0.05);
    EXPECT_EQ(plain.checked, 100);
    EXPECT_LT(plain.worst, 1e-6);
    const auto cut = check_gradient(pb, sp, CutoffParams::for_mesh(1.0 / 6.0, *mesh), 100, 31 + degree, 0.05);
    EXPECT_EQ(cut.checked, 100);
    EXPECT_LT(cut.worst, 1e-6);
  }
}

TEST(EnergyGradient, DirichletQuadraticStationaryAtLinear) {
  EnergyDensity d;
  d.dim = 2;
  d.f = [](const Coord& p, double, const Coord&) { return 0.5 * (p[0] * p[0] + p[1] * p[1]); };
  d.df_dp = [](const Coord& p, double, const Coord&) { return p; };
  d.df_dv = [](const Coord&, double, const Coord&) { return 0.0; };
  const auto pb = foss_problem();
  for (int degree : {1, 2}) {
    const auto sp = make_space(pb, rect(5), degree);
    const FeFunction f = interpolate(sp, [](const Coord& x) { return x[0]; });
    EXPECT_LT(grad_J(d, f, gauss_triangle(4)).lpNorm<Eigen::Infinity>(), 1e-13);
  }
}

TEST(EnergyGradient, ZeroWhereClampFullyActive) {
  EnergyDensity d;
  d.dim = 1;
  d.f = [](const Coord& p, double, const Coord&) { return p[0] * p[0]; };
  d.df_dp = [](const Coord& p, double, const Coord&) { return Coord{2 * p[0], 0.0}; };
  d.df_dv = [](const Coord&, double, const Coord&) { return 0.0; };
  const auto mesh = interval(10);
  const auto sp = std::make_shared<const FeSpace>(mesh, 1, std::vector<DirichletCondition>{});
  // Alternating +-1 nodal values: every slope is +-10, above the threshold 1.78.
  FeFunction f(sp);
  for (Eigen::Index i = 0; i < f.coeffs().size(); ++i) f.coeffs()[i] = i % 2 ? 1.0 : -1.0;
  const CutoffParams p = CutoffParams::for_mesh(0.25, *mesh);
  EXPECT_EQ(grad_Jh(d, f, p, gauss_interval(4)).lpNorm<Eigen::Infinity>(), 0.0);
  EXPECT_NEAR(energy_Jh(d, f, p, gauss_interval(4)), p.threshold() * p.threshold(), 1e-13);
}

TEST(Energy, DeterministicAcrossRepeatsAndThreads) {
  const auto pb = foss_problem();
  const auto mesh = rect(8);
  const auto sp = make_space(pb, mesh, 1);
  std::mt19937_64 rng(3);
  const FeFunction f = random_admissible(pb, sp, rng, 0.05);
  const CutoffParams p = CutoffParams::for_mesh(1.0 / 6.0, *mesh);
  const double v1 = energy_Jh(pb.density, f, p, gauss_triangle(10), 1);
  const double v3 = energy_Jh(pb.density, f, p, gauss_triangle(10), 3);
  EXPECT_EQ(v3, energy_Jh(pb.density, f, p, gauss_triangle(10), 3));
  EXPECT_NEAR(v1, v3, 1e-13 * std::abs(v1));
  const Eigen::VectorXd g1 = grad_Jh(pb.density, f, p, gauss_triangle(10), 1);
  const Eigen::VectorXd g3 = grad_Jh(pb.density, f, p, gauss_triangle(10), 3);
  EXPECT_EQ(g3, grad_Jh(pb.density, f, p, gauss_triangle(10), 3));
  EXPECT_LT((g1 - g3).lpNorm<Eigen::Infinity>(), 1e-12 * (1.0 + g1.lpNorm<Eigen::Infinity>()));
}
