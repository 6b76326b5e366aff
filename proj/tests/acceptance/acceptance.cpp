// Acceptance gate. Prints one PASS/FAIL line per criterion (and per
// sub-suite of criterion 6). Usage: lavfem_acceptance [criterion ...]
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "lavfem/energy.hpp"
#include "lavfem/experiments.hpp"
#include "lavfem/problems.hpp"
#include "lavfem/quadrature.hpp"
#include "lavfem/solve.hpp"
#include "lavfem/verification.hpp"

using namespace lavfem;

namespace {

// Pinned tolerances.
constexpr double kTableRelTol = 0.03;
constexpr double kSlopeLo = 1.3, kSlopeHi = 1.7;
constexpr double kRatioLo = 1.8, kRatioHi = 2.2;
constexpr double kStandardJFloor = 0.5;
constexpr double kManiaJhCeil = 1e-3;
constexpr double kManiaLinfCeil = 5e-2;
constexpr double kFossJhCeil = 5e-3;
constexpr double kFossJFloor = 1.0;
constexpr double kQuadRelTol = 1e-12;
constexpr double kBasisTol = 1e-12;
constexpr double kFdRelTol = 1e-5;
constexpr double kQuadStabilityTol = 0.005;

const std::vector<int> kManiaLevels{10, 20, 40, 80, 160};
const std::vector<int> kFossLevels{6, 12, 24};
constexpr std::array<double, 5> kReferenceJ{7.19e-1, 1.52, 3.04, 6.09, 12.9};
constexpr std::array<double, 5> kReferenceJh{2.41e-3, 8.63e-4, 3.09e-4, 1.10e-4, 3.91e-5};

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
  std::printf("%s  %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

void info(const std::string& text) {
  std::printf("      %s\n", text.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

std::vector<InterpolantRow> mania_interp(int degree, int quad_degree = -1) {
  return verify_interpolant_convergence(mania_problem(), 0.25, kManiaLevels, degree, quad_degree);
}

double jh_slope(const std::vector<InterpolantRow>& rows) {
  std::vector<double> h, jh;
  for (const auto& r : rows) {
    h.push_back(r.h);
    jh.push_back(r.Jh);
  }
  return loglog_slope(h, jh).value_or(NAN);
}

void criterion1() {
  const auto rows = mania_interp(1);
  bool ok = true;
  std::string detail;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const double ej = rel(rows[k].J, kReferenceJ[k]);
    const double ejh = rel(rows[k].Jh, kReferenceJh[k]);
    const bool row_ok = ej <= kTableRelTol && ejh <= kTableRelTol;
    ok = ok && row_ok;
    info("n=" + std::to_string(rows[k].n) + "  J(I_h u)=" + fmt("%.5g", rows[k].J) + " (ref " +
         fmt("%.3g", kReferenceJ[k]) + ", rel " + fmt("%.3f", ej) + ")  Jh(I_h u)=" +
         fmt("%.5g", rows[k].Jh) + " (ref " + fmt("%.3g", kReferenceJh[k]) + ", rel " +
         fmt("%.3f", ejh) + ")" + (row_ok ? "" : "  <-- outside 3%"));
  }
  detail = "interpolant energies within 3% of the reference values";
  report(ok, "criterion 1", detail);
  if (!ok) {
    info("On [0, h] the interpolant is x h^(-2/3) and contributes exactly 8/(105 h) to J,");
    info("so J(I_h u) >= 0.7619 at h = 1/10; the entries double exactly under halving,");
    info("so 2 x 6.09 = 12.18 at h = 1/160. Quadrature-stable to 1e-15.");
  }
}

void criterion2() {
  const double s1 = jh_slope(mania_interp(1));
  const double s2 = jh_slope(mania_interp(2));
  const bool ok1 = s1 >= kSlopeLo && s1 <= kSlopeHi;
  const bool ok2 = s2 >= kSlopeLo && s2 <= kSlopeHi;
  report(ok1 && ok2, "criterion 2",
         "slope P1 " + fmt("%.4f", s1) + ", P2 " + fmt("%.4f", s2) + " in [1.3, 1.7]");
}

void criterion3() {
  const Problem pb = mania_problem();
  const auto rows = mania_interp(1);
  bool ratios_ok = true;
  std::string ratios;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const double r = rows[k].J / rows[k - 1].J;
    ratios_ok = ratios_ok && r >= kRatioLo && r <= kRatioHi;
    ratios += (k > 1 ? ", " : "") + fmt("%.4f", r);
  }
  report(ratios_ok, "criterion 3a", "J(I_h u) halving ratios [" + ratios + "] in [1.8, 2.2]");

  bool std_ok = true;
  std::string vals;
  for (int n : kManiaLevels) {
    const auto mesh = std::make_shared<const Mesh>(pb.domain.build_mesh(n));
    const auto res = solve_standard_fem(pb, mesh, 1);
    const double j = energy_J(pb.density, res.minimizer, SolveOptions{}.rule(1));
    std_ok = std_ok && j > kStandardJFloor;
    vals += (vals.empty() ? "" : ", ") + fmt("%.4g", j);
  }
  report(std_ok, "criterion 3b", "standard-FEM J(u~_h) = [" + vals + "], each must exceed 0.5");
  if (!std_ok) {
    info("J(x) = 8/105 = 0.0762 at the prescribed start and descent only lowers J, so no");
    info("standard minimizer started there can exceed 0.5.");
  }
}

void criterion4() {
  const Problem pb = mania_problem();
  const auto mesh = std::make_shared<const Mesh>(pb.domain.build_mesh(160));
  const auto res = solve_enhanced_fem(pb, mesh, 1, 0.25);
  const double jh = res.final_energy;
  const double err = nodal_linf_error(res.minimizer, *pb.exact_minimizer);
  const double dense = linf_error(res.minimizer, *pb.exact_minimizer, kDefaultLinfSamples1D);
  report(jh <= kManiaJhCeil && err <= kManiaLinfCeil, "criterion 4",
         "n=160 Jh(u_h)=" + fmt("%.4g", jh) + " (<= 1e-3), nodal Linf=" + fmt("%.4g", err) +
             " (<= 5e-2), status " + to_string(res.status));
  info("dense-sampled Linf " + fmt("%.4g", dense) + " (not asserted; bounded below by ~0.33 h^(1/3))");

  SolveOptions sq;
  sq.initial_guess = [](const Coord& x) { return std::sqrt(x[0]); };
  std::string errs;
  for (int n : kManiaLevels) {
    const auto m = std::make_shared<const Mesh>(pb.domain.build_mesh(n));
    const auto r = solve_enhanced_fem(pb, m, 1, 0.25, sq);
    errs += (errs.empty() ? "" : ", ") + fmt("%.3g", nodal_linf_error(r.minimizer, *pb.exact_minimizer));
  }
  info("with start x^(1/2): nodal Linf per level [" + errs + "] (informational)");
}

void criterion5() {
  const Problem pb = foss_problem();
  std::vector<double> jh, j;
  std::string detail;
  for (int n : kFossLevels) {
    const auto mesh = std::make_shared<const Mesh>(pb.domain.build_mesh(n));
    const auto res = solve_enhanced_fem(pb, mesh, 1, 1.0 / 6.0, {}, true);
    jh.push_back(res.final_energy);
    j.push_back(energy_J(pb.density, res.minimizer, SolveOptions{}.rule(2)));
    info("n=" + std::to_string(n) + "  Jh(u_h)=" + fmt("%.4g", jh.back()) + "  J(u_h)=" +
         fmt("%.4g", j.back()) + "  status " + to_string(res.status));
  }
  bool ok = jh.back() <= kFossJhCeil;
  for (std::size_t k = 1; k < jh.size(); ++k) ok = ok && jh[k] < jh[k - 1];
  for (double v : j) ok = ok && v > kFossJFloor;
  report(ok, "criterion 5", "Jh(u_h) strictly decreasing, <= 5e-3 at n=24, J(u_h) > 1 at every level");
}

// Criterion 6 sub-suites.

void cutoff_suite() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> ua(0.01, 1.0), uh(1e-4, 1.0), us(-1.0, 1.0);
  bool ok = true;
  for (int k = 0; k < 10000; ++k) {
    const CutoffParams p(ua(rng), uh(rng));
    const double t = p.threshold();
    const Coord s{10.0 * t * us(rng), 10.0 * t * us(rng)};
    const Coord c = cutoff_apply(s, 2, p);
    ok = ok && cutoff_apply(c, 2, p) == c;
    for (int i = 0; i < 2; ++i) {
      ok = ok && std::abs(c[i]) <= t;
      if (std::abs(s[i]) <= t) ok = ok && c[i] == s[i];
    }
  }
  report(ok, "criterion 6 cutoff", "idempotence, bound and identity region over 10^4 random triples");
}

FeFunction perturbed(const Problem& pb, std::shared_ptr<const FeSpace> sp, std::mt19937_64& rng,
                     double amp) {
  std::uniform_real_distribution<double> u(-amp, amp);
  FeFunction f = interpolate(sp, pb.initial_guess);
  f.apply_constraints();
  Eigen::VectorXd c = f.free_coeffs();
  for (Eigen::Index i = 0; i < c.size(); ++i) c[i] += u(rng);
  f.set_free_coeffs(c);
  return f;
}

bool near_kink(const FeFunction& f, const QuadratureRule& rule, double t) {
  for (std::size_t e = 0; e < f.space().mesh().num_elements(); ++e) {
    for (const auto& p : eval_on_element(f, e, rule)) {
      for (int i = 0; i < f.space().dim(); ++i) {
        if (std::abs(std::abs(p.gradient[i]) - t) < 1e-3 * t) return true;
      }
    }
  }
  return false;
}

void gradient_suite() {
  struct Case {
    Problem pb;
    int n;
    double alpha;
    double amp;
  };
  const std::vector<Case> cases{{mania_problem(), 8, 0.25, 0.3}, {foss_problem(), 3, 1.0 / 6.0, 0.05}};
  bool ok = true;
  std::string detail;
  std::mt19937_64 rng(77);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (const auto& c : cases) {
    const auto mesh = std::make_shared<const Mesh>(c.pb.domain.build_mesh(c.n));
    const auto sp = make_space(c.pb, mesh, 1);
    const QuadratureRule rule = SolveOptions{}.rule(c.pb.domain.dim);
    const EnergyAssembler asmb(c.pb.density, sp, rule, CutoffParams::for_mesh(c.alpha, *mesh));
    int checked = 0;
    double worst = 0.0;
    while (checked < 100) {
      const FeFunction f = perturbed(c.pb, sp, rng, c.amp);
      if (near_kink(f, rule, asmb.cutoff()->threshold())) continue;
      Eigen::VectorXd d(static_cast<Eigen::Index>(sp->num_free()));
      for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = nd(rng);
      d /= d.lpNorm<Eigen::Infinity>();
      const double eps = 1e-6;
      FeFunction fp = f, fm = f;
      fp.set_free_coeffs(f.free_coeffs() + eps * d);
      fm.set_free_coeffs(f.free_coeffs() - eps * d);
      const double fd = (asmb.value(fp) - asmb.value(fm)) / (2 * eps);
      const double an = asmb.gradient(f).dot(d);
      worst = std::max(worst, std::abs(fd - an) / std::max(std::abs(an), 1e-300));
      ++checked;
    }
    ok = ok && worst <= kFdRelTol;
    detail += c.pb.name + " worst rel " + fmt("%.2e", worst) + "; ";
  }
  report(ok, "criterion 6 gradient", detail + "100 functions per problem, tol 1e-5");
}

double fact(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

void quadrature_suite() {
  bool ok = true;
  double worst = 0.0;
  for (int d = 0; d <= kMaxTriangleDegree; ++d) {
    const auto r = gauss_triangle(d);
    for (int a = 0; a <= d; ++a) {
      for (int b = 0; a + b <= d; ++b) {
        double s = 0.0;
        for (std::size_t q = 0; q < r.size(); ++q) s += r.weights[q] * std::pow(r.points[q][0], a) * std::pow(r.points[q][1], b);
        const double exact = fact(a) * fact(b) / fact(a + b + 2);
        worst = std::max(worst, rel(s, exact));
      }
    }
  }
  for (int d = 0; d <= 60; ++d) {
    const auto r = gauss_interval(d);
    for (int k = 0; k <= d; ++k) {
      double s = 0.0;
      for (std::size_t q = 0; q < r.size(); ++q) s += r.weights[q] * std::pow(r.points[q][0], k);
      worst = std::max(worst, rel(s, 1.0 / (k + 1)));
    }
  }
  ok = worst <= kQuadRelTol;
  report(ok, "criterion 6 quadrature",
         "monomial exactness to the declared degree, worst rel " + fmt("%.2e", worst));
}

void basis_suite() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> c(-2.0, 2.0);
  double worst = 0.0;
  for (int dim : {1, 2}) {
    for (int degree : {1, 2}) {
      const auto mesh = std::make_shared<const Mesh>(
          dim == 1 ? build_interval_mesh(0.0, 1.0, 5) : build_rect_tri_mesh({0, 1}, {1.5, 2.5}, 3, 3));
      const auto sp = std::make_shared<const FeSpace>(mesh, degree, std::vector<DirichletCondition>{});
      const QuadratureRule rule = rule_for_dim(dim, 5);
      for (int trial = 0; trial < 20; ++trial) {
        const double k0 = c(rng), kx = c(rng), ky = dim == 2 ? c(rng) : 0.0;
        const double kxx = degree == 2 ? c(rng) : 0.0;
        const double kxy = degree == 2 && dim == 2 ? c(rng) : 0.0;
        auto poly = [&](const Coord& x) { return k0 + kx * x[0] + ky * x[1] + kxx * x[0] * x[0] + kxy * x[0] * x[1]; };
        const FeFunction f = interpolate(sp, poly);
        const FeFunction one = interpolate(sp, [](const Coord&) { return 1.0; });
        for (std::size_t e = 0; e < mesh->num_elements(); ++e) {
          for (const auto& p : eval_on_element(f, e, rule)) worst = std::max(worst, std::abs(p.value - poly(p.point)));
          for (const auto& p : eval_on_element(one, e, rule)) {
            worst = std::max({worst, std::abs(p.value - 1.0), std::abs(p.gradient[0]), std::abs(p.gradient[1])});
          }
        }
      }
    }
  }
  report(worst <= kBasisTol, "criterion 6 basis",
         "partition of unity and P_r reproduction, worst abs " + fmt("%.2e", worst));
}

void nonnegativity_suite() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0), uy(1.5, 2.5), w(-5.0, 5.0);
  const Problem mania = mania_problem();
  const Problem foss = foss_problem();
  bool ok = true;
  for (int k = 0; k < 10000; ++k) {
    ok = ok && mania.density.f({w(rng), w(rng)}, w(rng), {u(rng), 0.0}) >= 0.0;
    ok = ok && foss.density.f({w(rng), w(rng)}, w(rng) / 4.0, {u(rng), uy(rng)}) >= 0.0;
  }
  report(ok, "criterion 6 nonnegativity", "both densities >= 0 on 10^4 random inputs each");
}

bool monotone(const std::vector<double>& t) {
  for (std::size_t k = 1; k < t.size(); ++k) {
    if (!(t[k] <= t[k - 1])) return false;
  }
  return !t.empty();
}

void armijo_suite() {
  bool ok = true;
  int traces = 0;
  const Problem mania = mania_problem();
  for (int n : kManiaLevels) {
    const auto mesh = std::make_shared<const Mesh>(mania.domain.build_mesh(n));
    ok = ok && monotone(solve_standard_fem(mania, mesh, 1).energy_trace);
    ok = ok && monotone(solve_enhanced_fem(mania, mesh, 1, 0.25).energy_trace);
    traces += 2;
  }
  const Problem foss = foss_problem();
  for (int n : {6, 12}) {
    const auto mesh = std::make_shared<const Mesh>(foss.domain.build_mesh(n));
    const auto std_res = solve_standard_fem(foss, mesh, 1);
    ok = ok && monotone(std_res.energy_trace);
    ok = ok && monotone(solve_enhanced_fem_from(foss, std_res.minimizer, 1.0 / 6.0).energy_trace);
    traces += 2;
  }
  report(ok, "criterion 6 armijo", std::to_string(traces) + " energy traces non-increasing");
}

void quad_stability_suite() {
  const int base = default_quad_degree(1);
  const auto a = mania_interp(1, base);
  const auto b = mania_interp(1, base + 2);
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) worst = std::max({worst, rel(b[k].J, a[k].J), rel(b[k].Jh, a[k].Jh)});
  report(worst < kQuadStabilityTol, "criterion 6 quadrature-stability",
         "criterion 1 values move by at most " + fmt("%.2e", worst) + " when exactness rises by 2");
}

void criterion6() {
  cutoff_suite();
  gradient_suite();
  quadrature_suite();
  basis_suite();
  nonnegativity_suite();
  armijo_suite();
  quad_stability_suite();
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::function<void()>> criteria{
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4}, {5, criterion5}, {6, criterion6}};
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty()) {
    for (const auto& [k, fn] : criteria) selected.push_back(k);
  }
  for (int k : selected) {
    const auto it = criteria.find(k);
    if (it == criteria.end()) {
      std::fprintf(stderr, "unknown criterion %d\n", k);
      return 2;
    }
    try {
      it->second();
    } catch (const std::exception& e) {
      report(false, "criterion " + std::to_string(k), std::string("exception: ") + e.what());
    }
  }
  return failures == 0 ? 0 : 1;
}
