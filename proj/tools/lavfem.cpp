// lavfem: convergence studies, alpha sweeps and interpolant checks for the
// cut-off finite element method on the Mania and Foss problems.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lavfem/experiments.hpp"
#include "lavfem/parallel.hpp"
#include "lavfem/plot.hpp"
#include "lavfem/problems.hpp"
#include "lavfem/verification.hpp"

namespace {

using namespace lavfem;

struct CommonArgs {
  std::string problem = "mania";
  std::optional<double> alpha;
  int degree = 1;
  int quad_degree = -1;
  std::string init = "linear";
  std::string error_norm = "nodal";
  std::size_t max_iters = MinimizeOptions{}.max_iters;
  double grad_tol = MinimizeOptions{}.grad_tol;
  bool warm_start = false;
  bool no_warm_start = false;
  std::string out;
};

void add_problem_options(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--problem", a.problem, "Benchmark problem")
      ->check(CLI::IsMember({"mania", "foss"}))
      ->capture_default_str();
  cmd->add_option("--degree", a.degree, "Lagrange degree")
      ->check(CLI::IsMember({1, 2}))
      ->capture_default_str();
  cmd->add_option("--quad-degree", a.quad_degree,
                  "Quadrature exactness degree (default 12 in 1-D, 10 in 2-D)");
  cmd->add_option("--out", a.out, "CSV output file");
}

void add_solver_options(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--init", a.init, "Initial guess: linear (u0 = x) or sqrt (u0 = x^(1/2))")
      ->check(CLI::IsMember({"linear", "sqrt"}))
      ->capture_default_str();
  cmd->add_option("--error-norm", a.error_norm,
                  "L-inf error measure: nodal (max over DOFs) or dense (per-element sampling)")
      ->check(CLI::IsMember({"nodal", "dense"}))
      ->capture_default_str();
  cmd->add_option("--max-iters", a.max_iters, "Optimizer iteration cap")->capture_default_str();
  cmd->add_option("--grad-tol", a.grad_tol, "Optimizer gradient tolerance")->capture_default_str();
  auto* warm = cmd->add_flag("--warm-start", a.warm_start,
                             "Start the cut-off solve from the standard-FEM minimizer");
  cmd->add_flag("--no-warm-start", a.no_warm_start, "Start the cut-off solve from the initial guess")
      ->excludes(warm);
}

StudyOptions study_options(const CommonArgs& a) {
  StudyOptions o;
  o.solve.quad_degree = a.quad_degree;
  o.solve.threads = threads_from_env();
  o.solve.minimize.max_iters = a.max_iters;
  o.solve.minimize.grad_tol = a.grad_tol;
  if (a.init == "sqrt") o.solve.initial_guess = [](const Coord& x) { return std::sqrt(x[0]); };
  o.error_norm = parse_error_norm(a.error_norm);
  return o;
}

bool warm_start_for(const CommonArgs& a, const Problem& pb) {
  if (a.warm_start) return true;
  if (a.no_warm_start) return false;
  return pb.warm_start_default;
}

std::string fmt(double v, const char* spec = "%.4g") {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

int run_study(const CommonArgs& a, std::vector<int> levels, const std::string& plot,
              const std::string& plot_kind) {
  const Problem pb = problem_by_name(a.problem);
  if (levels.empty()) levels = pb.default_levels;
  const double alpha = a.alpha.value_or(pb.alpha_default);
  const bool warm = warm_start_for(a, pb);
  StudyOptions opts = study_options(a);
  opts.keep_fields = !plot.empty();

  const StudyReport report = run_convergence_study(pb, alpha, a.degree, levels, warm, opts);

  std::printf("problem=%s alpha=%s degree=%d warm_start=%s error_norm=%s\n", pb.name.c_str(),
              fmt(alpha).c_str(), a.degree, warm ? "yes" : "no", a.error_norm.c_str());
  std::printf("%6s %10s %11s %11s | %11s %11s %11s %11s %11s %7s %7s  %s\n", "n", "h", "J(std)",
              "Jh(std)", "J(u_h)", "Jh(u_h)", "J(I_h u)", "Jh(I_h u)", "Linf", "rate", "iters",
              "status");
  bool failed = false;
  for (const StudyRow& r : report.rows) {
    std::printf("%6d %10s %11s %11s | %11s %11s %11s %11s %11s %7s %7zu  %s\n", r.n,
                fmt(r.h).c_str(), fmt(r.J_standard).c_str(), fmt(r.Jh_standard).c_str(),
                fmt(r.J_min).c_str(), fmt(r.Jh_min).c_str(), fmt(r.J_interp).c_str(),
                fmt(r.Jh_interp).c_str(), fmt(r.linf_error).c_str(),
                r.rate ? fmt(*r.rate, "%.2f").c_str() : "-", r.iterations, r.status.c_str());
    if (r.status == "error") {
      std::fprintf(stderr, "level n=%d failed: %s\n", r.n, r.message.c_str());
      failed = true;
    }
  }
  if (!a.out.empty()) emit_csv(report, a.out);
  if (!plot.empty()) emit_plot(report, pb, plot, parse_plot_kind(plot_kind));
  return failed ? 1 : 0;
}

int run_sweep(const CommonArgs& a, const std::vector<double>& alphas, int n) {
  const Problem pb = problem_by_name(a.problem);
  const bool warm = warm_start_for(a, pb);
  const auto rows = run_alpha_sweep(pb, alphas, a.degree, n, warm, study_options(a));

  std::printf("problem=%s n=%d degree=%d warm_start=%s\n", pb.name.c_str(), n, a.degree,
              warm ? "yes" : "no");
  std::printf("%10s %11s %11s %11s %7s  %s\n", "alpha", "J(u_h)", "Jh(u_h)", "Linf", "iters",
              "status");
  bool failed = false;
  for (const SweepRow& r : rows) {
    std::printf("%10s %11s %11s %11s %7zu  %s\n", fmt(r.alpha).c_str(), fmt(r.J_min).c_str(),
                fmt(r.Jh_min).c_str(), fmt(r.linf_error).c_str(), r.iterations, r.status.c_str());
    if (r.status == "error") {
      std::fprintf(stderr, "alpha=%g failed: %s\n", r.alpha, r.message.c_str());
      failed = true;
    }
  }
  if (!a.out.empty()) emit_sweep_csv(rows, a.out);
  return failed ? 1 : 0;
}

int run_verify(const CommonArgs& a, std::vector<int> levels, const std::string& plot) {
  const Problem pb = problem_by_name(a.problem);
  if (levels.empty()) levels = pb.default_levels;
  const double alpha = a.alpha.value_or(pb.alpha_default);
  const auto rows =
      verify_interpolant_convergence(pb, alpha, levels, a.degree, a.quad_degree, threads_from_env());

  std::printf("problem=%s alpha=%s degree=%d (nodal interpolant of the exact minimizer)\n",
              pb.name.c_str(), fmt(alpha).c_str(), a.degree);
  std::printf("%6s %12s %14s %14s\n", "n", "h", "J(I_h u)", "Jh(I_h u)");
  std::vector<double> hs, jh;
  for (const InterpolantRow& r : rows) {
    std::printf("%6d %12s %14s %14s\n", r.n, fmt(r.h).c_str(), fmt(r.J, "%.6g").c_str(),
                fmt(r.Jh, "%.6g").c_str());
    hs.push_back(r.h);
    jh.push_back(r.Jh);
  }
  if (auto slope = loglog_slope(hs, jh)) {
    std::printf("least-squares slope of log Jh(I_h u) vs log h: %.4f\n", *slope);
  }
  if (!a.out.empty()) emit_verify_csv(rows, a.out);
  if (!plot.empty()) {
    std::vector<Series> series{{"Jh(I_h u)", hs, jh}, {"J(I_h u)", hs, {}}};
    for (const auto& r : rows) series[1].y.push_back(r.J);
    std::ofstream os(plot, std::ios::binary | std::ios::trunc);
    if (!os) throw FileError(plot, "cannot open file for writing");
    write_loglog_svg(os, series, "Interpolant energies: " + pb.name + ", P" + std::to_string(a.degree), "h");
    if (!os) throw FileError(plot, "write failed");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cut-off finite element experiments for variational problems with a Lavrentiev gap"};
  app.require_subcommand(1);

  CommonArgs study_args, sweep_args, verify_args;
  std::vector<int> study_levels, verify_levels;
  std::vector<double> alphas{0.1, 0.25, 0.2857};
  int sweep_n = 160;
  std::string plot, plot_kind = "error-curve", verify_plot;

  auto* study = app.add_subcommand("study", "Standard vs cut-off FEM convergence study");
  add_problem_options(study, study_args);
  add_solver_options(study, study_args);
  study->add_option("--alpha", study_args.alpha, "Cut-off exponent (default: problem's value)");
  study->add_option("--levels", study_levels, "Comma-separated element counts per side")
      ->delimiter(',');
  study->add_option("--plot", plot, "SVG output file");
  study->add_option("--plot-kind", plot_kind, "error-curve, solution-1d or error-surface-2d")
      ->check(CLI::IsMember({"error-curve", "solution-1d", "error-surface-2d"}))
      ->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "One cut-off solve per alpha on a fixed mesh");
  add_problem_options(sweep, sweep_args);
  add_solver_options(sweep, sweep_args);
  sweep->add_option("--alphas", alphas, "Comma-separated exponents")->delimiter(',');
  sweep->add_option("--n", sweep_n, "Elements per side")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Optimizer-free interpolant energy study");
  add_problem_options(verify, verify_args);
  verify->add_option("--alpha", verify_args.alpha, "Cut-off exponent (default: problem's value)");
  verify->add_option("--levels", verify_levels, "Comma-separated element counts per side")
      ->delimiter(',');
  verify->add_option("--plot", verify_plot, "SVG output file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (study->parsed()) return run_study(study_args, study_levels, plot, plot_kind);
    if (sweep->parsed()) return run_sweep(sweep_args, alphas, sweep_n);
    if (verify->parsed()) return run_verify(verify_args, verify_levels, verify_plot);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "lavfem: %s\n", e.what());
    return 2;
  }
  return 0;
}
