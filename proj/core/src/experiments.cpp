#include "lavfem/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace lavfem {

std::string to_string(ErrorNorm norm) { return norm == ErrorNorm::nodal ? "nodal" : "dense"; }

ErrorNorm parse_error_norm(const std::string& s) {
  if (s == "nodal") return ErrorNorm::nodal;
  if (s == "dense") return ErrorNorm::dense;
  throw std::invalid_argument("unknown error norm '" + s + "' (expected nodal or dense)");
}

double nodal_linf_error(const FeFunction& f, const ScalarField& exact) {
  const auto coords = f.space().dof_coords();
  double worst = 0.0;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const double err = std::abs(f.coeffs()[static_cast<Eigen::Index>(i)] - exact(coords[i]));
    if (std::isnan(err)) return err;
    worst = std::max(worst, err);
  }
  return worst;
}

void compute_rates(std::vector<StudyRow>& rows) {
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (k == 0) {
      rows[k].rate.reset();
    } else {
      rows[k].rate = std::log2(rows[k - 1].linf_error / rows[k].linf_error);
    }
  }
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_ascending(std::span<const int> levels) {
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (levels[k] < 1) throw std::invalid_argument("levels must be positive");
    if (k > 0 && levels[k] <= levels[k - 1]) {
      throw std::invalid_argument("levels must be strictly ascending");
    }
  }
}

double measure_error(const Problem& problem, const FeFunction& f, const StudyOptions& opts) {
  if (!problem.exact_minimizer) return kNaN;
  if (opts.error_norm == ErrorNorm::nodal) return nodal_linf_error(f, *problem.exact_minimizer);
  const int samples = opts.linf_samples > 0
                          ? opts.linf_samples
                          : (problem.domain.dim == 1 ? kDefaultLinfSamples1D : kDefaultLinfSamples2D);
  return linf_error(f, *problem.exact_minimizer, samples);
}

double value_or_nan(const EnergyAssembler& a, const FeFunction& f) {
  try {
    return a.value(f);
  } catch (const NonFiniteEnergy&) {
    return kNaN;
  }
}

}  // namespace

StudyReport run_convergence_study(const Problem& problem, double alpha, int degree,
                                  std::span<const int> levels, bool warm_start,
                                  const StudyOptions& opts) {
  if (!(alpha > 0.0)) throw std::invalid_argument("run_convergence_study: alpha must be positive");
  require_ascending(levels);

  StudyReport report;
  report.problem_name = problem.name;
  report.alpha = alpha;
  report.degree = degree;
  report.warm_start = warm_start;
  report.error_norm = opts.error_norm;

  for (int n : levels) {
    StudyRow row;
    row.n = n;
    std::optional<FeFunction> enhanced_field, standard_field;
    try {
      auto mesh = std::make_shared<const Mesh>(problem.domain.build_mesh(n));
      row.h = mesh->h();
      auto space = make_space(problem, mesh, degree);
      const QuadratureRule rule = opts.solve.rule(space->dim());
      const CutoffParams params = CutoffParams::for_mesh(alpha, *mesh);
      const EnergyAssembler J(problem.density, space, rule, std::nullopt, opts.solve.threads);
      const EnergyAssembler Jh(problem.density, space, rule, params, opts.solve.threads);

      if (problem.exact_minimizer) {
        const FeFunction iu = interpolate(space, *problem.exact_minimizer);
        row.J_interp = value_or_nan(J, iu);
        row.Jh_interp = value_or_nan(Jh, iu);
      } else {
        row.J_interp = row.Jh_interp = kNaN;
      }

      const FeFunction init = initial_function(problem, space, opts.solve);
      const MinimizeResult standard = minimize(
          make_objective(std::make_shared<const EnergyAssembler>(J)), init, opts.solve.minimize);
      row.J_standard = standard.final_energy;
      row.Jh_standard = value_or_nan(Jh, standard.minimizer);
      row.standard_iterations = standard.iterations;
      row.standard_status = to_string(standard.status);

      const MinimizeResult enhanced =
          minimize(make_objective(std::make_shared<const EnergyAssembler>(Jh)),
                   warm_start ? standard.minimizer : init, opts.solve.minimize);
      row.Jh_min = enhanced.final_energy;
      row.J_min = value_or_nan(J, enhanced.minimizer);
      row.iterations = enhanced.iterations;
      row.status = to_string(enhanced.status);
      row.linf_error = measure_error(problem, enhanced.minimizer, opts);

      if (opts.keep_fields) {
        enhanced_field = enhanced.minimizer;
        standard_field = standard.minimizer;
      }
    } catch (const std::exception& e) {
      row.status = "error";
      row.message = e.what();
      row.J_min = row.Jh_min = row.linf_error = kNaN;
      if (row.h == 0.0) row.h = kNaN;
    }
    report.rows.push_back(std::move(row));
    report.minimizers.push_back(std::move(enhanced_field));
    report.standard_minimizers.push_back(std::move(standard_field));
  }
  compute_rates(report.rows);
  return report;
}

std::vector<SweepRow> run_alpha_sweep(const Problem& problem, std::span<const double> alphas,
                                      int degree, int n, bool warm_start,
                                      const StudyOptions& opts) {
  for (double a : alphas) {
    if (!(a > 0.0)) throw std::invalid_argument("run_alpha_sweep: every alpha must be positive");
  }
  if (n < 1) throw std::invalid_argument("run_alpha_sweep: n must be positive");

  auto mesh = std::make_shared<const Mesh>(problem.domain.build_mesh(n));
  auto space = make_space(problem, mesh, degree);
  const QuadratureRule rule = opts.solve.rule(space->dim());
  const EnergyAssembler J(problem.density, space, rule, std::nullopt, opts.solve.threads);

  std::optional<FeFunction> start;
  std::string start_error;
  try {
    start = initial_function(problem, space, opts.solve);
    if (warm_start) {
      start = minimize(make_objective(std::make_shared<const EnergyAssembler>(J)), *start,
                       opts.solve.minimize)
                  .minimizer;
    }
  } catch (const std::exception& e) {
    start_error = e.what();
  }

  std::vector<SweepRow> rows;
  for (double alpha : alphas) {
    SweepRow row;
    row.alpha = alpha;
    row.n = n;
    row.h = mesh->h();
    try {
      if (!start) throw std::runtime_error(start_error);
      const MinimizeResult r = solve_enhanced_fem_from(problem, *start, alpha, opts.solve);
      row.Jh_min = r.final_energy;
      row.J_min = value_or_nan(J, r.minimizer);
      row.linf_error = measure_error(problem, r.minimizer, opts);
      row.iterations = r.iterations;
      row.status = to_string(r.status);
    } catch (const std::exception& e) {
      row.status = "error";
      row.message = e.what();
      row.J_min = row.Jh_min = row.linf_error = kNaN;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_study_csv(std::ostream& os, const StudyReport& report) {
  os << kStudyCsvHeader << '\n';
  for (const StudyRow& r : report.rows) {
    os << r.n << ',' << format_real(r.h) << ',' << format_real(r.J_min) << ','
       << format_real(r.Jh_min) << ',' << format_real(r.J_interp) << ','
       << format_real(r.Jh_interp) << ',' << format_real(r.linf_error) << ','
       << (r.rate ? format_real(*r.rate) : std::string()) << ',' << r.iterations << ','
       << r.status << '\n';
  }
}

namespace {

template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FileError(path, "cannot open file for writing");
  writer(out);
  out.flush();
  if (!out) throw FileError(path, "write failed");
}

double parse_real(const std::string& field) {
  if (field == "nan") return kNaN;
  if (field == "inf") return std::numeric_limits<double>::infinity();
  if (field == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double v = std::stod(field, &used);
  if (used != field.size()) throw std::invalid_argument("bad number '" + field + "'");
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

void emit_csv(const StudyReport& report, const std::filesystem::path& path) {
  write_file(path, [&](std::ostream& os) { write_study_csv(os, report); });
}

std::vector<StudyRow> read_study_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kStudyCsvHeader) {
    throw std::invalid_argument("read_study_csv: missing or unexpected header");
  }
  std::vector<StudyRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 10) throw std::invalid_argument("read_study_csv: expected 10 fields");
    StudyRow r;
    r.n = std::stoi(f[0]);
    r.h = parse_real(f[1]);
    r.J_min = parse_real(f[2]);
    r.Jh_min = parse_real(f[3]);
    r.J_interp = parse_real(f[4]);
    r.Jh_interp = parse_real(f[5]);
    r.linf_error = parse_real(f[6]);
    if (!f[7].empty()) r.rate = parse_real(f[7]);
    r.iterations = static_cast<std::size_t>(std::stoull(f[8]));
    r.status = f[9];
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows) {
  os << kSweepCsvHeader << '\n';
  for (const SweepRow& r : rows) {
    os << format_real(r.alpha) << ',' << r.n << ',' << format_real(r.h) << ','
       << format_real(r.J_min) << ',' << format_real(r.Jh_min) << ','
       << format_real(r.linf_error) << ',' << r.iterations << ',' << r.status << '\n';
  }
}

void emit_sweep_csv(std::span<const SweepRow> rows, const std::filesystem::path& path) {
  write_file(path, [&](std::ostream& os) { write_sweep_csv(os, rows); });
}

void write_verify_csv(std::ostream& os, std::span<const InterpolantRow> rows) {
  os << kVerifyCsvHeader << '\n';
  for (const InterpolantRow& r : rows) {
    os << r.n << ',' << format_real(r.h) << ',' << format_real(r.J) << ',' << format_real(r.Jh)
       << '\n';
  }
}

void emit_verify_csv(std::span<const InterpolantRow> rows, const std::filesystem::path& path) {
  write_file(path, [&](std::ostream& os) { write_verify_csv(os, rows); });
}

}  // namespace lavfem
