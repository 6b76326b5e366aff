#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lavfem/problems.hpp"
#include "lavfem/solve.hpp"
#include "lavfem/verification.hpp"

namespace lavfem {

/// How the L-infinity error against the exact minimizer is measured.
/// nodal: max over DOFs. dense: linf_error() with per-element sampling.
enum class ErrorNorm { nodal, dense };

std::string to_string(ErrorNorm norm);
ErrorNorm parse_error_norm(const std::string& s);

/// Max over all DOFs of |f - exact|.
double nodal_linf_error(const FeFunction& f, const ScalarField& exact);

class FileError : public std::runtime_error {
 public:
  FileError(const std::filesystem::path& path, const std::string& what)
      : std::runtime_error(what + ": " + path.string()), path_(path) {}
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

struct StudyRow {
  int n = 0;
  double h = 0.0;
  double J_min = 0.0;      // J(u_h), u_h the enhanced minimizer
  double Jh_min = 0.0;     // J_h^alpha(u_h)
  double J_interp = 0.0;   // J(I_h u)
  double Jh_interp = 0.0;  // J_h^alpha(I_h u)
  double linf_error = 0.0;
  std::optional<double> rate;
  std::size_t iterations = 0;
  std::string status;
  // Standard-FEM solve at the same level (not part of the CSV).
  double J_standard = 0.0;
  double Jh_standard = 0.0;
  std::size_t standard_iterations = 0;
  std::string standard_status;
  std::string message;  // solver diagnostic when status == "error"
};

struct StudyReport {
  std::string problem_name;
  double alpha = 0.0;
  int degree = 1;
  bool warm_start = false;
  ErrorNorm error_norm = ErrorNorm::nodal;
  std::vector<StudyRow> rows;
  /// Enhanced and standard minimizers per row, kept for plotting.
  std::vector<std::optional<FeFunction>> minimizers;
  std::vector<std::optional<FeFunction>> standard_minimizers;
};

struct StudyOptions {
  SolveOptions solve;
  ErrorNorm error_norm = ErrorNorm::nodal;
  /// Samples per element for the dense norm; negative selects the default.
  int linf_samples = -1;
  bool keep_fields = true;
};

/// rate[k] = log2(linf_error[k-1] / linf_error[k]); the first rate is empty.
void compute_rates(std::vector<StudyRow>& rows);

/// Per level: standard and enhanced solves, the four functional values, the
/// error of the enhanced minimizer, and rates. A failed level is recorded
/// with status "error" and the remaining levels still run.
StudyReport run_convergence_study(const Problem& problem, double alpha, int degree,
                                  std::span<const int> levels, bool warm_start,
                                  const StudyOptions& opts = {});

struct SweepRow {
  double alpha = 0.0;
  int n = 0;
  double h = 0.0;
  double J_min = 0.0;
  double Jh_min = 0.0;
  double linf_error = 0.0;
  std::size_t iterations = 0;
  std::string status;
  std::string message;
};

/// One enhanced solve per alpha on a fixed mesh.
std::vector<SweepRow> run_alpha_sweep(const Problem& problem, std::span<const double> alphas,
                                      int degree, int n, bool warm_start,
                                      const StudyOptions& opts = {});

inline constexpr const char* kStudyCsvHeader =
    "n,h,J_min,Jh_min,J_interp,Jh_interp,linf_error,rate,iters,status";
inline constexpr const char* kSweepCsvHeader = "alpha,n,h,J_min,Jh_min,linf_error,iters,status";
inline constexpr const char* kVerifyCsvHeader = "n,h,J_interp,Jh_interp";

void write_study_csv(std::ostream& os, const StudyReport& report);
void emit_csv(const StudyReport& report, const std::filesystem::path& path);
/// Parses rows written by write_study_csv (standard-FEM fields are left at 0).
std::vector<StudyRow> read_study_csv(std::istream& is);

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows);
void emit_sweep_csv(std::span<const SweepRow> rows, const std::filesystem::path& path);

void write_verify_csv(std::ostream& os, std::span<const InterpolantRow> rows);
void emit_verify_csv(std::span<const InterpolantRow> rows, const std::filesystem::path& path);

/// Shortest-round-trip-safe rendering with 17 significant digits.
std::string format_real(double v);

}  // namespace lavfem
