#include "lavfem/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace lavfem {

double Domain::measure() const {
  const double lx = x_range.second - x_range.first;
  return dim == 1 ? lx : lx * (y_range.second - y_range.first);
}

Mesh Domain::build_mesh(int n) const {
  if (dim == 1) return build_interval_mesh(x_range.first, x_range.second, n);
  return build_rect_tri_mesh(x_range, y_range, n, n);
}

namespace {

// p^k for small non-negative integer k by repeated multiplication.
double ipow(double p, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= p;
  return r;
}

// |v|^q and its derivative q sign(v) |v|^(q-1), with the derivative taken as
// 0 at v = 0 (all exponents used here exceed 1).
double abs_pow(double v, double q) { return std::pow(std::abs(v), q); }
double abs_pow_deriv(double v, double q) {
  if (v == 0.0) return 0.0;
  return q * std::copysign(std::pow(std::abs(v), q - 1.0), v);
}

}  // namespace

Problem mania_problem() {
  Problem pb;
  pb.name = "mania";
  pb.domain = Domain{1, {0.0, 1.0}, {0.0, 0.0}};

  pb.density.dim = 1;
  pb.density.f = [](const Coord& p, double v, const Coord& x) {
    const double r = v * v * v - x[0];
    return ipow(p[0], 6) * r * r;
  };
  pb.density.df_dp = [](const Coord& p, double v, const Coord& x) {
    const double r = v * v * v - x[0];
    return Coord{6.0 * ipow(p[0], 5) * r * r, 0.0};
  };
  pb.density.df_dv = [](const Coord& p, double v, const Coord& x) {
    const double r = v * v * v - x[0];
    return 6.0 * v * v * ipow(p[0], 6) * r;
  };

  pb.bc = {{"left", [](const Coord&) { return 0.0; }},
           {"right", [](const Coord&) { return 1.0; }}};
  pb.exact_minimizer = [](const Coord& x) { return std::cbrt(x[0]); };
  pb.inf_A = 0.0;
  pb.inf_Ainf = std::nullopt;  // positive, value unknown
  pb.has_gap = true;
  pb.alpha_sufficient = 1.0 / 6.0;
  pb.alpha_default = 0.25;
  pb.initial_guess = [](const Coord& x) { return x[0]; };
  pb.warm_start_default = false;
  pb.default_levels = {10, 20, 40, 80, 160};
  return pb;
}

Problem foss_problem() {
  Problem pb;
  pb.name = "foss";
  pb.domain = Domain{2, {0.0, 1.0}, {1.5, 2.5}};

  const double scale = 66.0 * std::pow(13.0 / 14.0, 14.0);

  // Common factor C (y/(y-1))^14 and the two exponents at height y.
  struct Exponents {
    double coef;
    double q;  // (14 - 3y)/(y - 1)
    double r;  // y/(y - 1)
  };
  auto exponents = [scale](double y) {
    const double r = y / (y - 1.0);
    return Exponents{scale * ipow(r, 14), (14.0 - 3.0 * y) / (y - 1.0), r};
  };

  pb.density.dim = 2;
  pb.density.f = [exponents](const Coord& p, double v, const Coord& x) {
    const Exponents ex = exponents(x[1]);
    const double m = abs_pow(v, ex.r) - x[0];
    return ex.coef * abs_pow(v, ex.q) * m * m * ipow(p[0], 14);
  };
  pb.density.df_dp = [exponents](const Coord& p, double v, const Coord& x) {
    const Exponents ex = exponents(x[1]);
    const double m = abs_pow(v, ex.r) - x[0];
    return Coord{14.0 * ex.coef * abs_pow(v, ex.q) * m * m * ipow(p[0], 13), 0.0};
  };
  pb.density.df_dv = [exponents](const Coord& p, double v, const Coord& x) {
    const Exponents ex = exponents(x[1]);
    const double m = abs_pow(v, ex.r) - x[0];
    const double d = abs_pow_deriv(v, ex.q) * m * m + abs_pow(v, ex.q) * 2.0 * m * abs_pow_deriv(v, ex.r);
    return ex.coef * ipow(p[0], 14) * d;
  };

  pb.bc = {{"left", [](const Coord&) { return 0.0; }},
           {"right", [](const Coord&) { return 1.0; }}};
  pb.exact_minimizer = [](const Coord& x) {
    return std::pow(x[0], (x[1] - 1.0) / x[1]);
  };
  pb.inf_A = 0.0;
  pb.inf_Ainf = 1.0;
  pb.has_gap = true;
  pb.alpha_sufficient = 3.0 / 14.0;
  pb.alpha_default = 1.0 / 6.0;
  pb.initial_guess = [](const Coord& x) { return x[0]; };
  pb.warm_start_default = true;
  pb.default_levels = {6, 12, 24};
  return pb;
}

Problem problem_by_name(const std::string& name) {
  if (name == "mania") return mania_problem();
  if (name == "foss") return foss_problem();
  throw std::invalid_argument("unknown problem '" + name + "' (expected mania or foss)");
}

}  // namespace lavfem
