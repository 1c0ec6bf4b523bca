#include "satnls/rnp_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "satnls/error.hpp"

namespace satnls::rnp {

double sphere_area(int dim) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi;
    default: throw Error(ErrorCode::InvalidDimension, "dim must be 1, 2 or 3");
  }
}

double yn_norm(const SampledFunction& f, int n) {
  require_finite(f);
  if (n < 1) throw Error(ErrorCode::ValidationError, "yn_norm needs n >= 1");
  const Grid& g = f.grid();
  const int dim = g.dim();
  const double eps_n = 1.0 / n;
  const double b = 1.0 + eps_n;
  const double a = eps_n * (dim + eps_n);
  double inner = 0.0;
  double outer = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double mag = std::abs(f[k]);
    if (mag == 0.0) continue;
    const double r = g.radius(k);
    const double p = std::pow(mag, b);
    if (r <= n) {
      inner += p;
    } else {
      outer += p * std::pow(r, a);
    }
  }
  const double integral = (inner + outer) * g.cell_volume();
  if (integral == 0.0) return 0.0;
  const double prefactor = std::pow(2.0 * sphere_area(dim) * std::pow(n, dim), 1.0 / (n + 1));
  return prefactor * std::pow(integral, 1.0 / b);
}

double y0_norm(const SampledFunction& f) {
  const Grid& g = f.grid();
  const double a = 1.0 * (g.dim() + 1.0);
  double moment = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) moment += std::abs(f[k]) * std::pow(g.radius(k), a);
  return std::max(yn_norm(f, 1), moment * g.cell_volume());
}

YnAxiomReport yn_axiom_check(const SampledFunction& f, const std::vector<int>& n_list, double final_gap_cap) {
  if (!std::is_sorted(n_list.begin(), n_list.end()) ||
      std::adjacent_find(n_list.begin(), n_list.end()) != n_list.end()) {
    throw Error(ErrorCode::ValidationError, "n_list must be strictly increasing");
  }
  YnAxiomReport report;
  const double l1 = norm(f, NormKind::L1);
  double prev_gap = HUGE_VAL;
  for (const int n : n_list) {
    const double yn = yn_norm(f, n);
    const double gap = yn - l1;
    report.entries.push_back({n, yn, l1, gap});
    if (l1 > yn * (1.0 + 1e-8)) report.dominates = false;
    if (std::abs(gap) > prev_gap + 1e-12 * std::max(1.0, l1)) report.gaps_decreasing = false;
    prev_gap = std::abs(gap);
  }
  if (!report.entries.empty() && std::abs(report.entries.back().gap) > final_gap_cap) report.final_gap_ok = false;
  return report;
}

double cutoff(double x, int n) {
  const double s = std::abs(x) - n;
  if (s <= 0.0) return 1.0;
  if (s >= 1.0) return 0.0;
  return 1.0 - s * s * (3.0 - 2.0 * s);
}

namespace {

double bump(double x) {
  const double q = 1.0 - x * x;
  return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
}

}  // namespace

SampledFunction mollify(const SampledFunction& u, int ell, int n_cut) {
  require_finite(u);
  const Grid& g = u.grid();
  if (g.dim() != 1) throw Error(ErrorCode::UnsupportedDimension, "mollify is one-dimensional");
  if (ell < 1 || n_cut < 1) throw Error(ErrorCode::ValidationError, "mollify needs ell >= 1 and n_cut >= 1");
  const double h = g.spacing();
  const int m = g.points_per_dim();

  // Kernel offsets j with |j h| < 1/ell.
  const int half = static_cast<int>(std::floor(1.0 / (ell * h)));
  std::vector<double> kernel(2 * half + 1);
  double mass = 0.0;
  for (int j = -half; j <= half; ++j) {
    const double w = ell * bump(ell * j * h);
    kernel[j + half] = w;
    mass += w;
  }
  for (auto& w : kernel) w /= mass;

  std::vector<Complex> cut(m);
  for (int i = 0; i < m; ++i) cut[i] = cutoff(g.coordinate(i), n_cut) * u[i];
  SampledFunction out(g);
  for (int i = 0; i < m; ++i) {
    Complex acc{};
    const int lo = std::max(0, i - half);
    const int hi = std::min(m - 1, i + half);
    for (int j = lo; j <= hi; ++j) acc += kernel[i - j + half] * cut[j];
    out[i] = acc;
  }
  return out;
}

double arctan_derivative(double t, double x) {
  const double y = t + x;
  const double sign = y > 0.0 ? 1.0 : (y < 0.0 ? -1.0 : 0.0);
  return sign / (1.0 + y * y);
}

double arctan_witness(double t, double s) {
  if (t < s) std::swap(t, s);
  return t - s >= 2.0 ? 1.0 - t : -0.5 * (t + s);
}

double arctan_counterexample_sep(double t, double s, const Grid& grid_1d) {
  if (t == s) throw Error(ErrorCode::DegenerateInput, "separation needs t != s");
  if (grid_1d.dim() != 1) throw Error(ErrorCode::UnsupportedDimension, "separation uses a 1D grid");
  const double x0 = arctan_witness(t, s);
  if (std::abs(x0) > grid_1d.half_width()) {
    throw Error(ErrorCode::DegenerateInput, "grid does not cover the witness point");
  }
  double sep = std::abs(arctan_derivative(t, x0) - arctan_derivative(s, x0));
  for (int i = 0; i < grid_1d.points_per_dim(); ++i) {
    const double x = grid_1d.coordinate(i);
    sep = std::max(sep, std::abs(arctan_derivative(t, x) - arctan_derivative(s, x)));
  }
  return sep;
}

}  // namespace satnls::rnp
