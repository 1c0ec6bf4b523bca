#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "satnls/grid_field.hpp"
#include "satnls/model.hpp"
#include "satnls/series.hpp"

namespace satnls {

/// Cumulative residual of the mass dissipation identity
///   1/2 d/dt ||u||^2 + mu ||u||_1 = Im int f conj(u),
/// integrated in time with the trapezoidal rule.
std::vector<double> mass_balance_residual(const DiagSeries& series, const ModelSpec& model);

/// ||u||_2^{(N+2)/2} / (||u||_1 ||grad u||_2^{N/2}). Throws DegenerateInput.
double gn_ratio(const ComplexField& u);

/// Earliest sample time after which sqrt(mass_sq) stays <= tol.
std::optional<double> extinction_time(const DiagSeries& series, double tol);

/// Decay-bound family selected by dimension.
enum class BoundForm { SquareRootLinear, Exponential, Algebraic };

BoundForm bound_form_for(int dim);
std::string_view to_string(BoundForm form) noexcept;

struct BoundCurveParams {
  int dim = 1;
  double c = 0.0;
  double u_t0 = 0.0;
  double t0 = 0.0;
};

/// N = 1: (sqrt(u_t0) - c (t - t0))_+^2
/// N = 2: u_t0 exp(-c (t - t0))
/// N = 3: u_t0 / (1 + c u_t0^{(N-2)/2} (t - t0))^{2/(N-2)}
double bound_curve(const BoundCurveParams& params, double t);

/// Largest c for which bound_curve dominates sqrt(mass_sq) at every sample
/// with t >= t0. The reference value is the first sample at or after t0.
BoundCurveParams fit_decay_constant(const DiagSeries& series, int dim, double t0);

struct CheckResult {
  bool ok = true;
  double max_violation = 0.0;  // max of (lhs - rhs), <= 0 when ok with margin
};

/// ||u(t)||_2 <= ||u0||_2 + int_0^t ||f(s)||_2 ds + 1e-8 at every sample.
CheckResult a_priori_check(const DiagSeries& series, const ModelSpec& model);

/// ||u(t) - v(t)|| <= ||u(s) - v(s)|| + int_s^t ||f - g|| for every s <= t,
/// with slack 1e-8 + 2 dt max ||f - g||.
CheckResult continuous_dependence_check(std::span<const double> times, std::span<const double> field_diff,
                                        std::span<const double> forcing_diff, double dt);

/// max sqrt(mass_sq) over the final tail_fraction of the samples.
double stabilization_check(const DiagSeries& series, double tail_fraction);

/// Coefficient of determination of a least-squares line through (x, y).
double linear_fit_r2(std::span<const double> x, std::span<const double> y);

}  // namespace satnls
