#include "satnls/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "satnls/error.hpp"

namespace satnls {

namespace {

void require_nonempty(const DiagSeries& s) {
  if (s.empty()) throw Error(ErrorCode::EmptySeries, "series has no samples");
}

}  // namespace

std::vector<double> mass_balance_residual(const DiagSeries& series, const ModelSpec& model) {
  require_nonempty(series);
  const std::size_t n = series.size();
  std::vector<double> r(n, 0.0);
  double damping = 0.0;
  double work = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double dt = series.times[k] - series.times[k - 1];
    damping += 0.5 * dt * (series.l1[k] + series.l1[k - 1]);
    work += 0.5 * dt * (series.forcing_work[k] + series.forcing_work[k - 1]);
    r[k] = 0.5 * (series.mass_sq[k] - series.mass_sq[0]) + model.mu * damping - work;
  }
  return r;
}

double gn_ratio(const ComplexField& u) {
  const int n = u.grid().dim();
  const double l2 = norm(u, NormKind::L2);
  const double l1 = norm(u, NormKind::L1);
  const double grad = norm(u, NormKind::H1semi);
  if (l1 == 0.0 || grad == 0.0) throw Error(ErrorCode::DegenerateInput, "ratio undefined for the zero field");
  return std::pow(l2, 0.5 * (n + 2)) / (l1 * std::pow(grad, 0.5 * n));
}

std::optional<double> extinction_time(const DiagSeries& series, double tol) {
  require_nonempty(series);
  if (!(tol > 0.0)) throw Error(ErrorCode::ValidationError, "extinction tolerance must be positive");
  for (std::size_t k = series.size(); k-- > 0;) {
    if (std::sqrt(series.mass_sq[k]) > tol) {
      if (k + 1 == series.size()) return std::nullopt;
      return series.times[k + 1];
    }
  }
  return series.times.front();
}

BoundForm bound_form_for(int dim) {
  switch (dim) {
    case 1: return BoundForm::SquareRootLinear;
    case 2: return BoundForm::Exponential;
    case 3: return BoundForm::Algebraic;
    default: throw Error(ErrorCode::InvalidDimension, "dim must be 1, 2 or 3");
  }
}

std::string_view to_string(BoundForm form) noexcept {
  switch (form) {
    case BoundForm::SquareRootLinear: return "sqrt_linear";
    case BoundForm::Exponential: return "exponential";
    case BoundForm::Algebraic: return "algebraic";
  }
  return "sqrt_linear";
}

double bound_curve(const BoundCurveParams& p, double t) {
  if (t < p.t0) throw Error(ErrorCode::InvalidTime, "bound evaluated before t0");
  const double s = t - p.t0;
  switch (bound_form_for(p.dim)) {
    case BoundForm::SquareRootLinear: {
      const double root = std::max(std::sqrt(p.u_t0) - p.c * s, 0.0);
      return root * root;
    }
    case BoundForm::Exponential:
      return p.u_t0 * std::exp(-p.c * s);
    case BoundForm::Algebraic: {
      const double k = 0.5 * (p.dim - 2);
      return p.u_t0 / std::pow(1.0 + p.c * std::pow(p.u_t0, k) * s, 1.0 / k);
    }
  }
  return 0.0;
}

BoundCurveParams fit_decay_constant(const DiagSeries& series, int dim, double t0) {
  require_nonempty(series);
  const BoundForm form = bound_form_for(dim);
  const auto first =
      std::lower_bound(series.times.begin(), series.times.end(), t0 - 1e-12 * std::max(1.0, std::abs(t0)));
  if (first == series.times.end()) throw Error(ErrorCode::InsufficientData, "no samples at or after t0");
  const std::size_t k0 = static_cast<std::size_t>(first - series.times.begin());

  std::size_t positive = 0;
  for (std::size_t k = k0; k < series.size(); ++k) positive += series.mass_sq[k] > 0.0 ? 1 : 0;
  if (positive < 10) throw Error(ErrorCode::InsufficientData, "fewer than 10 positive samples after t0");

  BoundCurveParams p{dim, 0.0, std::sqrt(series.mass_sq[k0]), series.times[k0]};
  double c = std::numeric_limits<double>::infinity();
  for (std::size_t k = k0 + 1; k < series.size(); ++k) {
    const double u = std::sqrt(series.mass_sq[k]);
    const double s = series.times[k] - p.t0;
    // Zero samples are dominated by every nonnegative bound.
    if (u <= 0.0 || s <= 0.0) continue;
    double implied = 0.0;
    switch (form) {
      case BoundForm::SquareRootLinear:
        implied = (std::sqrt(p.u_t0) - std::sqrt(u)) / s;
        break;
      case BoundForm::Exponential:
        implied = std::log(p.u_t0 / u) / s;
        break;
      case BoundForm::Algebraic: {
        const double kexp = 0.5 * (dim - 2);
        implied = (std::pow(p.u_t0 / u, kexp) - 1.0) / (std::pow(p.u_t0, kexp) * s);
        break;
      }
    }
    c = std::min(c, implied);
  }
  if (!std::isfinite(c) || !(c > 0.0)) {
    throw Error(ErrorCode::NoPositiveConstant, "no positive decay constant dominates the data");
  }
  p.c = c;
  return p;
}

CheckResult a_priori_check(const DiagSeries& series, const ModelSpec& model) {
  require_nonempty(series);
  const double profile_l2 = norm(model.forcing.profile, NormKind::L2);
  const double u0 = std::sqrt(series.mass_sq.front());
  double forcing_integral = 0.0;
  CheckResult res{true, -std::numeric_limits<double>::infinity()};
  for (std::size_t k = 0; k < series.size(); ++k) {
    if (k > 0) {
      const double dt = series.times[k] - series.times[k - 1];
      const double mid = 0.5 * (series.times[k] + series.times[k - 1]);
      forcing_integral += dt * std::abs(model.forcing.amplitude(mid)) * profile_l2;
    }
    const double violation = std::sqrt(series.mass_sq[k]) - (u0 + forcing_integral);
    res.max_violation = std::max(res.max_violation, violation);
    if (violation > 1e-8) res.ok = false;
  }
  return res;
}

CheckResult continuous_dependence_check(std::span<const double> times, std::span<const double> field_diff,
                                        std::span<const double> forcing_diff, double dt) {
  if (times.size() != field_diff.size() || times.size() != forcing_diff.size()) {
    throw Error(ErrorCode::GridMismatch, "time, field and forcing difference arrays differ in length");
  }
  if (times.empty()) return {};
  double max_f = 0.0;
  for (double v : forcing_diff) max_f = std::max(max_f, v);
  const double slack = 1e-8 + 2.0 * dt * max_f;

  // d(t) - F(t) <= d(s) - F(s) + slack for all s <= t, where F is the
  // running integral of the forcing gap; track min over s of d(s) - F(s).
  double integral = 0.0;
  double best = field_diff[0];
  CheckResult res{true, -std::numeric_limits<double>::infinity()};
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (k > 0) integral += 0.5 * (times[k] - times[k - 1]) * (forcing_diff[k] + forcing_diff[k - 1]);
    const double g = field_diff[k] - integral;
    best = std::min(best, g);
    const double violation = g - best;
    res.max_violation = std::max(res.max_violation, violation);
    if (violation > slack) res.ok = false;
  }
  return res;
}

double stabilization_check(const DiagSeries& series, double tail_fraction) {
  require_nonempty(series);
  const std::size_t n = series.size();
  const std::size_t tail = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(tail_fraction * n)));
  double m = 0.0;
  for (std::size_t k = n - std::min(tail, n); k < n; ++k) m = std::max(m, std::sqrt(series.mass_sq[k]));
  return m;
}

double linear_fit_r2(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 3 || y.size() != n) throw Error(ErrorCode::InsufficientData, "linear fit needs >= 3 paired samples");
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
    syy += (y[k] - my) * (y[k] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 1.0;
  return sxy * sxy / (sxx * syy);
}

}  // namespace satnls
