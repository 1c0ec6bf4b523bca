#include "satnls/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "satnls/error.hpp"
#include "satnls/linear_solve.hpp"

namespace satnls {

namespace {

constexpr Complex kI{0.0, 1.0};

double resolved_zero_tol(const SolverConfig& config) { return config.zero_tol > 0.0 ? config.zero_tol : 1e-14; }

}  // namespace

Scheme scheme_from_string(std::string_view name) {
  if (name == "strang") return Scheme::Strang;
  if (name == "backward_euler_reg") return Scheme::BackwardEulerReg;
  throw Error(ErrorCode::UnknownKind, "unknown scheme '" + std::string(name) + "'");
}

std::string_view to_string(Scheme scheme) noexcept {
  return scheme == Scheme::Strang ? "strang" : "backward_euler_reg";
}

void SolverConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidConfig, msg); };
  if (!(dt > 0.0) || !std::isfinite(dt)) fail("dt must be positive");
  if (!(t_end >= dt)) fail("t_end must be >= dt");
  if (scheme == Scheme::BackwardEulerReg && !(eps > 0.0)) fail("backward_euler_reg requires eps > 0");
  if (eps < 0.0) fail("eps must be >= 0");
  if (!(fp_tol > 0.0)) fail("fp_tol must be positive");
  if (fp_max_iter < 1) fail("fp_max_iter must be >= 1");
  if (!(linsolve_tol > 0.0)) fail("linsolve_tol must be positive");
  if (snapshot_stride < 0) fail("snapshot_stride must be >= 0");
  if (!(boundary_fail_threshold > 0.0)) fail("boundary_fail_threshold must be positive");
  if (boundary_shell < 0) fail("boundary_shell must be >= 0");
}

int SolverConfig::step_count() const { return static_cast<int>(std::llround(t_end / dt)); }

double default_zero_tol(const ComplexField& u0) { return 1e-14 * std::max(1.0, norm(u0, NormKind::Linf)); }

SimState initial_state(const ModelSpec& model, const ComplexField& u0) {
  require_finite(u0);
  if (!(u0.grid() == model.grid)) throw Error(ErrorCode::GridMismatch, "u0 is not on the model grid");
  const ComplexField f0 = eval_forcing(model.forcing, 0.0);
  auto section = saturated_section(u0, f0, model.mu, default_zero_tol(u0));
  return SimState{0.0, u0, std::move(section), 0, 0};
}

ComplexField linear_half_step(const ComplexField& u, std::span<const double> potential, double dt_half,
                              double linsolve_tol) {
  const Grid& g = u.grid();
  if (u.is_zero()) return ComplexField(g);
  const double a = 0.5 * dt_half;
  std::vector<Complex> hu(g.size());
  apply_hamiltonian(g, potential, u.values(), hu);
  std::vector<Complex> rhs(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) rhs[k] = u[k] + kI * a * hu[k];
  ComplexField out = u;
  solve_shifted(g, potential, a, {}, rhs, out.values(), linsolve_tol);
  return out;
}

Complex damping_substep(Complex z, Complex f, double mu, double dt, double zero_tol) {
  if (f == Complex{}) {
    const double r = std::abs(z);
    if (r == 0.0) return z;
    return z * std::max(1.0 - mu * dt / r, 0.0);
  }
  const double f_abs = std::abs(f);
  const Complex drift = -kI * f;
  const double eps = zero_tol * zero_tol;
  auto rhs = [&](Complex y) { return -mu * y / std::sqrt(std::norm(y) + eps) + drift; };
  auto rk4 = [&](Complex y, double h) {
    const Complex k1 = rhs(y);
    const Complex k2 = rhs(y + 0.5 * h * k1);
    const Complex k3 = rhs(y + 0.5 * h * k2);
    const Complex k4 = rhs(y + h * k3);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  };
  // At the origin the node either stays (|f| <= mu) or leaves along
  // -i f/|f|, on which ray the flow is exactly radial with speed |f| - mu.
  auto from_origin = [&](double remaining) {
    if (f_abs <= mu) return Complex{};
    return (drift / f_abs) * ((f_abs - mu) * remaining);
  };

  const double atol = 1e-13 * std::max(std::abs(z), (mu + f_abs) * dt);
  double remaining = dt;
  double h = dt;
  Complex y = z;
  for (int guard = 0; guard < 100000 && remaining > 0.0; ++guard) {
    const double r = std::abs(y);
    if (r <= zero_tol) return from_origin(remaining);
    // With |f| < mu the radius shrinks at rate at least mu - |f|, so a node
    // this close reaches the origin within the step and stays there.
    if (f_abs < mu && r <= (mu - f_abs) * remaining) return Complex{};
    h = std::min(h, remaining);
    // Event guard: do not step past the predicted arrival at the origin.
    const double r_dot = (rhs(y) * std::conj(y)).real() / r;
    bool to_event = false;
    if (r_dot < 0.0 && r + h * r_dot <= 0.0) {
      h = 0.9 * r / -r_dot;
      to_event = true;
    }
    const Complex full = rk4(y, h);
    const Complex half = rk4(rk4(y, 0.5 * h), 0.5 * h);
    const double err = std::abs(full - half) / 15.0;
    if (err > atol && h > 1e-300) {
      h *= std::max(0.2, 0.9 * std::pow(atol / err, 0.2));
      continue;
    }
    y = half + (half - full) / 15.0;
    remaining -= h;
    if (!to_event) {
      h *= err > 0.0 ? std::min(4.0, 0.9 * std::pow(atol / err, 0.2)) : 4.0;
    } else {
      h = remaining;
    }
  }
  if (std::abs(y) <= zero_tol) return f_abs <= mu ? Complex{} : y;
  return y;
}

SimState strang_step(const SimState& state, const ModelSpec& model, const SolverConfig& config) {
  const double dt = config.dt;
  const double z_tol = resolved_zero_tol(config);
  const ComplexField f = eval_forcing(model.forcing, state.t + 0.5 * dt);
  ComplexField mid = linear_half_step(state.u, model.potential_values, 0.5 * dt, config.linsolve_tol);
  for (std::size_t k = 0; k < mid.size(); ++k) mid[k] = damping_substep(mid[k], f[k], model.mu, dt, z_tol);
  auto section = saturated_section(mid, f, model.mu, z_tol);
  ComplexField next = linear_half_step(mid, model.potential_values, 0.5 * dt, config.linsolve_tol);
  const long steps = state.step_count + 1;
  return SimState{steps * dt, std::move(next), std::move(section), steps, 0};
}

SimState backward_euler_step(const SimState& state, const ModelSpec& model, const SolverConfig& config) {
  if (!(config.eps > 0.0)) throw Error(ErrorCode::InvalidConfig, "backward_euler_reg requires eps > 0");
  const Grid& g = model.grid;
  const double dt = config.dt;
  const long steps = state.step_count + 1;
  const double t_next = steps * dt;
  const ComplexField f = eval_forcing(model.forcing, t_next);

  std::vector<Complex> rhs(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) rhs[k] = state.u[k] - kI * dt * f[k];

  ComplexField w = state.u;
  ComplexField next = state.u;
  std::vector<double> weight(g.size());
  int sweeps = 0;
  double diff = 0.0;
  for (sweeps = 1; sweeps <= config.fp_max_iter; ++sweeps) {
    for (std::size_t k = 0; k < g.size(); ++k) weight[k] = dt * model.mu / std::sqrt(std::norm(w[k]) + config.eps);
    solve_shifted(g, model.potential_values, dt, weight, rhs, next.values(), config.linsolve_tol);
    double d = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) d += std::norm(next[k] - w[k]);
    diff = std::sqrt(d * g.cell_volume());
    std::copy(next.values().begin(), next.values().end(), w.values().begin());
    if (diff <= config.fp_tol) break;
  }
  if (sweeps > config.fp_max_iter) {
    throw Error(ErrorCode::FixedPointDiverged,
                "no convergence after " + std::to_string(config.fp_max_iter) + " sweeps, last update " +
                    std::to_string(diff));
  }
  const double z_tol = resolved_zero_tol(config);
  SaturatedSection section{g_eps(w, config.eps), std::vector<bool>(g.size(), false)};
  for (std::size_t k = 0; k < g.size(); ++k) section.zero_mask[k] = std::abs(w[k]) <= z_tol;
  return SimState{t_next, std::move(w), std::move(section), steps, sweeps};
}

namespace {

void record(DiagSeries& s, const SimState& state, const ModelSpec& model, int shell) {
  const ComplexField& u = state.u;
  const ComplexField f = eval_forcing(model.forcing, state.t);
  double work = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) work += (f[k] * std::conj(u[k])).imag();
  const double l2 = norm(u, NormKind::L2);
  s.times.push_back(state.t);
  s.mass_sq.push_back(l2 * l2);
  s.l1.push_back(norm(u, NormKind::L1));
  s.h1semi.push_back(norm(u, NormKind::H1semi));
  s.sup_abs.push_back(norm(u, NormKind::Linf));
  s.forcing_work.push_back(work * u.grid().cell_volume());
  s.boundary_frac.push_back(boundary_mass_fraction(u, shell));
}

}  // namespace

RunResult run(const ModelSpec& model, SolverConfig config, const ComplexField& u0, const StepObserver& observer) {
  config.validate();
  if (!(u0.grid() == model.grid)) throw Error(ErrorCode::GridMismatch, "u0 is not on the model grid");
  if (config.zero_tol <= 0.0) config.zero_tol = default_zero_tol(u0);
  const int shell =
      config.boundary_shell > 0 ? config.boundary_shell : std::max(1, model.grid.points_per_dim() / 32);

  RunResult result{DiagSeries{}, {}, initial_state(model, u0), 0};
  SimState& state = result.final_state;
  const int n_steps = config.step_count();
  result.series.reserve(static_cast<std::size_t>(n_steps) + 1);

  auto check_and_record = [&] {
    record(result.series, state, model, shell);
    const double frac = result.series.boundary_frac.back();
    if (frac > config.boundary_fail_threshold) {
      throw Error(ErrorCode::TruncationInvalid, "boundary mass fraction " + std::to_string(frac) + " at t = " +
                                                    std::to_string(state.t));
    }
    if (config.snapshot_stride > 0 && state.step_count % config.snapshot_stride == 0) {
      result.snapshots.push_back(Snapshot{state.t, state.u});
    }
  };

  check_and_record();
  for (int n = 0; n < n_steps; ++n) {
    state = config.scheme == Scheme::Strang ? strang_step(state, model, config)
                                            : backward_euler_step(state, model, config);
    result.max_fixed_point_iterations = std::max(result.max_fixed_point_iterations, state.fp_iterations);
    check_and_record();
    if (observer) observer(state);
  }
  return result;
}

double snapshot_sup_difference(const RunResult& a, const RunResult& b) {
  double sup = 0.0;
  std::size_t matched = 0;
  std::size_t j = 0;
  for (const auto& sa : a.snapshots) {
    const double tol = 1e-9 * std::max(1.0, std::abs(sa.t));
    while (j < b.snapshots.size() && b.snapshots[j].t < sa.t - tol) ++j;
    if (j == b.snapshots.size()) break;
    if (std::abs(b.snapshots[j].t - sa.t) > tol) continue;
    sup = std::max(sup, norm(sa.u - b.snapshots[j].u, NormKind::L2));
    ++matched;
  }
  if (matched == 0) throw Error(ErrorCode::DegenerateInput, "runs share no snapshot times");
  return sup;
}

double cross_validate(const ModelSpec& model, const SolverConfig& a, const SolverConfig& b,
                      const ComplexField& u0) {
  if (a.snapshot_stride <= 0 || b.snapshot_stride <= 0) {
    throw Error(ErrorCode::InvalidConfig, "cross validation needs snapshot_stride > 0 on both runs");
  }
  if (std::abs(a.t_end - b.t_end) > 1e-12 * std::max(1.0, a.t_end)) {
    throw Error(ErrorCode::InvalidConfig, "cross validation needs equal t_end");
  }
  const RunResult ra = run(model, a, u0);
  const RunResult rb = run(model, b, u0);
  return snapshot_sup_difference(ra, rb);
}

}  // namespace satnls
