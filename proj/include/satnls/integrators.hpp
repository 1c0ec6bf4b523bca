#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include "satnls/grid_field.hpp"
#include "satnls/model.hpp"
#include "satnls/series.hpp"

namespace satnls {

enum class Scheme { Strang, BackwardEulerReg };

Scheme scheme_from_string(std::string_view name);
std::string_view to_string(Scheme scheme) noexcept;

struct SolverConfig {
  Scheme scheme = Scheme::Strang;
  double dt = 1e-3;
  double eps = 1e-8;  // regularization, backward Euler only
  double t_end = 1.0;
  double fp_tol = 1e-10;
  int fp_max_iter = 200;
  double linsolve_tol = 1e-12;
  int snapshot_stride = 0;  // 0: no snapshots
  double boundary_fail_threshold = 1e-6;
  int boundary_shell = 0;   // 0: max(1, M/32)
  double zero_tol = 0.0;    // <= 0: 1e-14 max(1, sup|u0|)

  /// Throws InvalidConfig when the invariants fail.
  void validate() const;
  int step_count() const;
};

struct SimState {
  double t = 0.0;
  ComplexField u;
  SaturatedSection section;
  long step_count = 0;
  int fp_iterations = 0;  // sweeps used by the last implicit step
};

SimState initial_state(const ModelSpec& model, const ComplexField& u0);

/// Crank-Nicolson step of length dt_half for i u_t = -(Delta_h + V) u:
/// (I - i dt_half/2 H) u+ = (I + i dt_half/2 H) u.
ComplexField linear_half_step(const ComplexField& u, std::span<const double> potential, double dt_half,
                              double linsolve_tol = 1e-12);

/// Advances dz/dt = -mu z/|z| - i f over dt at a single node. With f = 0 the
/// flow is exact; otherwise adaptive RK4 on the regularized field with an
/// event clamp at the origin, where the node stays put iff |f| <= mu.
Complex damping_substep(Complex z, Complex f, double mu, double dt, double zero_tol = 1e-14);

/// linear(dt/2), damping(dt, f at the midpoint), linear(dt/2).
SimState strang_step(const SimState& state, const ModelSpec& model, const SolverConfig& config);

/// Implicit Euler on the eps-regularized equation, solved by a
/// lagged-coefficient fixed point: each sweep is one linear solve with the
/// damping weight mu / (|w|^2 + eps)^{1/2} frozen from the previous sweep.
SimState backward_euler_step(const SimState& state, const ModelSpec& model, const SolverConfig& config);

struct Snapshot {
  double t;
  ComplexField u;
};

struct RunResult {
  DiagSeries series;
  std::vector<Snapshot> snapshots;
  SimState final_state;
  int max_fixed_point_iterations = 0;
};

/// Called after every step with the new state.
using StepObserver = std::function<void(const SimState&)>;

/// Integrates to t_end, recording diagnostics at every step. Throws
/// TruncationInvalid when the boundary shell carries more than the
/// configured share of the mass.
RunResult run(const ModelSpec& model, SolverConfig config, const ComplexField& u0,
              const StepObserver& observer = {});

/// sup over common snapshot times of ||u_A - u_B||_2.
double cross_validate(const ModelSpec& model, const SolverConfig& a, const SolverConfig& b,
                      const ComplexField& u0);
/// Same, on already computed runs.
double snapshot_sup_difference(const RunResult& a, const RunResult& b);

/// Default node-zero threshold for an initial state.
double default_zero_tol(const ComplexField& u0);

}  // namespace satnls
