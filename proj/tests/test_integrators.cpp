#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "satnls/error.hpp"
#include "satnls/integrators.hpp"
#include "satnls/linear_solve.hpp"
#include "test_util.hpp"

using namespace satnls;
using std::numbers::pi;

namespace {

ModelSpec free_model(const Grid& g, double mu, PotentialSpec pot = {}) {
  return make_model(g, std::move(pot), mu, ForcingSpec::zero(g));
}

ComplexField bump(const Grid& g, double amp, double width) {
  return ComplexField::sample(g, [&](const auto& x) {
    const double r = std::abs(x[0]);
    return r < width ? amp * std::cos(0.5 * pi * r / width) : 0.0;
  });
}

// Reference solution of dz/dt = -mu z/|z| - i f by many small RK4 steps.
Complex fine_rk4(Complex z, Complex f, double mu, double dt, int steps) {
  auto rhs = [&](Complex y) {
    const double r = std::abs(y);
    return (r > 0.0 ? -mu * y / r : Complex{}) - Complex(0.0, 1.0) * f;
  };
  const double h = dt / steps;
  for (int i = 0; i < steps; ++i) {
    const Complex k1 = rhs(z), k2 = rhs(z + 0.5 * h * k1), k3 = rhs(z + 0.5 * h * k2), k4 = rhs(z + h * k3);
    z += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return z;
}

}  // namespace

TEST_CASE("solver config validation") {
  SolverConfig c;
  CHECK_NOTHROW(c.validate());
  c.dt = 0.0;
  CHECK_THROWS_WITH_CODE(c.validate(), ErrorCode::InvalidConfig);
  c = SolverConfig{};
  c.t_end = 0.5 * c.dt;
  CHECK_THROWS_WITH_CODE(c.validate(), ErrorCode::InvalidConfig);
  c = SolverConfig{};
  c.scheme = Scheme::BackwardEulerReg;
  c.eps = 0.0;
  CHECK_THROWS_WITH_CODE(c.validate(), ErrorCode::InvalidConfig);
  CHECK(scheme_from_string("backward_euler_reg") == Scheme::BackwardEulerReg);
  CHECK(to_string(Scheme::Strang) == "strang");
}

TEST_CASE("linear step of zero is zero") {
  const Grid g = make_grid(2, 1.0, 16);
  const std::vector<double> v(g.size(), 0.0);
  CHECK(linear_half_step(ComplexField(g), v, 0.1).is_zero());
}

TEST_CASE("Crank-Nicolson multiplies a discrete eigenmode by the Cayley factor") {
  const Grid g = make_grid(1, 0.5, 255);
  const double h = g.spacing();
  const double lambda = 2.0 / (h * h) * (1.0 - std::cos(pi * h));
  const ComplexField u = ComplexField::sample(g, [](const auto& x) { return std::sin(pi * (x[0] + 0.5)); });
  const std::vector<double> v(g.size(), 0.0);
  const double dt_half = 1e-3;
  const ComplexField out = linear_half_step(u, v, dt_half);
  const Complex a(0.0, lambda * dt_half / 2.0);
  const Complex factor = (1.0 - a) / (1.0 + a);
  double err = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) err = std::max(err, std::abs(out[k] - factor * u[k]));
  CHECK(err <= 1e-12);
}

TEST_CASE("Crank-Nicolson is unitary for real potentials") {
  std::mt19937_64 rng(8);
  for (int dim = 1; dim <= 3; ++dim) {
    const Grid g = make_grid(dim, 2.0, dim == 1 ? 128 : (dim == 2 ? 32 : 12));
    std::uniform_real_distribution<double> unif(-3.0, 3.0);
    std::vector<double> v(g.size());
    for (auto& x : v) x = unif(rng);
    const ComplexField u = test::random_field(g, rng);
    const ComplexField out = linear_half_step(u, v, 0.05);
    const double n0 = norm(u, NormKind::L2);
    CHECK(std::abs(norm(out, NormKind::L2) - n0) <= 1e-10 * n0);
  }
}

TEST_CASE("shifted solve satisfies its equation in several dimensions") {
  std::mt19937_64 rng(9);
  for (int dim = 1; dim <= 3; ++dim) {
    const Grid g = make_grid(dim, 1.5, dim == 3 ? 10 : 20);
    std::vector<double> v(g.size(), 0.3), shift(g.size());
    std::uniform_real_distribution<double> unif(0.0, 2.0);
    for (auto& s : shift) s = unif(rng);
    const ComplexField b = test::random_field(g, rng);
    ComplexField x(g);
    const double a = 0.02;
    solve_shifted(g, v, a, shift, b.values(), x.values(), 1e-13);
    std::vector<Complex> hx(g.size());
    apply_hamiltonian(g, v, x.values(), hx);
    double res = 0.0, bn = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      const Complex r = (1.0 + shift[k]) * x[k] - Complex(0.0, a) * hx[k] - b[k];
      res += std::norm(r);
      bn += std::norm(b[k]);
    }
    CHECK(std::sqrt(res / bn) <= 1e-10);
  }
}

TEST_CASE("damping sub-flow closed-form cases") {
  const Complex z(3.0, 4.0);
  const Complex a = damping_substep(z, 0.0, 1.0, 2.0);
  CHECK(a.real() == doctest::Approx(1.8).epsilon(1e-15));
  CHECK(a.imag() == doctest::Approx(2.4).epsilon(1e-15));
  CHECK(damping_substep(z, 0.0, 1.0, 10.0) == Complex{});
  CHECK(damping_substep(0.0, 0.5, 1.0, 0.3) == Complex{});
  CHECK(damping_substep(0.0, 0.5, 1.0, 7.0) == Complex{});
  const Complex leave = damping_substep(0.0, Complex(0.0, 2.0), 1.0, 1.0);
  CHECK(std::abs(leave - Complex(1.0, 0.0)) <= 1e-6);
}

TEST_CASE("damping sub-flow matches a fine RK4 reference away from the origin") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Complex z(2.0 + unif(rng), 2.0 + unif(rng));
    const Complex f(unif(rng), unif(rng));
    const double dt = 0.5;  // |z| stays above 1 over the step
    const Complex ref = fine_rk4(z, f, 1.0, dt, 20000);
    CHECK(std::abs(damping_substep(z, f, 1.0, dt) - ref) <= 1e-9);
  }
}

TEST_CASE("damping sub-flow reaches the origin and stays when |f| < mu") {
  // Started on the ray -i f/|f| pointing inward: r(t) = r0 - (mu + |f|) t.
  const Complex f(0.0, 0.5);
  const Complex dir = Complex(0.0, -1.0) * f / std::abs(f);
  const Complex z = -0.3 * dir;
  const Complex mid = damping_substep(z, f, 1.0, 0.1);
  CHECK(std::abs(mid - (-0.15 * dir)) <= 1e-9);
  CHECK(damping_substep(z, f, 1.0, 1.0) == Complex{});
}

TEST_CASE("damping sub-flow on the outward ray when |f| > mu") {
  // On the ray -i f/|f| the flow is radial with speed |f| - mu.
  const Complex f(1.5, -2.0);
  const Complex dir = Complex(0.0, -1.0) * f / std::abs(f);
  const Complex z = 0.2 * dir;
  const Complex out = damping_substep(z, f, 1.0, 0.8);
  CHECK(std::abs(out - (0.2 + 1.5 * 0.8) * dir) <= 1e-9);
}

TEST_CASE("strang step preserves zero and conserves mass when mu = 0") {
  const Grid g = make_grid(1, 5.0, 128);
  const ModelSpec m0 = free_model(g, 1.0);
  SolverConfig c;
  c.dt = 1e-2;
  SimState zero = initial_state(m0, ComplexField(g));
  CHECK(strang_step(zero, m0, c).u.is_zero());

  std::mt19937_64 rng(12);
  const ModelSpec undamped = free_model(g, 0.0);
  SimState s = initial_state(undamped, test::random_field(g, rng));
  const double n0 = norm(s.u, NormKind::L2);
  for (int i = 0; i < 50; ++i) s = strang_step(s, undamped, c);
  CHECK(std::abs(norm(s.u, NormKind::L2) - n0) <= 1e-10 * n0);
  CHECK(s.step_count == 50);
  CHECK(s.t == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("both schemes dissipate mass without forcing") {
  const Grid g = make_grid(1, 6.0, 256);
  const ModelSpec m = free_model(g, 1.0);
  for (const Scheme scheme : {Scheme::Strang, Scheme::BackwardEulerReg}) {
    SolverConfig c;
    c.scheme = scheme;
    c.dt = 1e-3;
    SimState s = initial_state(m, bump(g, 0.8, 2.5));
    double prev = norm(s.u, NormKind::L2);
    for (int i = 0; i < 200; ++i) {
      s = scheme == Scheme::Strang ? strang_step(s, m, c) : backward_euler_step(s, m, c);
      const double now = norm(s.u, NormKind::L2);
      CHECK(now < prev);
      prev = now;
    }
  }
}

TEST_CASE("backward Euler scalar oracle and trivial fixed point") {
  // A huge box makes the discrete Laplacian negligible for a uniform field.
  const Grid g = make_grid(1, 1e8, 8);
  const ModelSpec m = free_model(g, 1.0);
  SolverConfig c;
  c.scheme = Scheme::BackwardEulerReg;
  c.dt = 0.5;
  c.t_end = 0.5;
  c.eps = 1e-16;
  const ComplexField ones(g, std::vector<Complex>(g.size(), Complex(1.0, 0.0)));
  const SimState out = backward_euler_step(initial_state(m, ones), m, c);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(std::abs(out.u[k] - 0.5) <= 1e-6);

  const SimState zero = backward_euler_step(initial_state(m, ComplexField(g)), m, c);
  CHECK(zero.u.is_zero());
  CHECK(zero.fp_iterations <= 1);
}

TEST_CASE("backward Euler reports a diverged fixed point") {
  const Grid g = make_grid(1, 6.0, 256);
  const ModelSpec m = free_model(g, 1.0);
  SolverConfig c;
  c.scheme = Scheme::BackwardEulerReg;
  c.dt = 1e-3;
  c.fp_max_iter = 1;
  c.fp_tol = 1e-300;
  CHECK_THROWS_WITH_CODE(backward_euler_step(initial_state(m, bump(g, 0.8, 2.5)), m, c),
                         ErrorCode::FixedPointDiverged);
}

TEST_CASE("run records every step and honours the truncation monitor") {
  const Grid g = make_grid(1, 6.0, 128);
  const ModelSpec m = free_model(g, 1.0);
  SolverConfig c;
  c.dt = 1e-2;
  c.t_end = 0.1;
  const RunResult zero = run(m, c, ComplexField(g));
  CHECK(zero.series.size() == 11);
  for (double v : zero.series.mass_sq) CHECK(v == 0.0);

  // Undamped data placed against the wall trips the monitor.
  const ModelSpec undamped = free_model(g, 0.0);
  const ComplexField edge = ComplexField::sample(g, [](const auto& x) { return std::exp(-(x[0] - 5.5) * (x[0] - 5.5)); });
  CHECK_THROWS_WITH_CODE(run(undamped, c, edge), ErrorCode::TruncationInvalid);
}

TEST_CASE("run is deterministic and cross_validate vanishes for identical configs") {
  const Grid g = make_grid(1, 6.0, 128);
  const ModelSpec m = free_model(g, 1.0);
  SolverConfig c;
  c.dt = 1e-3;
  c.t_end = 0.2;
  c.snapshot_stride = 10;
  const ComplexField u0 = bump(g, 0.8, 2.5);
  const RunResult a = run(m, c, u0);
  const RunResult b = run(m, c, u0);
  CHECK(a.series.mass_sq == b.series.mass_sq);
  CHECK(cross_validate(m, c, c, u0) == 0.0);

  SolverConfig no_snap = c;
  no_snap.snapshot_stride = 0;
  CHECK_THROWS_WITH_CODE(cross_validate(m, c, no_snap, u0), ErrorCode::InvalidConfig);
}

TEST_CASE("Strang self-convergence under time-step halving") {
  const Grid g = make_grid(1, 6.0, 256);
  const ModelSpec m = free_model(g, 1.0);
  const ComplexField u0 = ComplexField::sample(g, [](const auto& x) { return std::exp(-x[0] * x[0]); });
  auto snap_run = [&](double dt) {
    SolverConfig c;
    c.dt = dt;
    c.t_end = 0.2;
    c.snapshot_stride = static_cast<int>(std::llround(0.05 / dt));
    return run(m, c, u0);
  };
  const RunResult r1 = snap_run(5e-3), r2 = snap_run(2.5e-3), r3 = snap_run(1.25e-3);
  const double d12 = snapshot_sup_difference(r1, r2);
  const double d23 = snapshot_sup_difference(r2, r3);
  REQUIRE(d23 > 0.0);
  CHECK(d12 / d23 >= 1.8);
}

TEST_CASE("once extinct stays extinct under forcing below mu") {
  const Grid g = make_grid(1, 6.0, 128);
  const ComplexField phi = ComplexField::sample(g, [](const auto& x) { return 0.9 * std::exp(-x[0] * x[0]); });
  TimeProfile amp;
  amp.a0 = 1.0;
  const ModelSpec m = make_model(g, {}, 1.0, ForcingSpec::separable(phi, amp));
  SolverConfig c;
  c.dt = 1e-2;
  SimState s = initial_state(m, ComplexField(g));
  for (int i = 0; i < 100; ++i) {
    s = strang_step(s, m, c);
    CHECK(s.u.is_zero());
  }
}
