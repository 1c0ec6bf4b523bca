#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "satnls/error.hpp"
#include "satnls/model.hpp"
#include "test_util.hpp"

using namespace satnls;

namespace {

// Grid with h = 1 whose node 0 is the only node that differs between fields.
Grid unit_grid() { return make_grid(1, 4.5, 8); }

ComplexField single(const Grid& g, Complex v) {
  ComplexField u(g);
  u[0] = v;
  return u;
}

// Random field with roughly a quarter of the nodes exactly zero, paired with
// a valid saturated section (arbitrary |U| <= 1 on the zero set).
std::pair<ComplexField, ComplexField> random_section_pair(const Grid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  ComplexField u(g), U(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (unif(rng) < 0.25) {
      U[k] = std::polar(unif(rng), 2.0 * M_PI * unif(rng));
    } else {
      u[k] = Complex(n(rng), n(rng));
      U[k] = u[k] / std::abs(u[k]);
    }
  }
  return {u, U};
}

}  // namespace

TEST_CASE("validate_potential assigns the integrability exponent") {
  PotentialSpec spec{PotentialTerm::well(1.0, 1.0), PotentialTerm::inverse_power(1.0, 0.25, 1.0), 0.0, 0.0};
  CHECK(validate_potential(spec, 1).p_v == 2.0);
  spec.beta = 1.0;
  CHECK(validate_potential(spec, 2).p_v == 3.0);
  CHECK(validate_potential(spec, 3).p_v == 3.0);
  spec.beta = 0.0;
  CHECK_THROWS_WITH_CODE(validate_potential(spec, 2), ErrorCode::InvalidExponent);
  spec.beta = -1.0;
  CHECK_THROWS_WITH_CODE(validate_potential(spec, 2), ErrorCode::InvalidExponent);

  PotentialSpec complex_spec{PotentialTerm::sampled({Complex(1.0, 0.5)}), {}, 0.0, 0.0};
  CHECK_THROWS_WITH_CODE(validate_potential(complex_spec, 1), ErrorCode::ComplexPotential);
}

TEST_CASE("closed-form potentials sample as described") {
  const Grid g = make_grid(1, 4.5, 8);  // nodes at -3.5, ..., 3.5
  const auto well = PotentialTerm::well(2.0, 1.0).sample(g);
  CHECK(well[3] == 2.0);  // x = -0.5
  CHECK(well[0] == 0.0);
  const auto inv = PotentialTerm::inverse_power(1.0, 0.5, 2.0).sample(g);
  CHECK(inv[4] == doctest::Approx(std::pow(0.5, -0.5)));
  CHECK(inv[7] == 0.0);
  const auto c = PotentialTerm::constant(-1.25).sample(g);
  for (double v : c) CHECK(v == -1.25);
}

TEST_CASE("g_eps values") {
  const Grid g = unit_grid();
  CHECK(g_eps(ComplexField(g), 1.0).is_zero());
  CHECK(g_eps(ComplexField(g), 0.0).is_zero());
  CHECK(g_eps(single(g, 1.0), 3.0)[0] == Complex(0.5, 0.0));
  const Complex z = g_eps(single(g, Complex(3.0, 4.0)), 0.0)[0];
  CHECK(z.real() == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(z.imag() == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("g_eps is bounded and converges to the phase as eps decreases") {
  std::mt19937_64 rng(1);
  const Grid g = make_grid(1, 1.0, 200);
  const ComplexField u = test::random_field(g, rng);
  double prev = HUGE_VAL;
  for (double eps : {1e-2, 1e-4, 1e-8}) {
    const ComplexField ge = g_eps(u, eps);
    double err = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      CHECK(std::abs(ge[k]) <= 1.0);
      err = std::max(err, std::abs(ge[k] - u[k] / std::abs(u[k])));
    }
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("saturated_section branches") {
  const Grid g = unit_grid();
  const double tol = 1e-14;
  {
    const SaturatedSection s = saturated_section(single(g, Complex(3.0, 4.0)), ComplexField(g), 1.0, tol);
    CHECK(s.values[0].real() == doctest::Approx(0.6));
    CHECK(s.values[0].imag() == doctest::Approx(0.8));
    CHECK_FALSE(s.zero_mask[0]);
  }
  {
    const SaturatedSection s = saturated_section(ComplexField(g), single(g, Complex(0.0, 0.3)), 1.0, tol);
    CHECK(s.zero_mask[0]);
    CHECK(s.values[0].real() == doctest::Approx(0.3));
    CHECK(s.values[0].imag() == doctest::Approx(0.0));
  }
  {
    const SaturatedSection s = saturated_section(ComplexField(g), single(g, Complex(0.0, 2.0)), 1.0, tol);
    CHECK(std::abs(s.values[0]) == 1.0);
    CHECK(s.values[0].real() == doctest::Approx(1.0));
  }
}

TEST_CASE("saturated_section invariants on random inputs") {
  std::mt19937_64 rng(2);
  const Grid g = make_grid(2, 1.0, 16);
  for (int trial = 0; trial < 20; ++trial) {
    auto [u, unused] = random_section_pair(g, rng);
    const ComplexField f = test::random_field(g, rng, 1.5);
    const SaturatedSection s = saturated_section(u, f, 1.0, 1e-14);
    for (std::size_t k = 0; k < g.size(); ++k) {
      CHECK(std::abs(s.values[k]) <= 1.0 + 1e-15);
      if (!s.zero_mask[k]) CHECK(std::abs(s.values[k] - u[k] / std::abs(u[k])) <= 1e-15);
    }
  }
}

TEST_CASE("monotonicity pairing hand values") {
  const Grid g = unit_grid();
  const ComplexField one = single(g, 1.0);
  CHECK(monotonicity_pairing(one, one, one, one) == 0.0);
  CHECK(monotonicity_pairing(one, one, single(g, -1.0), single(g, -1.0)) == doctest::Approx(4.0));
  CHECK(monotonicity_pairing(one, one, ComplexField(g), ComplexField(g)) == doctest::Approx(1.0));
  CHECK_THROWS_WITH_CODE(monotonicity_pairing(one, single(g, 1.1), one, one), ErrorCode::InvalidSection);
}

TEST_CASE("monotonicity over random saturated sections") {
  std::mt19937_64 rng(3);
  const Grid g = make_grid(1, 1.0, 32);
  double worst = HUGE_VAL;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto [u1, U1] = random_section_pair(g, rng);
    const auto [u2, U2] = random_section_pair(g, rng);
    const double p = monotonicity_pairing(u1, U1, u2, U2);
    const double scale = norm(u1 - u2, NormKind::L1);
    worst = std::min(worst, p + 1e-12 * scale);
  }
  CHECK(worst >= 0.0);
}

TEST_CASE("monotonicity of the regularized section") {
  std::mt19937_64 rng(4);
  const Grid g = make_grid(1, 1.0, 32);
  for (double eps : {1e-2, 1e-8}) {
    double worst = HUGE_VAL;
    for (int trial = 0; trial < 1000; ++trial) {
      const ComplexField u = test::random_field(g, rng, 0.1);
      const ComplexField v = test::random_field(g, rng, 0.1);
      const double p = monotonicity_pairing(u, g_eps(u, eps), v, g_eps(v, eps));
      worst = std::min(worst, p + 1e-12 * norm(u - v, NormKind::L1));
    }
    CHECK(worst >= 0.0);
  }
}

TEST_CASE("potential_l2_bound_ratio") {
  std::mt19937_64 rng(5);
  const Grid g = make_grid(1, 3.0, 128);
  const ComplexField u = test::random_field(g, rng);
  PotentialSpec zero{};
  zero = validate_potential(zero, 1);
  CHECK(potential_l2_bound_ratio(zero, u) == 0.0);
  PotentialSpec c{PotentialTerm::constant(2.5), {}, 0.0, 0.0};
  c = validate_potential(c, 1);
  CHECK(potential_l2_bound_ratio(c, u) <= 1.0);
  CHECK_THROWS_WITH_CODE(potential_l2_bound_ratio(c, ComplexField(g)), ErrorCode::ZeroField);

  // Bounded random potential: the ratio stays bounded under refinement.
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  double max_coarse = 0.0, max_fine = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    for (const int m : {64, 128}) {
      const Grid gm = make_grid(1, 3.0, m);
      std::vector<Complex> samples(gm.size());
      for (auto& s : samples) s = unif(rng);
      PotentialSpec spec{PotentialTerm::sampled(samples), {}, 0.0, 0.0};
      spec = validate_potential(spec, 1);
      const double r = potential_l2_bound_ratio(spec, test::random_field(gm, rng));
      (m == 64 ? max_coarse : max_fine) = std::max(m == 64 ? max_coarse : max_fine, r);
    }
  }
  CHECK(std::isfinite(max_coarse));
  CHECK(max_fine <= 1.0);
  CHECK(max_coarse <= 1.0);
}

TEST_CASE("forcing evaluation") {
  const Grid g = make_grid(1, 2.0, 16);
  std::mt19937_64 rng(6);
  const ComplexField phi = test::random_field(g, rng);

  CHECK(eval_forcing(ForcingSpec::zero(g), 3.0).is_zero());

  TimeProfile one;
  one.a0 = 1.0;
  const ComplexField f = eval_forcing(ForcingSpec::separable(phi, one), 0.7);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(f[k] == phi[k]);

  const ForcingSpec ramp = ForcingSpec::ramp_to_zero(phi, 0.5, 2.0);
  CHECK(norm(eval_forcing(ramp, 1.0), NormKind::L2) == doctest::Approx(0.5));
  CHECK(eval_forcing(ramp, 2.0).is_zero());
  CHECK(eval_forcing(ramp, 5.0).is_zero());
  CHECK_THROWS_WITH_CODE(eval_forcing(ramp, -1.0), ErrorCode::InvalidTime);

  CHECK(forcing_kind_from_string("bangbang_capped") == ForcingSpec::Kind::BangBangCapped);
  CHECK_THROWS_WITH_CODE(forcing_kind_from_string("sawtooth"), ErrorCode::UnknownKind);
}

TEST_CASE("make_model enforces the bang-bang cap and mu >= 0") {
  const Grid g = make_grid(1, 2.0, 16);
  const ComplexField phi(g, std::vector<Complex>(g.size(), Complex(0.5, 0.0)));
  TimeProfile amp;
  amp.a0 = 1.0;
  CHECK_NOTHROW(make_model(g, {}, 1.0, ForcingSpec::bangbang_capped(phi, amp, 0.0)));
  amp.a0 = 2.5;
  CHECK_THROWS_WITH_CODE(make_model(g, {}, 1.0, ForcingSpec::bangbang_capped(phi, amp, 0.0)),
                         ErrorCode::ValidationError);
  CHECK_THROWS_WITH_CODE(make_model(g, {}, -1.0, ForcingSpec::zero(g)), ErrorCode::ValidationError);
  CHECK_NOTHROW(make_model(g, {}, 0.0, ForcingSpec::zero(g)));
}
