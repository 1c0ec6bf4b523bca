#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "satnls/grid_field.hpp"

namespace satnls {

/// One additive piece of the potential, either a closed-form descriptor or
/// raw samples on the simulation grid.
struct PotentialTerm {
  enum class Kind { Zero, Constant, Well, InversePower, Samples };

  Kind kind = Kind::Zero;
  double value = 0.0;   // constant level, well depth, or inverse-power amplitude
  double radius = 0.0;  // well radius / truncation radius of the inverse power
  double alpha = 0.0;   // inverse-power exponent
  std::vector<Complex> samples;  // only for Kind::Samples; must be real

  static PotentialTerm zero() { return {}; }
  static PotentialTerm constant(double c) { return {Kind::Constant, c, 0.0, 0.0, {}}; }
  static PotentialTerm well(double depth, double radius) { return {Kind::Well, depth, radius, 0.0, {}}; }
  static PotentialTerm inverse_power(double amp, double alpha, double radius) {
    return {Kind::InversePower, amp, radius, alpha, {}};
  }
  static PotentialTerm sampled(std::vector<Complex> s) { return {Kind::Samples, 0.0, 0.0, 0.0, std::move(s)}; }

  /// Nodal values on the grid.
  std::vector<double> sample(const Grid& grid) const;
  /// True when the term has zero gradient everywhere (zero or constant).
  bool is_flat() const noexcept { return kind == Kind::Zero || kind == Kind::Constant; }
};

/// V = V1 + V2 with V1 bounded and V2 in L^{p_V}.
struct PotentialSpec {
  PotentialTerm v1;
  PotentialTerm v2;
  double beta = 0.0;  // integrability margin, used only in two dimensions
  double p_v = 0.0;   // assigned by validate_potential

  bool is_flat() const noexcept { return v1.is_flat() && v2.is_flat(); }
};

/// Assigns p_V = 2 (N = 1), 2 + beta (N = 2, beta > 0) or N (N = 3).
/// Throws InvalidExponent, ComplexPotential, InvalidDimension.
PotentialSpec validate_potential(PotentialSpec spec, int dim);

/// Total nodal potential V1 + V2.
std::vector<double> sample_potential(const PotentialSpec& spec, const Grid& grid);

/// ||Vu||_2 / ((||V1||_inf + ||V2||_{p_V}) ||u||_{H^1_0}).
double potential_l2_bound_ratio(const PotentialSpec& spec, const ComplexField& u);

/// Scalar time profile a(t).
struct TimeProfile {
  enum class Kind { Constant, ExpDecay, Step };

  Kind kind = Kind::Constant;
  double a0 = 0.0;
  double a1 = 0.0;        // Step: value for t >= t_switch
  double rate = 0.0;      // ExpDecay: a0 exp(-rate t)
  double t_switch = 0.0;  // Step

  double operator()(double t) const noexcept;
  /// sup |a(t)| over t >= t0.
  double sup_after(double t0) const noexcept;
};

struct ForcingSpec {
  enum class Kind { Zero, Separable, BangBangCapped, RampToZero };

  Kind kind = Kind::Zero;
  TimeProfile amp;
  ComplexField profile;
  double t0 = 0.0;
  double eps_star = 0.0;

  static ForcingSpec zero(const Grid& grid);
  static ForcingSpec separable(ComplexField profile, TimeProfile amp);
  /// Persistent forcing whose sup norm stays below mu after t0; the cap is
  /// checked by make_model.
  static ForcingSpec bangbang_capped(ComplexField profile, TimeProfile amp, double t0);
  /// ||f(t)||_2 = eps_star (t0 - t)_+; the profile is normalized to unit L2.
  static ForcingSpec ramp_to_zero(ComplexField profile, double eps_star, double t0);

  /// Scalar multiplier of the profile at time t.
  double amplitude(double t) const noexcept;
};

ForcingSpec::Kind forcing_kind_from_string(std::string_view name);
std::string_view to_string(ForcingSpec::Kind kind) noexcept;

ComplexField eval_forcing(const ForcingSpec& spec, double t);

/// Validated model bundle: grid, potential, damping strength and forcing.
struct ModelSpec {
  Grid grid;
  PotentialSpec potential;
  std::vector<double> potential_values;
  double mu = 0.0;
  ForcingSpec forcing;
};

/// mu must be >= 0 (mu = 0 is accepted as an undamped control).
ModelSpec make_model(const Grid& grid, PotentialSpec potential, double mu, ForcingSpec forcing);

/// Pointwise u / (|u|^2 + eps)^{1/2}, with 0 at zeros of u.
ComplexField g_eps(const ComplexField& u, double eps);

struct SaturatedSection {
  ComplexField values;
  std::vector<bool> zero_mask;
};

/// U = u/|u| off the (numerical) zero set; on it U solves i mu U = f when
/// |f| <= mu and is the unit vector f / (i |f|) otherwise.
SaturatedSection saturated_section(const ComplexField& u, const ComplexField& f, double mu, double zero_tol);

/// Re sum (U1 - U2) conj(u1 - u2) h^N. Throws InvalidSection if |U| > 1.
double monotonicity_pairing(const ComplexField& u1, const ComplexField& U1, const ComplexField& u2,
                            const ComplexField& U2);

}  // namespace satnls
