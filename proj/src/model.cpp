#include "satnls/model.hpp"

#include <algorithm>
#include <cmath>

#include "satnls/error.hpp"

namespace satnls {

std::vector<double> PotentialTerm::sample(const Grid& grid) const {
  std::vector<double> out(grid.size(), 0.0);
  switch (kind) {
    case Kind::Zero:
      break;
    case Kind::Constant:
      std::fill(out.begin(), out.end(), value);
      break;
    case Kind::Well:
      for (std::size_t k = 0; k < grid.size(); ++k) out[k] = grid.radius(k) < radius ? value : 0.0;
      break;
    case Kind::InversePower: {
      // The singular node, if any, is evaluated at half a cell from the origin.
      const double floor_r = 0.5 * grid.spacing();
      for (std::size_t k = 0; k < grid.size(); ++k) {
        const double r = grid.radius(k);
        out[k] = r <= radius ? value * std::pow(std::max(r, floor_r), -alpha) : 0.0;
      }
      break;
    }
    case Kind::Samples:
      if (samples.size() != grid.size()) {
        throw Error(ErrorCode::GridMismatch, "potential samples do not match grid");
      }
      for (std::size_t k = 0; k < grid.size(); ++k) out[k] = samples[k].real();
      break;
  }
  return out;
}

namespace {

void require_real(const PotentialTerm& term, const char* which) {
  if (term.kind != PotentialTerm::Kind::Samples) return;
  for (const auto& z : term.samples) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw Error(ErrorCode::NonFiniteInput, std::string(which) + " has non-finite samples");
    }
    if (z.imag() != 0.0) {
      throw Error(ErrorCode::ComplexPotential, std::string(which) + " must be real-valued");
    }
  }
}

}  // namespace

PotentialSpec validate_potential(PotentialSpec spec, int dim) {
  require_real(spec.v1, "v1");
  require_real(spec.v2, "v2");
  switch (dim) {
    case 1:
      spec.p_v = 2.0;
      break;
    case 2:
      if (!(spec.beta > 0.0)) {
        throw Error(ErrorCode::InvalidExponent, "two-dimensional potentials need beta > 0");
      }
      spec.p_v = 2.0 + spec.beta;
      break;
    case 3:
      spec.p_v = 3.0;
      break;
    default:
      throw Error(ErrorCode::InvalidDimension, "dim must be 1, 2 or 3");
  }
  return spec;
}

std::vector<double> sample_potential(const PotentialSpec& spec, const Grid& grid) {
  auto v = spec.v1.sample(grid);
  const auto v2 = spec.v2.sample(grid);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] += v2[k];
  return v;
}

double potential_l2_bound_ratio(const PotentialSpec& spec, const ComplexField& u) {
  require_finite(u);
  const Grid& g = u.grid();
  const double u_l2 = norm(u, NormKind::L2);
  if (u_l2 == 0.0) throw Error(ErrorCode::ZeroField, "ratio undefined for the zero field");
  const auto v1 = spec.v1.sample(g);
  const auto v2 = spec.v2.sample(g);

  double vu_sq = 0.0;
  double v1_sup = 0.0;
  double v2_pow = 0.0;
  const double p = spec.p_v > 0.0 ? spec.p_v : validate_potential(spec, g.dim()).p_v;
  for (std::size_t k = 0; k < g.size(); ++k) {
    vu_sq += std::norm((v1[k] + v2[k]) * u[k]);
    v1_sup = std::max(v1_sup, std::abs(v1[k]));
    v2_pow += std::pow(std::abs(v2[k]), p);
  }
  const double vu = std::sqrt(vu_sq * g.cell_volume());
  const double v2_norm = std::pow(v2_pow * g.cell_volume(), 1.0 / p);
  const double grad = norm(u, NormKind::H1semi);
  const double denom = (v1_sup + v2_norm) * std::sqrt(u_l2 * u_l2 + grad * grad);
  if (denom == 0.0) {
    if (vu == 0.0) return 0.0;
    throw Error(ErrorCode::DegenerateInput, "zero potential norm with nonzero Vu");
  }
  return vu / denom;
}

double TimeProfile::operator()(double t) const noexcept {
  switch (kind) {
    case Kind::Constant: return a0;
    case Kind::ExpDecay: return a0 * std::exp(-rate * t);
    case Kind::Step: return t < t_switch ? a0 : a1;
  }
  return 0.0;
}

double TimeProfile::sup_after(double t0) const noexcept {
  switch (kind) {
    case Kind::Constant: return std::abs(a0);
    case Kind::ExpDecay: return rate >= 0.0 ? std::abs(a0 * std::exp(-rate * t0)) : HUGE_VAL;
    case Kind::Step: return t_switch <= t0 ? std::abs(a1) : std::max(std::abs(a0), std::abs(a1));
  }
  return 0.0;
}

ForcingSpec ForcingSpec::zero(const Grid& grid) {
  return ForcingSpec{Kind::Zero, TimeProfile{}, ComplexField(grid), 0.0, 0.0};
}

ForcingSpec ForcingSpec::separable(ComplexField profile, TimeProfile amp) {
  require_finite(profile);
  return ForcingSpec{Kind::Separable, amp, std::move(profile), 0.0, 0.0};
}

ForcingSpec ForcingSpec::bangbang_capped(ComplexField profile, TimeProfile amp, double t0) {
  require_finite(profile);
  if (!(t0 >= 0.0)) throw Error(ErrorCode::ValidationError, "switch time t0 must be >= 0");
  return ForcingSpec{Kind::BangBangCapped, amp, std::move(profile), t0, 0.0};
}

ForcingSpec ForcingSpec::ramp_to_zero(ComplexField profile, double eps_star, double t0) {
  require_finite(profile);
  if (!(t0 >= 0.0)) throw Error(ErrorCode::ValidationError, "switch time t0 must be >= 0");
  if (!(eps_star >= 0.0)) throw Error(ErrorCode::ValidationError, "eps_star must be >= 0");
  const double n = norm(profile, NormKind::L2);
  if (n == 0.0) throw Error(ErrorCode::DegenerateInput, "ramp profile must be nonzero");
  profile *= 1.0 / n;
  return ForcingSpec{Kind::RampToZero, TimeProfile{}, std::move(profile), t0, eps_star};
}

double ForcingSpec::amplitude(double t) const noexcept {
  switch (kind) {
    case Kind::Zero: return 0.0;
    case Kind::Separable:
    case Kind::BangBangCapped: return amp(t);
    case Kind::RampToZero: return eps_star * std::max(t0 - t, 0.0);
  }
  return 0.0;
}

ForcingSpec::Kind forcing_kind_from_string(std::string_view name) {
  if (name == "zero") return ForcingSpec::Kind::Zero;
  if (name == "separable") return ForcingSpec::Kind::Separable;
  if (name == "bangbang_capped") return ForcingSpec::Kind::BangBangCapped;
  if (name == "ramp_to_zero") return ForcingSpec::Kind::RampToZero;
  throw Error(ErrorCode::UnknownKind, "unknown forcing kind '" + std::string(name) + "'");
}

std::string_view to_string(ForcingSpec::Kind kind) noexcept {
  switch (kind) {
    case ForcingSpec::Kind::Zero: return "zero";
    case ForcingSpec::Kind::Separable: return "separable";
    case ForcingSpec::Kind::BangBangCapped: return "bangbang_capped";
    case ForcingSpec::Kind::RampToZero: return "ramp_to_zero";
  }
  return "zero";
}

ComplexField eval_forcing(const ForcingSpec& spec, double t) {
  if (!(t >= 0.0)) throw Error(ErrorCode::InvalidTime, "forcing evaluated at negative time");
  ComplexField f(spec.profile.grid());
  const double a = spec.amplitude(t);
  if (a == 0.0) return f;
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = a * spec.profile[k];
  return f;
}

ModelSpec make_model(const Grid& grid, PotentialSpec potential, double mu, ForcingSpec forcing) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw Error(ErrorCode::ValidationError, "mu must be a finite nonnegative number");
  }
  if (!(forcing.profile.grid() == grid)) {
    throw Error(ErrorCode::GridMismatch, "forcing profile is not on the model grid");
  }
  potential = validate_potential(std::move(potential), grid.dim());
  if (forcing.kind == ForcingSpec::Kind::BangBangCapped) {
    const double sup = forcing.amp.sup_after(forcing.t0) * norm(forcing.profile, NormKind::Linf);
    if (!(sup < mu)) {
      throw Error(ErrorCode::ValidationError, "bang-bang forcing must satisfy sup|f| < mu after t0");
    }
  }
  auto values = sample_potential(potential, grid);
  return ModelSpec{grid, std::move(potential), std::move(values), mu, std::move(forcing)};
}

ComplexField g_eps(const ComplexField& u, double eps) {
  require_finite(u);
  if (!(eps >= 0.0)) throw Error(ErrorCode::ValidationError, "eps must be >= 0");
  ComplexField out(u.grid());
  for (std::size_t k = 0; k < u.size(); ++k) {
    const Complex z = u[k];
    if (z == Complex{}) continue;
    out[k] = z / std::sqrt(std::norm(z) + eps);
  }
  return out;
}

SaturatedSection saturated_section(const ComplexField& u, const ComplexField& f, double mu, double zero_tol) {
  require_same_grid(u, f);
  SaturatedSection s{ComplexField(u.grid()), std::vector<bool>(u.size(), false)};
  const Complex i_unit(0.0, 1.0);
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double r = std::abs(u[k]);
    if (r > zero_tol) {
      s.values[k] = u[k] / r;
      continue;
    }
    s.zero_mask[k] = true;
    const double fa = std::abs(f[k]);
    if (fa == 0.0) continue;
    s.values[k] = fa <= mu ? f[k] / (i_unit * mu) : f[k] / (i_unit * fa);
  }
  return s;
}

double monotonicity_pairing(const ComplexField& u1, const ComplexField& U1, const ComplexField& u2,
                            const ComplexField& U2) {
  require_same_grid(u1, U1);
  require_same_grid(u1, u2);
  require_same_grid(u1, U2);
  constexpr double kSectionSlack = 1e-12;
  double s = 0.0;
  for (std::size_t k = 0; k < u1.size(); ++k) {
    if (std::abs(U1[k]) > 1.0 + kSectionSlack || std::abs(U2[k]) > 1.0 + kSectionSlack) {
      throw Error(ErrorCode::InvalidSection, "section modulus exceeds 1");
    }
    s += ((U1[k] - U2[k]) * std::conj(u1[k] - u2[k])).real();
  }
  return s * u1.grid().cell_volume();
}

}  // namespace satnls
