#pragma once

#include <vector>

#include "satnls/grid_field.hpp"

namespace satnls::rnp {

/// Samples of a function on a (possibly large) box; quadrature matches grid_field.
using SampledFunction = ComplexField;

/// Surface area of the unit sphere in R^N, with the convention 2 for N = 1.
double sphere_area(int dim);

/// Weighted L^{1+1/n} norm approximating the L1 norm from above:
///   (2 w n^N)^{1/(n+1)} ( int_{|x|<=n} |f|^b + int_{|x|>n} |f|^b |x|^a )^{1/b}
/// with b = 1 + 1/n and a = (N + 1/n)/n. Mass outside the box is ignored,
/// so f should be negligible near the box boundary.
double yn_norm(const SampledFunction& f, int n);

/// max{ ||f||_{Y_1}, int |f| |x|^{N+1} }.
double y0_norm(const SampledFunction& f);

struct YnEntry {
  int n;
  double yn;
  double l1;
  double gap;  // yn - l1
};

struct YnAxiomReport {
  std::vector<YnEntry> entries;
  bool dominates = true;        // l1 <= yn (1 + 1e-8) for every n
  bool gaps_decreasing = true;  // gap non-increasing along n_list
  bool final_gap_ok = true;     // last gap <= final_gap_cap
  bool ok() const noexcept { return dominates && gaps_decreasing && final_gap_ok; }
};

/// Checks domination and convergence of the Y_n norms towards the L1 norm
/// along an increasing list of n.
YnAxiomReport yn_axiom_check(const SampledFunction& f, const std::vector<int>& n_list, double final_gap_cap);

/// Smooth cutoff: 1 on [-n, n], 0 outside [-(n+1), n+1], cubic smoothstep between.
double cutoff(double x, int n);

/// rho_ell * (xi_n u) on a one-dimensional grid, with the standard
/// exp(-1/(1-x^2)) bump scaled to width 1/ell. The sampled kernel is
/// normalized to unit discrete mass. Throws UnsupportedDimension for N >= 2.
SampledFunction mollify(const SampledFunction& u, int ell, int n_cut);

/// Derivative field x -> sign(t + x) / (1 + (t + x)^2) of t -> arctan|t + .|.
double arctan_derivative(double t, double x);

/// Witness point at which the two derivative fields differ by at least 1/2.
double arctan_witness(double t, double s);

/// max |u'(t)(x) - u'(s)(x)| over the grid nodes and the witness point.
/// Throws DegenerateInput for t == s or a witness outside the box.
double arctan_counterexample_sep(double t, double s, const Grid& grid_1d);

}  // namespace satnls::rnp
