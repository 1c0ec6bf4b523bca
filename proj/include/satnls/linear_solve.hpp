#pragma once

#include <span>
#include <vector>

#include "satnls/grid_field.hpp"

namespace satnls {

/// Applies H = Delta_h + V with zero Dirichlet ghosts.
void apply_hamiltonian(const Grid& grid, std::span<const double> potential, std::span<const Complex> in,
                       std::span<Complex> out);

struct LinearSolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Solves (I + diag(shift) - i a H) x = b, H = Delta_h + V.
///
/// The matrix is complex symmetric with Hermitian part I + diag(shift) >= I.
/// One-dimensional grids use a direct tridiagonal sweep; higher dimensions
/// use Jacobi-preconditioned conjugate orthogonal CG, warm-started from x.
/// `shift` may be empty. Throws LinearSolveDiverged.
LinearSolveStats solve_shifted(const Grid& grid, std::span<const double> potential, double a,
                               std::span<const double> shift, std::span<const Complex> b, std::span<Complex> x,
                               double tol, int max_iter = 2000);

}  // namespace satnls
