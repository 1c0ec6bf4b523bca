#include "satnls/linear_solve.hpp"

#include <cmath>
#include <string>

#include "satnls/error.hpp"

namespace satnls {

namespace {

constexpr Complex kI{0.0, 1.0};

double sum_norm(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return s;
}

Complex bilinear(std::span<const Complex> a, std::span<const Complex> b) {
  Complex s{};
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

void solve_tridiagonal(const Grid& grid, std::span<const double> potential, double a,
                       std::span<const double> shift, std::span<const Complex> b, std::span<Complex> x) {
  const std::size_t n = grid.size();
  const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
  const Complex off = -kI * a * inv_h2;
  std::vector<Complex> c_prime(n);
  std::vector<Complex> d_prime(n);
  auto diag = [&](std::size_t k) {
    const double v = potential.empty() ? 0.0 : potential[k];
    const double s = shift.empty() ? 0.0 : shift[k];
    return Complex(1.0 + s, 0.0) - kI * a * (v - 2.0 * inv_h2);
  };
  Complex denom = diag(0);
  c_prime[0] = off / denom;
  d_prime[0] = b[0] / denom;
  for (std::size_t k = 1; k < n; ++k) {
    denom = diag(k) - off * c_prime[k - 1];
    c_prime[k] = off / denom;
    d_prime[k] = (b[k] - off * d_prime[k - 1]) / denom;
  }
  x[n - 1] = d_prime[n - 1];
  for (std::size_t k = n - 1; k-- > 0;) x[k] = d_prime[k] - c_prime[k] * x[k + 1];
}

}  // namespace

void apply_hamiltonian(const Grid& grid, std::span<const double> potential, std::span<const Complex> in,
                       std::span<Complex> out) {
  const std::size_t n = grid.size();
  const std::size_t m = static_cast<std::size_t>(grid.points_per_dim());
  const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
  const double center = -2.0 * grid.dim() * inv_h2;
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = (center + (potential.empty() ? 0.0 : potential[k])) * in[k];
  }
  // Neighbour couplings, one axis at a time: index k = (outer * m + i) * stride + inner.
  std::size_t stride = 1;
  for (int d = grid.dim() - 1; d >= 0; --d) {
    const std::size_t block = stride * m;
    for (std::size_t base = 0; base < n; base += block) {
      for (std::size_t i = 0; i < m; ++i) {
        const std::size_t row = base + i * stride;
        for (std::size_t j = 0; j < stride; ++j) {
          const std::size_t k = row + j;
          Complex acc{};
          if (i > 0) acc += in[k - stride];
          if (i + 1 < m) acc += in[k + stride];
          out[k] += inv_h2 * acc;
        }
      }
    }
    stride = block;
  }
}

LinearSolveStats solve_shifted(const Grid& grid, std::span<const double> potential, double a,
                               std::span<const double> shift, std::span<const Complex> b, std::span<Complex> x,
                               double tol, int max_iter) {
  const std::size_t n = grid.size();
  const double b_norm = std::sqrt(sum_norm(b));
  if (b_norm == 0.0) {
    for (auto& z : x) z = Complex{};
    return {0, 0.0};
  }
  if (grid.dim() == 1) {
    solve_tridiagonal(grid, potential, a, shift, b, x);
    return {1, 0.0};
  }

  const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
  std::vector<Complex> inv_diag(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double v = potential.empty() ? 0.0 : potential[k];
    const double s = shift.empty() ? 0.0 : shift[k];
    inv_diag[k] = 1.0 / (Complex(1.0 + s, 0.0) - kI * a * (v - 2.0 * grid.dim() * inv_h2));
  }
  std::vector<Complex> hx(n);
  auto apply = [&](std::span<const Complex> in, std::span<Complex> out) {
    apply_hamiltonian(grid, potential, in, hx);
    for (std::size_t k = 0; k < n; ++k) {
      const double s = shift.empty() ? 0.0 : shift[k];
      out[k] = (1.0 + s) * in[k] - kI * a * hx[k];
    }
  };

  std::vector<Complex> r(n), z(n), p(n), q(n);
  apply(x, q);
  for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - q[k];
  double res = std::sqrt(sum_norm(r)) / b_norm;
  if (res <= tol) return {0, res};
  for (std::size_t k = 0; k < n; ++k) z[k] = inv_diag[k] * r[k];
  p = z;
  Complex rho = bilinear(r, z);
  for (int it = 1; it <= max_iter; ++it) {
    apply(p, q);
    const Complex pq = bilinear(p, q);
    if (pq == Complex{}) break;
    const Complex alpha = rho / pq;
    for (std::size_t k = 0; k < n; ++k) {
      x[k] += alpha * p[k];
      r[k] -= alpha * q[k];
    }
    res = std::sqrt(sum_norm(r)) / b_norm;
    if (res <= tol) return {it, res};
    for (std::size_t k = 0; k < n; ++k) z[k] = inv_diag[k] * r[k];
    const Complex rho_next = bilinear(r, z);
    const Complex beta = rho_next / rho;
    rho = rho_next;
    for (std::size_t k = 0; k < n; ++k) p[k] = z[k] + beta * p[k];
  }
  throw Error(ErrorCode::LinearSolveDiverged,
              "COCG did not reach tolerance, relative residual " + std::to_string(res));
}

}  // namespace satnls
