#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace satnls {

using Complex = std::complex<double>;

/// Uniform interior-point discretization of the box [-L, L]^N with
/// homogeneous Dirichlet closure. Boundary nodes are not stored; the
/// spacing is h = 2L / (M + 1) and interior node i sits at -L + (i + 1) h.
class Grid {
 public:
  int dim() const noexcept { return dim_; }
  double half_width() const noexcept { return half_width_; }
  int points_per_dim() const noexcept { return points_; }
  double spacing() const noexcept { return spacing_; }

  std::size_t size() const noexcept { return size_; }
  /// Quadrature weight h^N of one cell.
  double cell_volume() const noexcept { return cell_volume_; }

  double coordinate(int i) const noexcept { return -half_width_ + (i + 1) * spacing_; }
  std::array<int, 3> unflatten(std::size_t flat) const noexcept;
  std::array<double, 3> position(std::size_t flat) const noexcept;
  /// Euclidean |x| of a node.
  double radius(std::size_t flat) const noexcept;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  friend Grid make_grid(int dim, double half_width, int points_per_dim);
  Grid(int dim, double half_width, int points);

  int dim_ = 1;
  double half_width_ = 1.0;
  int points_ = 8;
  double spacing_ = 0.0;
  std::size_t size_ = 0;
  double cell_volume_ = 0.0;
};

/// Throws InvalidDimension for dim outside {1,2,3}, InvalidSize for
/// non-positive half width or fewer than 8 points per dimension.
Grid make_grid(int dim, double half_width, int points_per_dim);

/// Complex samples on the interior nodes of a grid, row-major with the
/// last index fastest.
class ComplexField {
 public:
  explicit ComplexField(const Grid& grid);
  ComplexField(const Grid& grid, std::vector<Complex> values);

  template <typename F>
  static ComplexField sample(const Grid& grid, F&& fn) {
    ComplexField out(grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      out.values_[k] = Complex(fn(grid.position(k)));
    }
    return out;
  }

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<Complex> values() noexcept { return values_; }
  std::span<const Complex> values() const noexcept { return values_; }
  Complex& operator[](std::size_t k) noexcept { return values_[k]; }
  const Complex& operator[](std::size_t k) const noexcept { return values_[k]; }

  bool all_finite() const noexcept;
  bool is_zero() const noexcept;

  ComplexField& operator+=(const ComplexField& other);
  ComplexField& operator-=(const ComplexField& other);
  ComplexField& operator*=(Complex c) noexcept;

  friend ComplexField operator+(ComplexField a, const ComplexField& b) { return a += b; }
  friend ComplexField operator-(ComplexField a, const ComplexField& b) { return a -= b; }
  friend ComplexField operator*(Complex c, ComplexField a) { return a *= c; }

 private:
  Grid grid_;
  std::vector<Complex> values_;
};

enum class NormKind { L2, L1, Linf, H1semi };

/// Discrete Dirichlet Laplacian: (2N+1)-point central stencil, zero ghosts.
ComplexField laplacian(const ComplexField& u);

/// Rectangle-rule norms; Linf is the pointwise maximum and H1semi the L2
/// norm of forward differences with zero boundary closure.
double norm(const ComplexField& u, NormKind kind);

/// Re sum u conj(v) h^N.
double inner_l2(const ComplexField& u, const ComplexField& v);

/// Share of L2 mass carried by the outermost shell_width layers of nodes.
double boundary_mass_fraction(const ComplexField& u, int shell_width);

void require_same_grid(const ComplexField& a, const ComplexField& b);
void require_finite(const ComplexField& u);

// Snapshot CSV: header "index_0[,index_1[,index_2]],re,im", one row per node.
void write_field_csv(const ComplexField& u, const std::filesystem::path& path);
/// Reads a snapshot; the dimension comes from the header and the number of
/// points per dimension from the largest index. The file must cover every node.
ComplexField read_field_csv(const std::filesystem::path& path, double half_width);

}  // namespace satnls
