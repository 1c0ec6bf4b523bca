#include "satnls/grid_field.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>

#include "satnls/error.hpp"

namespace satnls {

Grid::Grid(int dim, double half_width, int points)
    : dim_(dim), half_width_(half_width), points_(points) {
  spacing_ = 2.0 * half_width / (points + 1);
  size_ = 1;
  cell_volume_ = 1.0;
  for (int d = 0; d < dim; ++d) {
    size_ *= static_cast<std::size_t>(points);
    cell_volume_ *= spacing_;
  }
}

Grid make_grid(int dim, double half_width, int points_per_dim) {
  if (dim < 1 || dim > 3) {
    throw Error(ErrorCode::InvalidDimension, "dim must be 1, 2 or 3, got " + std::to_string(dim));
  }
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw Error(ErrorCode::InvalidSize, "half_width must be positive");
  }
  if (points_per_dim < 8) {
    throw Error(ErrorCode::InvalidSize, "points_per_dim must be >= 8");
  }
  return Grid(dim, half_width, points_per_dim);
}

std::array<int, 3> Grid::unflatten(std::size_t flat) const noexcept {
  std::array<int, 3> idx{0, 0, 0};
  for (int d = dim_ - 1; d >= 0; --d) {
    idx[d] = static_cast<int>(flat % points_);
    flat /= points_;
  }
  return idx;
}

std::array<double, 3> Grid::position(std::size_t flat) const noexcept {
  const auto idx = unflatten(flat);
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (int d = 0; d < dim_; ++d) x[d] = coordinate(idx[d]);
  return x;
}

double Grid::radius(std::size_t flat) const noexcept {
  const auto x = position(flat);
  return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
}

ComplexField::ComplexField(const Grid& grid) : grid_(grid), values_(grid.size()) {}

ComplexField::ComplexField(const Grid& grid, std::vector<Complex> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw Error(ErrorCode::GridMismatch, "value count does not match grid");
  }
}

bool ComplexField::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

bool ComplexField::is_zero() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](const Complex& z) { return z == Complex{}; });
}

ComplexField& ComplexField::operator+=(const ComplexField& other) {
  require_same_grid(*this, other);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

ComplexField& ComplexField::operator-=(const ComplexField& other) {
  require_same_grid(*this, other);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
  return *this;
}

ComplexField& ComplexField::operator*=(Complex c) noexcept {
  for (auto& z : values_) z *= c;
  return *this;
}

void require_same_grid(const ComplexField& a, const ComplexField& b) {
  if (!(a.grid() == b.grid())) {
    throw Error(ErrorCode::GridMismatch, "fields live on different grids");
  }
}

void require_finite(const ComplexField& u) {
  if (!u.all_finite()) throw Error(ErrorCode::NonFiniteInput, "field contains NaN or Inf");
}

namespace {

std::size_t stride_of(const Grid& g, int d) {
  std::size_t s = 1;
  for (int e = g.dim() - 1; e > d; --e) s *= static_cast<std::size_t>(g.points_per_dim());
  return s;
}

}  // namespace

ComplexField laplacian(const ComplexField& u) {
  require_finite(u);
  const Grid& g = u.grid();
  const double inv_h2 = 1.0 / (g.spacing() * g.spacing());
  const int m = g.points_per_dim();
  ComplexField out(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto idx = g.unflatten(k);
    Complex acc = -2.0 * g.dim() * u[k];
    for (int d = 0; d < g.dim(); ++d) {
      const std::size_t s = stride_of(g, d);
      if (idx[d] > 0) acc += u[k - s];
      if (idx[d] < m - 1) acc += u[k + s];
    }
    out[k] = acc * inv_h2;
  }
  return out;
}

double norm(const ComplexField& u, NormKind kind) {
  require_finite(u);
  const Grid& g = u.grid();
  const auto vals = u.values();
  switch (kind) {
    case NormKind::L2: {
      double s = 0.0;
      for (const auto& z : vals) s += std::norm(z);
      return std::sqrt(s * g.cell_volume());
    }
    case NormKind::L1: {
      double s = 0.0;
      for (const auto& z : vals) s += std::abs(z);
      return s * g.cell_volume();
    }
    case NormKind::Linf: {
      double s = 0.0;
      for (const auto& z : vals) s = std::max(s, std::abs(z));
      return s;
    }
    case NormKind::H1semi: {
      const int m = g.points_per_dim();
      double s = 0.0;
      for (std::size_t k = 0; k < g.size(); ++k) {
        const auto idx = g.unflatten(k);
        for (int d = 0; d < g.dim(); ++d) {
          const std::size_t st = stride_of(g, d);
          // Forward difference to the next node, or to the zero ghost.
          const Complex next = idx[d] < m - 1 ? vals[k + st] : Complex{};
          s += std::norm(next - vals[k]);
          // The difference entering from the lower ghost.
          if (idx[d] == 0) s += std::norm(vals[k]);
        }
      }
      return std::sqrt(s * g.cell_volume()) / g.spacing();
    }
  }
  return 0.0;
}

double inner_l2(const ComplexField& u, const ComplexField& v) {
  require_same_grid(u, v);
  double s = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) s += (u[k] * std::conj(v[k])).real();
  return s * u.grid().cell_volume();
}

double boundary_mass_fraction(const ComplexField& u, int shell_width) {
  const Grid& g = u.grid();
  const int m = g.points_per_dim();
  double total = 0.0;
  double shell = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double w = std::norm(u[k]);
    total += w;
    const auto idx = g.unflatten(k);
    bool outer = false;
    for (int d = 0; d < g.dim(); ++d) {
      if (idx[d] < shell_width || idx[d] >= m - shell_width) outer = true;
    }
    if (outer) shell += w;
  }
  return total > 0.0 ? shell / total : 0.0;
}

void write_field_csv(const ComplexField& u, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  const Grid& g = u.grid();
  for (int d = 0; d < g.dim(); ++d) os << "index_" << d << ',';
  os << "re,im\n";
  os << std::setprecision(17);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto idx = g.unflatten(k);
    for (int d = 0; d < g.dim(); ++d) os << idx[d] << ',';
    os << u[k].real() << ',' << u[k].imag() << '\n';
  }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    out.push_back(cell);
  }
  return out;
}

}  // namespace

ComplexField read_field_csv(const std::filesystem::path& path, double half_width) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorCode::IoError, "empty field file " + path.string());
  const auto header = split_csv(line);
  const int dim = static_cast<int>(header.size()) - 2;
  if (dim < 1 || dim > 3 || header[dim] != "re" || header[dim + 1] != "im") {
    throw Error(ErrorCode::IoError, "field header must be index_0[,index_1[,index_2]],re,im");
  }
  for (int d = 0; d < dim; ++d) {
    if (header[d] != "index_" + std::to_string(d)) {
      throw Error(ErrorCode::IoError, "unexpected column " + header[d]);
    }
  }
  std::map<std::array<int, 3>, Complex> rows;
  int max_index = -1;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv(line);
    if (static_cast<int>(cells.size()) != dim + 2) {
      throw Error(ErrorCode::IoError, "malformed row: " + line);
    }
    std::array<int, 3> idx{0, 0, 0};
    for (int d = 0; d < dim; ++d) {
      idx[d] = std::stoi(cells[d]);
      if (idx[d] < 0) throw Error(ErrorCode::IoError, "negative index in row: " + line);
      max_index = std::max(max_index, idx[d]);
    }
    rows[idx] = Complex(std::stod(cells[dim]), std::stod(cells[dim + 1]));
  }
  const Grid g = make_grid(dim, half_width, max_index + 1);
  if (rows.size() != g.size()) {
    throw Error(ErrorCode::IoError, "field file does not cover the full grid");
  }
  ComplexField u(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto it = rows.find(g.unflatten(k));
    if (it == rows.end()) throw Error(ErrorCode::IoError, "missing node in field file");
    u[k] = it->second;
  }
  require_finite(u);
  return u;
}

}  // namespace satnls
