#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

namespace satnls {

/// Per-output-time record of a run.
struct DiagSeries {
  std::vector<double> times;
  std::vector<double> mass_sq;        // ||u||_2^2
  std::vector<double> l1;             // ||u||_1
  std::vector<double> h1semi;         // ||grad u||_2
  std::vector<double> sup_abs;        // max |u|
  std::vector<double> forcing_work;   // Im sum f conj(u) h^N
  std::vector<double> boundary_frac;  // outer-shell mass share

  std::size_t size() const noexcept { return times.size(); }
  bool empty() const noexcept { return times.empty(); }
  void reserve(std::size_t n);
};

/// Columns t,mass_l2_sq,l1_norm,h1_seminorm,sup_abs,forcing_work,boundary_frac.
void write_series_csv(const DiagSeries& s, const std::filesystem::path& path);
DiagSeries read_series_csv(const std::filesystem::path& path);

}  // namespace satnls
