#include "satnls/series.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "satnls/error.hpp"

namespace satnls {

namespace {

constexpr const char* kHeader = "t,mass_l2_sq,l1_norm,h1_seminorm,sup_abs,forcing_work,boundary_frac";

}  // namespace

void DiagSeries::reserve(std::size_t n) {
  times.reserve(n);
  mass_sq.reserve(n);
  l1.reserve(n);
  h1semi.reserve(n);
  sup_abs.reserve(n);
  forcing_work.reserve(n);
  boundary_frac.reserve(n);
}

void write_series_csv(const DiagSeries& s, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  os << kHeader << '\n' << std::setprecision(17);
  for (std::size_t k = 0; k < s.size(); ++k) {
    os << s.times[k] << ',' << s.mass_sq[k] << ',' << s.l1[k] << ',' << s.h1semi[k] << ',' << s.sup_abs[k]
       << ',' << s.forcing_work[k] << ',' << s.boundary_frac[k] << '\n';
  }
}

DiagSeries read_series_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::string line;
  std::getline(is, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) throw Error(ErrorCode::IoError, "unexpected series header in " + path.string());
  DiagSeries s;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    std::stringstream ss(line);
    std::string cell;
    double v[7];
    for (double& x : v) {
      if (!std::getline(ss, cell, ',')) throw Error(ErrorCode::IoError, "short series row: " + line);
      x = std::stod(cell);
    }
    s.times.push_back(v[0]);
    s.mass_sq.push_back(v[1]);
    s.l1.push_back(v[2]);
    s.h1semi.push_back(v[3]);
    s.sup_abs.push_back(v[4]);
    s.forcing_work.push_back(v[5]);
    s.boundary_frac.push_back(v[6]);
  }
  return s;
}

}  // namespace satnls
