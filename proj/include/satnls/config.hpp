#pragma once

#include <filesystem>
#include <string>

#include "satnls/grid_field.hpp"
#include "satnls/integrators.hpp"
#include "satnls/model.hpp"

namespace satnls {

bool operator==(const PotentialTerm& a, const PotentialTerm& b);
bool operator==(const TimeProfile& a, const TimeProfile& b);
bool operator==(const SolverConfig& a, const SolverConfig& b);

/// Closed-form spatial shape used for initial data and forcing profiles.
struct ShapeSpec {
  enum class Kind { Zero, Gaussian, CosBump, Uniform };

  Kind kind = Kind::Zero;
  Complex amp{1.0, 0.0};
  double width = 1.0;  // Gaussian standard deviation / bump half width
  double kx = 0.0;     // plane-wave phase exp(i kx x_0)

  ComplexField sample(const Grid& grid) const;
  friend bool operator==(const ShapeSpec&, const ShapeSpec&) = default;
};

struct GridParams {
  int dim = 1;
  double half_width = 1.0;
  int points = 64;
  friend bool operator==(const GridParams&, const GridParams&) = default;
};

struct ForcingParams {
  ForcingSpec::Kind kind = ForcingSpec::Kind::Zero;
  TimeProfile amp;
  ShapeSpec profile;
  double t0 = 0.0;
  double eps_star = 0.0;
  friend bool operator==(const ForcingParams&, const ForcingParams&) = default;
};

struct OutputParams {
  std::string series_path = "series.csv";
  std::string report_path = "report.json";
  std::string snapshot_dir;  // empty: no snapshot files
  friend bool operator==(const OutputParams&, const OutputParams&) = default;
};

/// Declarative description of one run, as stored in a config file.
struct RunBundle {
  GridParams grid;
  double mu = 1.0;
  PotentialTerm v1;
  PotentialTerm v2;
  double beta = 0.0;
  ForcingParams forcing;
  ShapeSpec u0;
  SolverConfig solver;
  OutputParams output;
};

bool operator==(const RunBundle& a, const RunBundle& b);

struct BuiltRun {
  ModelSpec model;
  ComplexField u0;
  SolverConfig solver;
};

/// Samples the bundle on its grid and validates the model.
BuiltRun build(const RunBundle& bundle);

/// Parses the flat config grammar:
///
///   # comment
///   [section]
///   key = value          (dotted keys, e.g. forcing.amp.kind = constant)
///
/// Sections: grid, model, solver, output. Keys are addressed as
/// "<section>.<key>". Unknown keys are rejected. Throws MissingKey,
/// TypeError, UnknownKey or ValidationError naming the first offending key.
RunBundle parse_config_text(const std::string& text);
RunBundle parse_config(const std::filesystem::path& path);

/// Writes a document that parse_config_text reads back to an equal bundle.
std::string emit_config(const RunBundle& bundle);

}  // namespace satnls
