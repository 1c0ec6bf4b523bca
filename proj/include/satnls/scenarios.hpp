#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "satnls/config.hpp"
#include "satnls/diagnostics.hpp"

namespace satnls {

enum class Compare { LessEq, GreaterEq, Less, Greater };

/// A named property check evaluated on a scenario's runs.
struct Expectation {
  std::string name;
  std::string operation;  // diagnostics operation producing the measured value
  std::string property;   // statement being checked
  Compare compare = Compare::LessEq;
  double threshold = 0.0;
};

bool satisfies(Compare compare, double value, double threshold) noexcept;

struct Scenario {
  std::string name;
  std::string description;
  RunBundle bundle;  // primary run
  std::vector<Expectation> expectations;
};

/// Deterministic list of named experiments.
const std::vector<Scenario>& catalog();
/// Throws UnknownScenario.
const Scenario& find_scenario(const std::string& name);

struct ExpectationResult {
  Expectation expectation;
  std::optional<double> value;  // empty when the quantity is undefined (e.g. no extinction)
  bool passed = false;
};

struct ScenarioReport {
  std::string name;
  std::optional<double> extinction_time;
  std::optional<double> fitted_c;
  BoundForm bound_form = BoundForm::SquareRootLinear;
  bool a_priori_ok = false;
  double mass_residual_max = 0.0;
  std::optional<double> cross_validation_sup;
  std::map<std::string, double> measurements;
  std::vector<ExpectationResult> results;

  bool passed() const noexcept;
  nlohmann::json to_json() const;
};

struct H1GrowthResult {
  bool ok = true;
  bool flat_potential = true;
  double max_violation = 0.0;  // flat branch: max of lhs - rhs
  double fitted_c = 0.0;       // non-flat branch: smallest rate making the exponential bound hold
};

/// Flat potential: ||grad u(t)|| <= ||grad u0|| + int_0^t ||grad f|| + 1e-6 at
/// every sample. Otherwise fits the smallest C with
/// ||u(t)||_{H^1_0} <= (||u0||_{H^1_0} + int_0^t ||f||_{H^1_0}) e^{C t} and
/// reports ok when it is finite. Throws MissingDiagnostics.
H1GrowthResult h1_growth_check(const DiagSeries& series, const ModelSpec& model);

/// Executes every run of the scenario, writes <outdir>/<name>/series*.csv and
/// report.json, and evaluates the expectations.
ScenarioReport run_scenario(const Scenario& scenario, const std::filesystem::path& outdir);
ScenarioReport run_scenario(const std::string& name, const std::filesystem::path& outdir);

/// Runs the named scenarios on up to `workers` threads, in catalog order of
/// the returned reports. Failures of one scenario do not stop the others;
/// errors are rethrown after all workers finish.
std::vector<ScenarioReport> run_scenarios(const std::vector<std::string>& names, const std::filesystem::path& outdir,
                                          unsigned workers);

}  // namespace satnls
