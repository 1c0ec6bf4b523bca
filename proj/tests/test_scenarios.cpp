#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "satnls/error.hpp"
#include "satnls/integrators.hpp"
#include "satnls/scenarios.hpp"
#include "test_util.hpp"

using namespace satnls;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

DiagSeries gradient_series(const std::vector<double>& h1, double dt) {
  DiagSeries s;
  for (std::size_t k = 0; k < h1.size(); ++k) {
    s.times.push_back(k * dt);
    s.mass_sq.push_back(1.0);
    s.l1.push_back(0.0);
    s.h1semi.push_back(h1[k]);
    s.sup_abs.push_back(0.0);
    s.forcing_work.push_back(0.0);
    s.boundary_frac.push_back(0.0);
  }
  return s;
}

}  // namespace

TEST_CASE("catalog names are unique and cover the experiment list") {
  const auto& cat = catalog();
  CHECK(cat.size() >= 9);
  std::set<std::string> names;
  for (const Scenario& s : cat) {
    CHECK(names.insert(s.name).second);
    CHECK_FALSE(s.expectations.empty());
    CHECK_NOTHROW(build(s.bundle));
  }
  for (const char* n : {"extinction_1d", "bangbang_1d", "instantaneous_1d", "exp_decay_2d", "algebraic_decay_3d",
                        "stabilization", "contraction_pair", "conservation_control", "potential_run"}) {
    CHECK(names.count(n) == 1);
  }
  CHECK(&find_scenario("extinction_1d") == &cat.front());
  CHECK_THROWS_WITH_CODE(find_scenario("no_such_scenario"), ErrorCode::UnknownScenario);
}

TEST_CASE("comparison operators") {
  CHECK(satisfies(Compare::LessEq, 1.0, 1.0));
  CHECK_FALSE(satisfies(Compare::Less, 1.0, 1.0));
  CHECK(satisfies(Compare::GreaterEq, 2.0, 1.0));
  CHECK_FALSE(satisfies(Compare::Greater, 0.0, 0.0));
}

TEST_CASE("h1_growth_check on synthetic series") {
  const Grid g = make_grid(1, 2.0, 32);
  const ModelSpec flat = make_model(g, {}, 1.0, ForcingSpec::zero(g));
  const H1GrowthResult shrinking = h1_growth_check(gradient_series({3.0, 2.0, 1.0, 0.0}, 0.1), flat);
  CHECK(shrinking.ok);
  CHECK(shrinking.flat_potential);
  CHECK(shrinking.max_violation == doctest::Approx(0.0));
  const H1GrowthResult growing = h1_growth_check(gradient_series({1.0, 1.5}, 0.1), flat);
  CHECK_FALSE(growing.ok);
  CHECK(growing.max_violation == doctest::Approx(0.5));

  PotentialSpec well{PotentialTerm::well(1.0, 1.0), {}, 0.0, 0.0};
  const ModelSpec bumpy = make_model(g, validate_potential(well, 1), 1.0, ForcingSpec::zero(g));
  // H1 norm sqrt(1 + h1^2) grows from sqrt(2) to sqrt(2) e over t = 1.
  const double target = std::sqrt(2.0 * std::exp(2.0) - 1.0);
  const H1GrowthResult fit = h1_growth_check(gradient_series({1.0, target}, 1.0), bumpy);
  CHECK_FALSE(fit.flat_potential);
  CHECK(fit.ok);
  CHECK(fit.fitted_c == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_WITH_CODE(h1_growth_check(DiagSeries{}, flat), ErrorCode::MissingDiagnostics);
  DiagSeries partial = gradient_series({1.0, 1.0}, 0.1);
  partial.h1semi.pop_back();
  CHECK_THROWS_WITH_CODE(h1_growth_check(partial, flat), ErrorCode::MissingDiagnostics);
}

TEST_CASE("h1_growth_check holds on a damped run") {
  const Scenario& s = find_scenario("extinction_1d");
  const BuiltRun built = build(s.bundle);
  SolverConfig c = built.solver;
  c.t_end = 0.2;
  const RunResult r = run(built.model, c, built.u0);
  CHECK(h1_growth_check(r.series, built.model).ok);
}

TEST_CASE("scenario runs are deterministic") {
  const fs::path root = fs::temp_directory_path() / "satnls_scenario_determinism";
  fs::remove_all(root);
  const ScenarioReport a = run_scenario("potential_run", root / "a");
  const ScenarioReport b = run_scenario("potential_run", root / "b");
  CHECK(a.passed());
  CHECK(a.to_json() == b.to_json());
  const std::string sa = slurp(root / "a" / "potential_run" / "series.csv");
  CHECK_FALSE(sa.empty());
  CHECK(sa == slurp(root / "b" / "potential_run" / "series.csv"));
  CHECK(fs::exists(root / "a" / "potential_run" / "report.json"));
  CHECK(a.to_json().at("scenario") == "potential_run");

  const auto both = run_scenarios({"potential_run", "contraction_pair"}, root / "c", 2);
  REQUIRE(both.size() == 2);
  CHECK(both[0].name == "potential_run");
  CHECK(both[0].to_json() == a.to_json());
  CHECK_THROWS_WITH_CODE(run_scenarios({"potential_run", "bogus"}, root / "d", 2), ErrorCode::UnknownScenario);
  fs::remove_all(root);
}
