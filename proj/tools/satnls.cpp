// satnls command-line driver: runs configs and catalog scenarios, tabulates
// weighted norms and fits decay bounds to recorded series.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "satnls/config.hpp"
#include "satnls/diagnostics.hpp"
#include "satnls/error.hpp"
#include "satnls/integrators.hpp"
#include "satnls/rnp_spaces.hpp"
#include "satnls/scenarios.hpp"
#include "satnls/series.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitExpectation = 4;

// Errors raised while reading user input map to the parse exit code.
bool is_input_error(satnls::ErrorCode code) {
  using satnls::ErrorCode;
  switch (code) {
    case ErrorCode::MissingKey:
    case ErrorCode::TypeError:
    case ErrorCode::UnknownKey:
    case ErrorCode::ValidationError:
    case ErrorCode::UnknownScenario:
      return true;
    default:
      return false;
  }
}

fs::path output_root(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("SATNLS_OUTPUT_DIR"); env && *env) return env;
  return fs::current_path();
}

fs::path resolve(const fs::path& root, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : root / path;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void write_json(const json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  if (const fs::path parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
  std::ofstream os(path);
  if (!os) throw satnls::Error(satnls::ErrorCode::IoError, "cannot write " + path);
  os << j.dump(2) << '\n';
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw satnls::Error(satnls::ErrorCode::TypeError, "--n-list: '" + item + "' is not an integer");
    }
  }
  if (out.empty()) throw satnls::Error(satnls::ErrorCode::TypeError, "--n-list is empty");
  return out;
}

// Fields shared by `run` and `report`.
json summary_report(const satnls::DiagSeries& series, int dim, double t0, const satnls::ModelSpec* model) {
  json j;
  const double u0 = std::sqrt(series.mass_sq.front());
  const auto t_star = u0 > 0.0 ? satnls::extinction_time(series, 1e-12 * u0) : std::optional<double>(series.times.front());
  j["extinction_time"] = optional_json(t_star);
  j["bound_form"] = std::string(satnls::to_string(satnls::bound_form_for(dim)));
  try {
    const auto p = satnls::fit_decay_constant(series, dim, t0);
    j["fitted_c"] = p.c;
    j["fit_t0"] = p.t0;
    j["fit_u_t0"] = p.u_t0;
  } catch (const satnls::Error&) {
    j["fitted_c"] = nullptr;
  }
  if (model) {
    j["a_priori_ok"] = satnls::a_priori_check(series, *model).ok;
    double worst = 0.0;
    for (double r : satnls::mass_balance_residual(series, *model)) worst = std::max(worst, std::abs(r));
    j["mass_residual_max"] = worst;
  } else {
    j["a_priori_ok"] = nullptr;
    j["mass_residual_max"] = nullptr;
  }
  j["cross_validation_sup"] = nullptr;
  return j;
}

int cmd_run(const std::string& config_path, const std::string& out_flag) {
  satnls::RunBundle bundle;
  try {
    bundle = satnls::parse_config(config_path);
  } catch (const satnls::Error& e) {
    std::cerr << "config error [" << satnls::to_string(e.code()) << "]: " << e.what() << '\n';
    return kExitParse;
  }
  const fs::path root = output_root(out_flag);
  const satnls::BuiltRun run_input = satnls::build(bundle);
  const satnls::RunResult result = satnls::run(run_input.model, run_input.solver, run_input.u0);

  const fs::path series_path = resolve(root, bundle.output.series_path);
  if (!series_path.parent_path().empty()) fs::create_directories(series_path.parent_path());
  satnls::write_series_csv(result.series, series_path);
  if (!bundle.output.snapshot_dir.empty()) {
    const fs::path snap_dir = resolve(root, bundle.output.snapshot_dir);
    fs::create_directories(snap_dir);
    for (std::size_t i = 0; i < result.snapshots.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "snapshot_%06zu.csv", i);
      satnls::write_field_csv(result.snapshots[i].u, snap_dir / name);
    }
  }
  json j = summary_report(result.series, bundle.grid.dim, 0.0, &run_input.model);
  j["scheme"] = std::string(satnls::to_string(bundle.solver.scheme));
  j["max_fixed_point_iterations"] = result.max_fixed_point_iterations;
  write_json(j, resolve(root, bundle.output.report_path).string());
  std::cout << "wrote " << series_path.string() << '\n';
  return 0;
}

int cmd_scenario(const std::string& name, const std::string& out_flag, unsigned jobs, bool list) {
  if (list) {
    for (const auto& s : satnls::catalog()) std::cout << s.name << "  " << s.description << '\n';
    return 0;
  }
  std::vector<std::string> names;
  if (name == "all") {
    for (const auto& s : satnls::catalog()) names.push_back(s.name);
  } else {
    names.push_back(satnls::find_scenario(name).name);
  }
  fs::path root = output_root(out_flag);
  const auto reports = satnls::run_scenarios(names, root, jobs == 0 ? std::thread::hardware_concurrency() : jobs);
  bool all_ok = true;
  for (const auto& r : reports) {
    std::cout << (r.passed() ? "PASS " : "FAIL ") << r.name << '\n';
    for (const auto& e : r.results) {
      if (!e.passed) {
        std::cout << "  failed " << e.expectation.name << " value="
                  << (e.value ? std::to_string(*e.value) : std::string("undefined"))
                  << " threshold=" << e.expectation.threshold << '\n';
      }
    }
    all_ok = all_ok && r.passed();
  }
  return all_ok ? 0 : kExitExpectation;
}

int cmd_norms(const std::string& input, const std::string& n_list, double half_width, const std::string& output) {
  const std::vector<int> ns = parse_int_list(n_list);
  const satnls::ComplexField f = satnls::read_field_csv(input, half_width);
  const double l1 = satnls::norm(f, satnls::NormKind::L1);
  json table = json::array();
  for (const int n : ns) {
    const double yn = satnls::rnp::yn_norm(f, n);
    table.push_back({{"n", n}, {"yn_norm", yn}, {"l1_norm", l1}, {"gap", yn - l1}});
  }
  write_json(table, output);
  return 0;
}

int cmd_fit(const std::string& series_path, int dim, double t0, const std::string& output) {
  const satnls::DiagSeries s = satnls::read_series_csv(series_path);
  const auto p = satnls::fit_decay_constant(s, dim, t0);
  json j{{"dim", p.dim},
         {"bound_form", std::string(satnls::to_string(satnls::bound_form_for(dim)))},
         {"c", p.c},
         {"u_t0", p.u_t0},
         {"t0", p.t0}};
  write_json(j, output);
  return 0;
}

int cmd_report(const std::string& series_path, int dim, double t0, const std::string& config_path,
               const std::string& output) {
  const satnls::DiagSeries s = satnls::read_series_csv(series_path);
  if (s.empty()) throw satnls::Error(satnls::ErrorCode::EmptySeries, series_path + " has no rows");
  std::optional<satnls::BuiltRun> built;
  if (!config_path.empty()) {
    try {
      built = satnls::build(satnls::parse_config(config_path));
    } catch (const satnls::Error& e) {
      std::cerr << "config error [" << satnls::to_string(e.code()) << "]: " << e.what() << '\n';
      return kExitParse;
    }
  }
  json j = summary_report(s, dim, t0, built ? &built->model : nullptr);
  j["series"] = series_path;
  write_json(j, output);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Damped nonlinear Schrodinger simulator with saturating absorption"};
  app.require_subcommand(1);

  std::string config_path, out_dir, scenario_name, input, n_list, series_path, output;
  unsigned jobs = 0;
  bool list = false;
  double half_width = 0.0;
  double t0 = 0.0;
  int dim = 1;

  auto* run = app.add_subcommand("run", "Integrate the model described by a config file");
  run->add_option("--config", config_path, "Config file")->required();
  run->add_option("--output-dir", out_dir, "Root for relative output paths");

  auto* scenario = app.add_subcommand("scenario", "Run a catalog scenario, or all of them");
  scenario->add_option("name", scenario_name, "Scenario name or 'all'");
  scenario->add_option("--output-dir", out_dir, "Directory receiving one folder per scenario");
  scenario->add_option("--jobs", jobs, "Worker threads for 'all' (0: hardware concurrency)");
  scenario->add_flag("--list", list, "List catalog entries");

  auto* norms = app.add_subcommand("norms", "Tabulate weighted Y_n norms of a sampled function");
  norms->add_option("--input", input, "Field CSV")->required();
  norms->add_option("--n-list", n_list, "Comma-separated n values")->required();
  norms->add_option("--half-width", half_width, "Half width of the sampling box")->required();
  norms->add_option("--output", output, "JSON output file (default stdout)");

  auto* fit = app.add_subcommand("fit", "Fit the decay-bound constant to a series CSV");
  fit->add_option("--series", series_path, "Series CSV")->required();
  fit->add_option("--dim", dim, "Spatial dimension")->required()->check(CLI::Range(1, 3));
  fit->add_option("--t0", t0, "Reference time");
  fit->add_option("--output", output, "JSON output file (default stdout)");

  auto* report = app.add_subcommand("report", "Summarize a series CSV as a JSON report");
  report->add_option("--series", series_path, "Series CSV")->required();
  report->add_option("--dim", dim, "Spatial dimension")->required()->check(CLI::Range(1, 3));
  report->add_option("--t0", t0, "Reference time for the fit");
  report->add_option("--config", config_path, "Config of the run, enables the model-based checks");
  report->add_option("--output", output, "JSON output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  try {
    if (*run) return cmd_run(config_path, out_dir);
    if (*scenario) {
      if (scenario_name.empty() && !list) {
        std::cerr << "scenario: name or --list required\n";
        return kExitParse;
      }
      return cmd_scenario(scenario_name, out_dir, jobs, list);
    }
    if (*norms) return cmd_norms(input, n_list, half_width, output);
    if (*fit) return cmd_fit(series_path, dim, t0, output);
    if (*report) return cmd_report(series_path, dim, t0, config_path, output);
  } catch (const satnls::Error& e) {
    std::cerr << "error [" << satnls::to_string(e.code()) << "]: " << e.what() << '\n';
    return is_input_error(e.code()) ? kExitParse : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
