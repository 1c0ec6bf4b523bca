#include "satnls/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "satnls/error.hpp"

namespace satnls {

ComplexField ShapeSpec::sample(const Grid& grid) const {
  ComplexField out(grid);
  if (kind == Kind::Zero) return out;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto x = grid.position(k);
    const double r = grid.radius(k);
    double envelope = 0.0;
    switch (kind) {
      case Kind::Zero: break;
      case Kind::Gaussian: envelope = std::exp(-r * r / (2.0 * width * width)); break;
      case Kind::CosBump: envelope = r < width ? std::cos(0.5 * M_PI * r / width) : 0.0; break;
      case Kind::Uniform: envelope = 1.0; break;
    }
    out[k] = amp * envelope * std::polar(1.0, kx * x[0]);
  }
  return out;
}

bool operator==(const PotentialTerm& a, const PotentialTerm& b) {
  return a.kind == b.kind && a.value == b.value && a.radius == b.radius && a.alpha == b.alpha &&
         a.samples == b.samples;
}

bool operator==(const TimeProfile& a, const TimeProfile& b) {
  return a.kind == b.kind && a.a0 == b.a0 && a.a1 == b.a1 && a.rate == b.rate && a.t_switch == b.t_switch;
}

bool operator==(const SolverConfig& a, const SolverConfig& b) {
  return a.scheme == b.scheme && a.dt == b.dt && a.eps == b.eps && a.t_end == b.t_end && a.fp_tol == b.fp_tol &&
         a.fp_max_iter == b.fp_max_iter && a.linsolve_tol == b.linsolve_tol &&
         a.snapshot_stride == b.snapshot_stride && a.boundary_fail_threshold == b.boundary_fail_threshold &&
         a.boundary_shell == b.boundary_shell && a.zero_tol == b.zero_tol;
}

bool operator==(const RunBundle& a, const RunBundle& b) {
  return a.grid == b.grid && a.mu == b.mu && a.v1 == b.v1 && a.v2 == b.v2 && a.beta == b.beta &&
         a.forcing == b.forcing && a.u0 == b.u0 && a.solver == b.solver && a.output == b.output;
}

BuiltRun build(const RunBundle& bundle) {
  const Grid grid = make_grid(bundle.grid.dim, bundle.grid.half_width, bundle.grid.points);
  ForcingSpec forcing = ForcingSpec::zero(grid);
  const auto& fp = bundle.forcing;
  switch (fp.kind) {
    case ForcingSpec::Kind::Zero: break;
    case ForcingSpec::Kind::Separable: forcing = ForcingSpec::separable(fp.profile.sample(grid), fp.amp); break;
    case ForcingSpec::Kind::BangBangCapped:
      forcing = ForcingSpec::bangbang_capped(fp.profile.sample(grid), fp.amp, fp.t0);
      break;
    case ForcingSpec::Kind::RampToZero:
      forcing = ForcingSpec::ramp_to_zero(fp.profile.sample(grid), fp.eps_star, fp.t0);
      break;
  }
  PotentialSpec potential{bundle.v1, bundle.v2, bundle.beta, 0.0};
  ModelSpec model = make_model(grid, std::move(potential), bundle.mu, std::move(forcing));
  ComplexField u0 = bundle.u0.sample(grid);
  bundle.solver.validate();
  return BuiltRun{std::move(model), std::move(u0), bundle.solver};
}

namespace {

template <typename E, std::size_t N>
using NameTable = std::array<std::pair<E, const char*>, N>;

constexpr NameTable<PotentialTerm::Kind, 4> kPotentialKinds{{{PotentialTerm::Kind::Zero, "zero"},
                                                            {PotentialTerm::Kind::Constant, "constant"},
                                                            {PotentialTerm::Kind::Well, "well"},
                                                            {PotentialTerm::Kind::InversePower, "inverse_power"}}};
constexpr NameTable<TimeProfile::Kind, 3> kProfileKinds{{{TimeProfile::Kind::Constant, "constant"},
                                                        {TimeProfile::Kind::ExpDecay, "exp_decay"},
                                                        {TimeProfile::Kind::Step, "step"}}};
constexpr NameTable<ShapeSpec::Kind, 4> kShapeKinds{{{ShapeSpec::Kind::Zero, "zero"},
                                                    {ShapeSpec::Kind::Gaussian, "gaussian"},
                                                    {ShapeSpec::Kind::CosBump, "cos_bump"},
                                                    {ShapeSpec::Kind::Uniform, "uniform"}}};
constexpr NameTable<ForcingSpec::Kind, 4> kForcingKinds{{{ForcingSpec::Kind::Zero, "zero"},
                                                        {ForcingSpec::Kind::Separable, "separable"},
                                                        {ForcingSpec::Kind::BangBangCapped, "bangbang_capped"},
                                                        {ForcingSpec::Kind::RampToZero, "ramp_to_zero"}}};
constexpr NameTable<Scheme, 2> kSchemes{{{Scheme::Strang, "strang"}, {Scheme::BackwardEulerReg, "backward_euler_reg"}}};

template <typename E, std::size_t N>
const char* name_of(const NameTable<E, N>& table, E value) {
  for (const auto& [e, name] : table) {
    if (e == value) return name;
  }
  return "?";
}

std::set<std::string> known_keys() {
  std::set<std::string> keys{"grid.dim",     "grid.half_width",   "grid.points",        "model.mu",
                             "model.potential.beta", "model.forcing.kind", "model.forcing.t0",
                             "model.forcing.eps_star", "output.series_path", "output.report_path",
                             "output.snapshot_dir"};
  for (const char* v : {"v1", "v2"}) {
    for (const char* f : {"kind", "value", "radius", "alpha"}) {
      keys.insert(std::string("model.potential.") + v + "." + f);
    }
  }
  for (const char* f : {"kind", "a0", "a1", "rate", "t_switch"}) keys.insert(std::string("model.forcing.amp.") + f);
  for (const char* prefix : {"model.forcing.profile.", "model.u0."}) {
    for (const char* f : {"kind", "amp_re", "amp_im", "width", "kx"}) keys.insert(std::string(prefix) + f);
  }
  for (const char* f : {"scheme", "dt", "eps", "t_end", "fp_tol", "fp_max_iter", "linsolve_tol", "snapshot_stride",
                        "boundary_fail_threshold", "boundary_shell", "zero_tol"}) {
    keys.insert(std::string("solver.") + f);
  }
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class Document {
 public:
  explicit Document(std::map<std::string, std::string> values) : values_(std::move(values)) {}

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  const std::string& raw(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw Error(ErrorCode::MissingKey, key);
    return it->second;
  }

  double real(const std::string& key) const {
    const std::string& s = raw(key);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
      throw Error(ErrorCode::TypeError, key + ": expected a real number, got '" + s + "'");
    }
    return v;
  }
  double real(const std::string& key, double fallback) const { return has(key) ? real(key) : fallback; }

  int integer(const std::string& key) const {
    const std::string& s = raw(key);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw Error(ErrorCode::TypeError, key + ": expected an integer, got '" + s + "'");
    }
    return v;
  }
  int integer(const std::string& key, int fallback) const { return has(key) ? integer(key) : fallback; }

  std::string text(const std::string& key, const std::string& fallback) const {
    return has(key) ? raw(key) : fallback;
  }

  template <typename E, std::size_t N>
  E choice(const std::string& key, const NameTable<E, N>& table) const {
    const std::string& s = raw(key);
    for (const auto& [e, name] : table) {
      if (s == name) return e;
    }
    throw Error(ErrorCode::TypeError, key + ": unknown value '" + s + "'");
  }
  template <typename E, std::size_t N>
  E choice(const std::string& key, const NameTable<E, N>& table, E fallback) const {
    return has(key) ? choice(key, table) : fallback;
  }

 private:
  std::map<std::string, std::string> values_;
};

PotentialTerm read_potential(const Document& doc, const std::string& prefix) {
  PotentialTerm t;
  t.kind = doc.choice(prefix + "kind", kPotentialKinds, PotentialTerm::Kind::Zero);
  const bool needs_value = t.kind != PotentialTerm::Kind::Zero;
  const bool needs_radius = t.kind == PotentialTerm::Kind::Well || t.kind == PotentialTerm::Kind::InversePower;
  const bool needs_alpha = t.kind == PotentialTerm::Kind::InversePower;
  t.value = needs_value ? doc.real(prefix + "value") : doc.real(prefix + "value", 0.0);
  t.radius = needs_radius ? doc.real(prefix + "radius") : doc.real(prefix + "radius", 0.0);
  t.alpha = needs_alpha ? doc.real(prefix + "alpha") : doc.real(prefix + "alpha", 0.0);
  return t;
}

ShapeSpec read_shape(const Document& doc, const std::string& prefix, bool required) {
  ShapeSpec s;
  s.kind = required ? doc.choice(prefix + "kind", kShapeKinds) : doc.choice(prefix + "kind", kShapeKinds, s.kind);
  const bool active = s.kind != ShapeSpec::Kind::Zero;
  const bool needs_width = s.kind == ShapeSpec::Kind::Gaussian || s.kind == ShapeSpec::Kind::CosBump;
  s.amp = Complex(active ? doc.real(prefix + "amp_re") : doc.real(prefix + "amp_re", 1.0),
                  doc.real(prefix + "amp_im", 0.0));
  s.width = needs_width ? doc.real(prefix + "width") : doc.real(prefix + "width", 1.0);
  s.kx = doc.real(prefix + "kx", 0.0);
  if (needs_width && !(s.width > 0.0)) throw Error(ErrorCode::ValidationError, prefix + "width must be positive");
  return s;
}

TimeProfile read_time_profile(const Document& doc, const std::string& prefix) {
  TimeProfile p;
  p.kind = doc.choice(prefix + "kind", kProfileKinds);
  p.a0 = doc.real(prefix + "a0");
  p.rate = p.kind == TimeProfile::Kind::ExpDecay ? doc.real(prefix + "rate") : doc.real(prefix + "rate", 0.0);
  const bool step = p.kind == TimeProfile::Kind::Step;
  p.a1 = step ? doc.real(prefix + "a1") : doc.real(prefix + "a1", 0.0);
  p.t_switch = step ? doc.real(prefix + "t_switch") : doc.real(prefix + "t_switch", 0.0);
  return p;
}

RunBundle read_bundle(const Document& doc) {
  RunBundle b;
  b.grid.dim = doc.integer("grid.dim");
  b.grid.half_width = doc.real("grid.half_width");
  b.grid.points = doc.integer("grid.points");
  try {
    (void)make_grid(b.grid.dim, b.grid.half_width, b.grid.points);
  } catch (const Error& e) {
    throw Error(ErrorCode::ValidationError, std::string("grid: ") + e.what());
  }

  b.mu = doc.real("model.mu");
  if (b.mu < 0.0) throw Error(ErrorCode::ValidationError, "model.mu: damping strength must be positive");
  b.beta = doc.real("model.potential.beta", 0.0);
  b.v1 = read_potential(doc, "model.potential.v1.");
  b.v2 = read_potential(doc, "model.potential.v2.");
  try {
    (void)validate_potential(PotentialSpec{b.v1, b.v2, b.beta, 0.0}, b.grid.dim);
  } catch (const Error& e) {
    throw Error(ErrorCode::ValidationError, std::string("model.potential.beta: ") + e.what());
  }

  auto& f = b.forcing;
  f.kind = doc.choice("model.forcing.kind", kForcingKinds, ForcingSpec::Kind::Zero);
  const bool forced = f.kind != ForcingSpec::Kind::Zero;
  const bool uses_amp = f.kind == ForcingSpec::Kind::Separable || f.kind == ForcingSpec::Kind::BangBangCapped;
  const bool uses_t0 = f.kind == ForcingSpec::Kind::BangBangCapped || f.kind == ForcingSpec::Kind::RampToZero;
  if (uses_amp) f.amp = read_time_profile(doc, "model.forcing.amp.");
  else if (doc.has("model.forcing.amp.kind")) f.amp = read_time_profile(doc, "model.forcing.amp.");
  f.profile = read_shape(doc, "model.forcing.profile.", forced);
  f.t0 = uses_t0 ? doc.real("model.forcing.t0") : doc.real("model.forcing.t0", 0.0);
  f.eps_star = f.kind == ForcingSpec::Kind::RampToZero ? doc.real("model.forcing.eps_star")
                                                        : doc.real("model.forcing.eps_star", 0.0);
  b.u0 = read_shape(doc, "model.u0.", true);

  auto& s = b.solver;
  s.scheme = doc.choice("solver.scheme", kSchemes);
  s.dt = doc.real("solver.dt");
  s.t_end = doc.real("solver.t_end");
  s.eps = doc.real("solver.eps", s.eps);
  s.fp_tol = doc.real("solver.fp_tol", s.fp_tol);
  s.fp_max_iter = doc.integer("solver.fp_max_iter", s.fp_max_iter);
  s.linsolve_tol = doc.real("solver.linsolve_tol", s.linsolve_tol);
  s.snapshot_stride = doc.integer("solver.snapshot_stride", s.snapshot_stride);
  s.boundary_fail_threshold = doc.real("solver.boundary_fail_threshold", s.boundary_fail_threshold);
  s.boundary_shell = doc.integer("solver.boundary_shell", s.boundary_shell);
  s.zero_tol = doc.real("solver.zero_tol", s.zero_tol);
  try {
    s.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::ValidationError, std::string("solver: ") + e.what());
  }

  b.output.series_path = doc.text("output.series_path", b.output.series_path);
  b.output.report_path = doc.text("output.report_path", b.output.report_path);
  b.output.snapshot_dir = doc.text("output.snapshot_dir", b.output.snapshot_dir);

  try {
    (void)build(b);
  } catch (const Error& e) {
    throw Error(ErrorCode::ValidationError, std::string("model: ") + e.what());
  }
  return b;
}

std::string fmt(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

RunBundle parse_config_text(const std::string& text) {
  static const std::set<std::string> known = known_keys();
  std::map<std::string, std::string> values;
  std::istringstream is(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw Error(ErrorCode::TypeError, "line " + std::to_string(line_no) + ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::TypeError, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = (section.empty() ? "" : section + ".") + trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (!known.count(key)) throw Error(ErrorCode::UnknownKey, key);
    if (values.count(key)) throw Error(ErrorCode::ValidationError, key + ": duplicate key");
    values[key] = value;
  }
  return read_bundle(Document(std::move(values)));
}

RunBundle parse_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::IoError, "cannot read config " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str());
}

std::string emit_config(const RunBundle& b) {
  std::ostringstream os;
  auto kv = [&os](const std::string& k, const std::string& v) { os << k << " = " << v << '\n'; };
  os << "[grid]\n";
  kv("dim", std::to_string(b.grid.dim));
  kv("half_width", fmt(b.grid.half_width));
  kv("points", std::to_string(b.grid.points));

  os << "\n[model]\n";
  kv("mu", fmt(b.mu));
  kv("potential.beta", fmt(b.beta));
  for (const auto& [name, term] : {std::pair{"v1", &b.v1}, std::pair{"v2", &b.v2}}) {
    if (term->kind == PotentialTerm::Kind::Samples) {
      throw Error(ErrorCode::ValidationError, "sampled potentials cannot be written to a config file");
    }
    const std::string p = std::string("potential.") + name + ".";
    kv(p + "kind", name_of(kPotentialKinds, term->kind));
    kv(p + "value", fmt(term->value));
    kv(p + "radius", fmt(term->radius));
    kv(p + "alpha", fmt(term->alpha));
  }
  kv("forcing.kind", name_of(kForcingKinds, b.forcing.kind));
  kv("forcing.t0", fmt(b.forcing.t0));
  kv("forcing.eps_star", fmt(b.forcing.eps_star));
  kv("forcing.amp.kind", name_of(kProfileKinds, b.forcing.amp.kind));
  kv("forcing.amp.a0", fmt(b.forcing.amp.a0));
  kv("forcing.amp.a1", fmt(b.forcing.amp.a1));
  kv("forcing.amp.rate", fmt(b.forcing.amp.rate));
  kv("forcing.amp.t_switch", fmt(b.forcing.amp.t_switch));
  for (const auto& [prefix, shape] : {std::pair{"forcing.profile.", &b.forcing.profile}, std::pair{"u0.", &b.u0}}) {
    kv(std::string(prefix) + "kind", name_of(kShapeKinds, shape->kind));
    kv(std::string(prefix) + "amp_re", fmt(shape->amp.real()));
    kv(std::string(prefix) + "amp_im", fmt(shape->amp.imag()));
    kv(std::string(prefix) + "width", fmt(shape->width));
    kv(std::string(prefix) + "kx", fmt(shape->kx));
  }

  const auto& s = b.solver;
  os << "\n[solver]\n";
  kv("scheme", name_of(kSchemes, s.scheme));
  kv("dt", fmt(s.dt));
  kv("eps", fmt(s.eps));
  kv("t_end", fmt(s.t_end));
  kv("fp_tol", fmt(s.fp_tol));
  kv("fp_max_iter", std::to_string(s.fp_max_iter));
  kv("linsolve_tol", fmt(s.linsolve_tol));
  kv("snapshot_stride", std::to_string(s.snapshot_stride));
  kv("boundary_fail_threshold", fmt(s.boundary_fail_threshold));
  kv("boundary_shell", std::to_string(s.boundary_shell));
  kv("zero_tol", fmt(s.zero_tol));

  os << "\n[output]\n";
  kv("series_path", '"' + b.output.series_path + '"');
  kv("report_path", '"' + b.output.report_path + '"');
  kv("snapshot_dir", '"' + b.output.snapshot_dir + '"');
  return os.str();
}

}  // namespace satnls
