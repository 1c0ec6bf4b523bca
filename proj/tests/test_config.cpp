#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "satnls/config.hpp"
#include "satnls/error.hpp"
#include "test_util.hpp"

using namespace satnls;

namespace {

const std::string kBase = R"(
[grid]
dim = 1
half_width = 6
points = 64

[model]
mu = 1
u0.kind = gaussian
u0.amp_re = 1
u0.width = 1

[solver]
scheme = strang
dt = 1e-3
t_end = 0.5
)";

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

std::string error_message(const std::string& text) {
  try {
    (void)parse_config_text(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("shipped example configs parse and build") {
  for (const char* name : {"example.conf", "bangbang.conf"}) {
    const RunBundle b = parse_config(std::string(SATNLS_SOURCE_DIR) + "/configs/" + name);
    CHECK(b.grid.dim == 1);
    CHECK(b.mu == 1.0);
    const BuiltRun run = build(b);
    CHECK(run.u0.size() == 512);
  }
  const RunBundle b = parse_config(std::string(SATNLS_SOURCE_DIR) + "/configs/bangbang.conf");
  CHECK(b.forcing.kind == ForcingSpec::Kind::BangBangCapped);
  CHECK(b.solver.t_end == 4.0);
}

TEST_CASE("minimal config fills defaults") {
  const RunBundle b = parse_config_text(kBase);
  CHECK(b.forcing.kind == ForcingSpec::Kind::Zero);
  CHECK(b.solver.scheme == Scheme::Strang);
  CHECK(b.output.series_path == "series.csv");
  CHECK(b.u0.kind == ShapeSpec::Kind::Gaussian);
}

TEST_CASE("missing solver.dt names the key") {
  CHECK_THROWS_WITH_CODE(parse_config_text(replace(kBase, "dt = 1e-3\n", "")), ErrorCode::MissingKey);
  CHECK(error_message(replace(kBase, "dt = 1e-3\n", "")).find("solver.dt") != std::string::npos);
  CHECK_THROWS_WITH_CODE(parse_config(std::string(SATNLS_SOURCE_DIR) + "/tests/data/missing_dt.conf"),
                         ErrorCode::MissingKey);
}

TEST_CASE("validation errors") {
  CHECK_THROWS_WITH_CODE(parse_config_text(replace(kBase, "mu = 1", "mu = -1")), ErrorCode::ValidationError);
  const std::string two_d = replace(kBase, "dim = 1", "dim = 2");
  CHECK_NOTHROW(parse_config_text(two_d + "[model]\npotential.beta = 1\n"));
  CHECK_THROWS_WITH_CODE(parse_config_text(two_d + "[model]\npotential.beta = 0\n"), ErrorCode::ValidationError);
  CHECK_THROWS_WITH_CODE(parse_config_text(two_d), ErrorCode::ValidationError);
  CHECK_THROWS_WITH_CODE(parse_config_text(replace(kBase, "points = 64", "points = 4")), ErrorCode::ValidationError);
  CHECK_THROWS_WITH_CODE(parse_config_text(replace(kBase, "dt = 1e-3", "dt = -1")), ErrorCode::ValidationError);
  CHECK_THROWS_WITH_CODE(parse_config_text(kBase + "[solver]\ndt = 2e-3\n"), ErrorCode::ValidationError);
}

TEST_CASE("unknown keys and type errors") {
  CHECK_THROWS_WITH_CODE(parse_config_text(kBase + "[solver]\nstep_size = 1\n"), ErrorCode::UnknownKey);
  CHECK_THROWS_WITH_CODE(parse_config_text(replace(kBase, "dt = 1e-3", "dt = fast")), ErrorCode::TypeError);
  CHECK_THROWS_WITH_CODE(parse_config_text(replace(kBase, "points = 64", "points = 64.5")), ErrorCode::TypeError);
  CHECK_THROWS_WITH_CODE(parse_config_text(replace(kBase, "scheme = strang", "scheme = euler")), ErrorCode::TypeError);
  CHECK_THROWS_WITH_CODE(parse_config_text(kBase + "[solver\n"), ErrorCode::TypeError);
  CHECK_THROWS_WITH_CODE(parse_config_text(kBase + "[solver]\njust words\n"), ErrorCode::TypeError);
}

TEST_CASE("emit and parse round trip") {
  RunBundle b = parse_config(std::string(SATNLS_SOURCE_DIR) + "/configs/bangbang.conf");
  b.v1 = PotentialTerm::well(2.0, 1.5);
  b.v2 = PotentialTerm::inverse_power(1.0 / 3.0, 0.25, 2.0);
  b.u0.amp = Complex(0.1, -0.7);
  b.u0.kx = 0.3;
  b.solver.eps = 1e-7;
  b.solver.zero_tol = 1.2345678901234567e-13;
  b.output.snapshot_dir = "snap dir";
  const RunBundle back = parse_config_text(emit_config(b));
  CHECK(back == b);
  CHECK(emit_config(back) == emit_config(b));

  const RunBundle plain = parse_config_text(kBase);
  CHECK(parse_config_text(emit_config(plain)) == plain);
}
