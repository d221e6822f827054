#include <cmath>

#include "doctest.h"
#include "shiftspec/config.hpp"

using namespace shiftspec;

namespace {

const char* kMinimal = R"(
# two-state chain
[system]
alphabet = 2
incidence = 1 1
incidence = 1 1
q = 0.9 0.1
q = 0.5 0.5
observable = 1 1
observable = -1 -1

[run]
seed = 42
)";

}  // namespace

TEST_CASE("minimal config parses with defaults filled") {
  const RunConfig cfg = parse_config(kMinimal);
  CHECK(cfg.alphabet == 2);
  CHECK(cfg.seed == 42);
  CHECK(cfg.n == 10000);
  CHECK(cfg.samples == 1000);
  CHECK(cfg.kernel_name == "fejer");
  CHECK(cfg.x_points == 513);
  CHECK(cfg.deltas.size() == 4);

  const SymbolicSystem sys = cfg.build_system();
  CHECK(sys.d == 2);
  CHECK(std::abs(sys.stationary[0] - 5.0 / 6.0) <= 1e-13);
  const Observable obs = cfg.build_observable(sys);
  CHECK(obs.centered);
}

TEST_CASE("config with both q and potential is rejected") {
  const std::string text = std::string(kMinimal) + "\n[system]\npotential = 0 0\npotential = 0 0\n";
  try {
    parse_config(text);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::validation_error);
    CHECK(std::string(e.what()).find("exactly one") != std::string::npos);
  }
}

TEST_CASE("non-stochastic q row is rejected by name") {
  const char* text = R"(
[system]
alphabet = 2
incidence = 1 1
incidence = 1 1
q = 0.9 0.3
q = 0.5 0.5
observable = 1 0
observable = 0 0
[run]
seed = 1
)";
  try {
    parse_config(text);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::validation_error);
    CHECK(std::string(e.what()).find("row 0") != std::string::npos);
  }
}

TEST_CASE("missing seed is rejected") {
  const char* text = R"(
[system]
alphabet = 1
incidence = 1
q = 1
observable = 0
)";
  try {
    parse_config(text);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::validation_error);
    CHECK(std::string(e.what()).find("seed") != std::string::npos);
  }
}

TEST_CASE("parse errors carry line numbers") {
  const char* text = "[system]\nalphabet = 2\nbogus_key = 3\n";
  try {
    parse_config(text);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parse_error);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }

  try {
    parse_config("[system]\nalphabet = two\n");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parse_error);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("potential-based config builds a Gibbs system") {
  const char* text = R"(
[system]
alphabet = 2
incidence = 1 1
incidence = 1 0
potential = 0 0
potential = 0 0
observable = 1 0.5
observable = 0 0
[run]
seed = 9
)";
  const RunConfig cfg = parse_config(text);
  const SymbolicSystem sys = cfg.build_system();
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  CHECK(std::abs(sys.kernel(0, 0) - 1.0 / golden) <= 1e-12);
}
