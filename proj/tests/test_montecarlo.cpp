#include <cmath>

#include "doctest.h"
#include "shiftspec/montecarlo.hpp"
#include "shiftspec/presets.hpp"
#include "shiftspec/spectral.hpp"

using namespace shiftspec;

namespace {

SymbolicSystem one_state_system() {
  Mat q(1);
  q(0, 0) = 1.0;
  return make_system(Incidence::full(1), q);
}

}  // namespace

TEST_CASE("sample_path is reproducible bit for bit") {
  const Preset p = preset_two_state();
  const PathSample a = sample_path(p.sys, p.obs, 500, 42, 3);
  const PathSample b = sample_path(p.sys, p.obs, 500, 42, 3);
  CHECK(a.states == b.states);
  CHECK(a.increments == b.increments);
  CHECK(a.sums == b.sums);

  const PathSample c = sample_path(p.sys, p.obs, 500, 42, 4);
  CHECK(a.states != c.states);  // different stream, different path
}

TEST_CASE("sample_path respects the system structure") {
  const Preset p = preset_golden_mean();
  const PathSample path = sample_path(p.sys, p.obs, 2000, 9, 0);
  for (int k = 1; k <= path.n; ++k) {
    CHECK(p.sys.incidence(path.states[k - 1], path.states[k]) == 1);
    CHECK(path.increments[k - 1] == p.obs.values(path.states[k - 1], path.states[k]));
    CHECK(path.sums[k] == path.sums[k - 1] + path.increments[k - 1]);
  }
  CHECK(path.sums[0] == 0.0);
}

TEST_CASE("sample_final_sum equals the path terminal sum") {
  const Preset p = preset_iid3();
  const PathSample path = sample_path(p.sys, p.obs, 300, 5, 11);
  CHECK(sample_final_sum(p.sys, p.obs, 300, 5, 11) == path.sums[300]);
}

TEST_CASE("degenerate one-state system yields the zero walk") {
  const SymbolicSystem sys = one_state_system();
  const Observable obs = center_observable(sys, Mat(1, 3.0));
  const PathSample path = sample_path(sys, obs, 100, 1, 0);
  for (int k = 0; k <= 100; ++k) {
    CHECK(path.states[k] == 0);
    CHECK(path.sums[k] == 0.0);
  }
}

TEST_CASE("path mean sits inside the CLT band") {
  const Preset p = preset_two_state();
  const double v = variance(p.sys, p.obs).v_gk;
  const int n = 100000;
  const PathSample path = sample_path(p.sys, p.obs, n, 2024, 0);
  const double mean = path.sums[n] / n;
  CHECK(std::abs(mean) <= 5.0 * std::sqrt(v / n));
}

TEST_CASE("scaled_path divides by sqrt(n)") {
  const Preset p = preset_iid3();
  const PathSample path = sample_path(p.sys, p.obs, 400, 3, 0);
  const ScaledPath scaled = scaled_path(path);
  CHECK(scaled.values[0] == 0.0);
  CHECK(scaled.values[400] == doctest::Approx(path.sums[400] / 20.0));
}

TEST_CASE("local_time_field matches a naive recomputation") {
  const Preset p = preset_two_state();
  const SmoothingKernel kern = fejer_kernel();
  const PathSample path = sample_path(p.sys, p.obs, 100, 77, 0);
  const Vec grid = default_x_grid(1.0, 33);
  const LocalTimeField field = local_time_field(path, kern, grid);
  const double root = std::sqrt(100.0);
  for (size_t i = 0; i < grid.size(); ++i) {
    double naive = 0.0;
    for (int k = 1; k <= path.n; ++k) naive += kern.f(path.sums[k] - root * grid[i]);
    naive /= root;
    CHECK(std::abs(field.values[i] - naive) <= 1e-12);
    CHECK(field.values[i] >= 0.0);
  }
}

TEST_CASE("one-state local time is sqrt(n) at the origin") {
  const SymbolicSystem sys = one_state_system();
  const Observable obs = center_observable(sys, Mat(1, 1.0));
  const SmoothingKernel kern = fejer_kernel();
  const PathSample path = sample_path(sys, obs, 256, 0, 0);
  CHECK(local_time_at(path, kern, 0.0) == doctest::Approx(16.0).epsilon(1e-12));
}

TEST_CASE("local time mass is conserved for any path") {
  const SmoothingKernel kern = fejer_kernel();
  for (const Preset& p : nonlattice_presets()) {
    CAPTURE(p.name);
    const PathSample path = sample_path(p.sys, p.obs, 10000, 8, 1);
    const double mass = wide_trapezoid_mass(path, kern);
    CHECK(std::abs(mass / kern.mass - 1.0) <= 1e-3);
  }
}

TEST_CASE("occupation_fraction counts scaled sums") {
  const Preset p = preset_iid3();
  const PathSample path = sample_path(p.sys, p.obs, 5000, 21, 0);
  CHECK(occupation_fraction(path, -1e9, 1e9) == 1.0);

  // additivity over a split point no sum can hit exactly
  const double c = 0.1234567891234;
  const double whole = occupation_fraction(path, -2.0, 2.0);
  const double left = occupation_fraction(path, -2.0, c);
  const double right = occupation_fraction(path, c, 2.0);
  CHECK(left + right == whole);

  const SymbolicSystem sys = one_state_system();
  const Observable obs = center_observable(sys, Mat(1, 0.0));
  const PathSample zero = sample_path(sys, obs, 50, 0, 0);
  CHECK(occupation_fraction(zero, -0.5, 0.5) == 1.0);
}
