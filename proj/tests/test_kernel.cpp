#include <cmath>
#include <numbers>

#include "doctest.h"
#include "shiftspec/kernel.hpp"
#include "shiftspec/presets.hpp"

using namespace shiftspec;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("sine_integral matches reference values on both branches") {
  CHECK(std::abs(sine_integral(1.0) - 0.94608307036718301) <= 1e-13);
  CHECK(std::abs(sine_integral(2.0) - 1.60541297680269485) <= 1e-13);
  CHECK(std::abs(sine_integral(kPi) - 1.85193705198246617) <= 1e-13);
  CHECK(std::abs(sine_integral(10.0) - 1.65834759421887405) <= 1e-13);
  CHECK(sine_integral(-2.5) == -sine_integral(2.5));
  CHECK(sine_integral(0.0) == 0.0);
  // branch seam
  CHECK(std::abs(sine_integral(2.0 + 1e-12) - sine_integral(2.0)) <= 1e-11);
}

TEST_CASE("fejer kernel values") {
  const SmoothingKernel k = fejer_kernel();
  CHECK(k.f(0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(k.fhat(0.5) == 0.5);
  CHECK(k.fhat(1.5) == 0.0);
  CHECK(std::abs(k.f(kPi) - 4.0 / (kPi * kPi)) <= 1e-14);
  CHECK(k.mass == doctest::Approx(2.0 * kPi));
  for (double x = -30.0; x <= 30.0; x += 0.37) {
    CHECK(k.f(x) >= 0.0);
    CHECK(k.f(x) == k.f(-x));
  }
}

TEST_CASE("fejer primitive agrees with direct quadrature of f") {
  const SmoothingKernel k = fejer_kernel();
  for (const double upper : {0.5, 2.0, 5.0, 17.3}) {
    const QuadratureGrid g = simpson_grid(32769, 0.0, upper);
    double direct = 0.0;
    for (size_t i = 0; i < g.nodes.size(); ++i) direct += g.weights[i] * k.f(g.nodes[i]);
    CHECK(std::abs(k.primitive(upper) - direct) <= 1e-10);
  }
  // tails: mass_tail decays like 1/u and window + 2*tail = mass
  for (const double u : {1.0, 10.0, 100.0}) {
    CHECK(k.mass_tail(u) > 0.0);
    CHECK(k.mass_tail(u) <= 4.0 / u + 1e-12);
    CHECK(std::abs(k.mass_window(u) + 2.0 * k.mass_tail(u) - k.mass) <= 1e-12);
  }
}

TEST_CASE("simpson grid sums its weights to the interval length") {
  const QuadratureGrid g = simpson_grid(4097, -1.0, 1.0);
  double sum = 0.0;
  for (double w : g.weights) sum += w;
  CHECK(std::abs(sum - 2.0) <= 1e-12);
  CHECK(g.nodes.size() == 4097);
  CHECK_THROWS_AS(simpson_grid(4096, -1.0, 1.0), Error);
}

TEST_CASE("expected_kernel_density matches one-step enumeration") {
  const SmoothingKernel kern = fejer_kernel();
  for (const Preset& p : nonlattice_presets()) {
    CAPTURE(p.name);
    for (const double x : {0.0, 0.4}) {
      double direct = 0.0;
      for (int i = 0; i < p.sys.d; ++i)
        for (int j = 0; j < p.sys.d; ++j)
          if (p.sys.incidence(i, j))
            direct += p.sys.stationary[i] * p.sys.kernel(i, j) *
                      kern.f(p.obs.values(i, j) - x);
      CHECK(std::abs(expected_kernel_density(p.sys, p.obs, kern, 1, x) - direct) <= 1e-8);
    }
  }
}

TEST_CASE("expected_kernel_density decays far from the bulk and stays nonnegative") {
  const Preset p = preset_iid3();
  const SmoothingKernel kern = fejer_kernel();
  CHECK(expected_kernel_density(p.sys, p.obs, kern, 10, 1e6) <= 1e-8);
  for (const double x : {0.0, 1.0, 3.0})
    CHECK(expected_kernel_density(p.sys, p.obs, kern, 64, x) >= -1e-10);
}

TEST_CASE("expected_kernel_density is stable under node doubling") {
  const Preset p = preset_two_state();
  const SmoothingKernel kern = fejer_kernel();
  const double coarse = expected_kernel_density(p.sys, p.obs, kern, 1024, 0.2, 4097);
  const double fine = expected_kernel_density(p.sys, p.obs, kern, 1024, 0.2, 8193);
  CHECK(std::abs(coarse - fine) <= 1e-8);
}

TEST_CASE("iid reduction of the density matches the scalar characteristic function route") {
  const Preset p = preset_iid3();
  const SmoothingKernel kern = fejer_kernel();
  const long n = 32;
  const double x = 0.3;
  const QuadratureGrid g = simpson_grid(kDefaultQuadPoints, -1.0, 1.0);
  Complex scalar = 0.0;
  for (size_t j = 0; j < g.nodes.size(); ++j) {
    const double t = g.nodes[j];
    Complex cf = 0.0;
    for (int s = 0; s < p.sys.d; ++s) {
      const double phi = p.obs.values(s, 0);
      cf += p.sys.stationary[s] * Complex(std::cos(t * phi), std::sin(t * phi));
    }
    Complex power(1.0, 0.0);
    for (long k = 0; k < n; ++k) power *= cf;
    scalar += g.weights[j] * kern.fhat(t) * power * Complex(std::cos(-t * x), std::sin(-t * x));
  }
  CHECK(std::abs(expected_kernel_density(p.sys, p.obs, kern, n, x) - scalar.real()) <= 1e-10);
}

TEST_CASE("lambda_l1_norm basics") {
  const Preset p = preset_golden_mean();
  const double delta = 0.2;
  CHECK(std::abs(lambda_l1_norm(p.sys, p.obs, 0, delta) - 2.0 * delta) <= 1e-12);
  double prev = lambda_l1_norm(p.sys, p.obs, 1, delta);
  for (const long n : {4L, 16L, 64L}) {
    const double cur = lambda_l1_norm(p.sys, p.obs, n, delta);
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
}

TEST_CASE("potential_kernel_sum basics") {
  const Preset p = preset_golden_mean();
  const SmoothingKernel kern = fejer_kernel();

  const PotentialKernelSum zero = potential_kernel_sum(p.sys, p.obs, kern, 0.0, 50);
  CHECK(zero.value == 0.0);

  const PotentialKernelSum one = potential_kernel_sum(p.sys, p.obs, kern, 0.5, 200);
  double prev = 0.0;
  for (int n = 1; n <= 200; ++n) {
    const double part = one.partial(n);
    CHECK(part >= prev);  // absolute values accumulate
    prev = part;
  }
  CHECK(one.value == doctest::Approx(one.partial(200)));
  CHECK(one.max_term_beyond(150) <= one.max_term_beyond(50) + 1e-15);
}

TEST_CASE("potential kernel multi-offset sweep matches single runs") {
  const Preset p = preset_golden_mean();
  const SmoothingKernel kern = fejer_kernel();
  const std::vector<double> ys = {0.2, 0.7};
  const auto both = potential_kernel_sums(p.sys, p.obs, kern, ys, 60);
  for (size_t i = 0; i < ys.size(); ++i) {
    const PotentialKernelSum single = potential_kernel_sum(p.sys, p.obs, kern, ys[i], 60);
    CHECK(std::abs(both[i].value - single.value) <= 1e-12);
  }
}

TEST_CASE("reported integrals are stable under node doubling") {
  const Preset p = preset_golden_mean();
  const SmoothingKernel kern = fejer_kernel();

  const PotentialKernelSum coarse = potential_kernel_sum(p.sys, p.obs, kern, 0.4, 100, 4097);
  const PotentialKernelSum fine = potential_kernel_sum(p.sys, p.obs, kern, 0.4, 100, 8193);
  CHECK(std::abs(coarse.value - fine.value) <= 1e-8);

  const double l1_coarse = lambda_l1_norm(p.sys, p.obs, 256, 0.2, 4097);
  const double l1_fine = lambda_l1_norm(p.sys, p.obs, 256, 0.2, 8193);
  CHECK(std::abs(l1_coarse - l1_fine) <= 1e-8);
}
