#include <cmath>
#include <numbers>

#include "doctest.h"
#include "shiftspec/presets.hpp"
#include "shiftspec/rng.hpp"
#include "shiftspec/spectral.hpp"

using namespace shiftspec;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Complex classical_cf(const Preset& p, double t) {
  Complex c = 0.0;
  for (int x = 0; x < p.sys.d; ++x) {
    const double phi = p.obs.values(x, 0);
    c += p.sys.stationary[x] * Complex(std::cos(t * phi), std::sin(t * phi));
  }
  return c;
}

}  // namespace

TEST_CASE("char_operator at t = 0 is the transfer operator") {
  for (const Preset& p : nonlattice_presets()) {
    CAPTURE(p.name);
    const CharOperatorSample sample = char_operator(p.sys, p.obs, 0.0);
    const int d = p.sys.d;
    CVec ones(d, Complex(1.0, 0.0));
    const CVec fixed = matvec(sample.m, ones);
    for (int i = 0; i < d; ++i) {
      CHECK(std::abs(fixed[i] - 1.0) <= 1e-12);
      for (int j = 0; j < d; ++j) {
        CHECK(sample.m(i, j).imag() == 0.0);
        CHECK(sample.m(i, j).real() >= 0.0);
      }
    }
    // m(T^ g) = m(g) for an arbitrary test function
    CounterRng rng(7, 7);
    CVec g(d);
    for (auto& x : g) x = Complex(rng.next_double() - 0.5, 0.0);
    const Complex lhs = stationary_mean(p.sys.stationary, matvec(sample.m, g));
    const Complex rhs = stationary_mean(p.sys.stationary, g);
    CHECK(std::abs(lhs - rhs) <= 1e-13);
  }
}

TEST_CASE("char_operator requires a centered observable") {
  const Preset p = preset_iid3();
  Observable raw = p.obs;
  raw.centered = false;
  CHECK_THROWS_AS(char_operator(p.sys, raw, 0.1), Error);
}

TEST_CASE("iid systems make P(t) rank one with the classical CF as eigenvalue") {
  const Preset p = preset_iid3();
  const double t = 0.37;
  const CharOperatorSample sample = char_operator(p.sys, p.obs, t);
  for (int y = 1; y < p.sys.d; ++y)
    for (int x = 0; x < p.sys.d; ++x)
      CHECK(std::abs(sample.m(y, x) - sample.m(0, x)) <= 1e-15);

  const Complex expected = classical_cf(p, t);
  const CVec out = matvec(sample.m, CVec(p.sys.d, Complex(1.0, 0.0)));
  for (int y = 0; y < p.sys.d; ++y) CHECK(std::abs(out[y] - expected) <= 1e-14);
}

TEST_CASE("brute force characteristic function basics") {
  const Preset p = preset_two_state();
  CHECK(std::abs(brute_force_charfn(p.sys, p.obs, 5, 0.0) - 1.0) <= 1e-13);

  // one-step closed form
  const double t = 0.7;
  Complex direct = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      const double phase = t * p.obs.values(x, y);
      direct += p.sys.stationary[x] * p.sys.kernel(x, y) *
                Complex(std::cos(phase), std::sin(phase));
    }
  CHECK(std::abs(brute_force_charfn(p.sys, p.obs, 1, t) - direct) <= 1e-14);

  try {
    brute_force_charfn(preset_iid3().sys, preset_iid3().obs, 20, 0.1);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::too_large);
  }
}

TEST_CASE("operator powers match path enumeration") {
  for (const Preset& p : nonlattice_presets()) {
    CAPTURE(p.name);
    for (const int n : {1, 4, 10})
      for (const double t : {0.1, 0.7, 2.3}) {
        const Complex oracle = brute_force_charfn(p.sys, p.obs, n, t);
        const Complex fast = operator_charfn(p.sys, p.obs, n, t);
        CHECK(std::abs(oracle - fast) <= 1e-10);
      }
  }
}

TEST_CASE("dominant_eigen at t = 0 returns the exact fixed data") {
  for (const Preset& p : nonlattice_presets()) {
    CAPTURE(p.name);
    const EigenData eig = dominant_eigen(char_operator(p.sys, p.obs, 0.0), p.sys.stationary);
    CHECK(std::abs(eig.lambda - 1.0) <= 1e-12);
    for (int i = 0; i < p.sys.d; ++i) {
      CHECK(std::abs(eig.eta[i] - 1.0) <= 1e-12);
      CHECK(std::abs(eig.xi[i] - p.sys.stationary[i]) <= 1e-12);
    }
    CHECK(eig.gap_ratio < 1.0);
  }
}

TEST_CASE("dominant_eigen satisfies its residual and normalization contracts") {
  const Preset p = preset_two_state();
  const CharOperatorSample sample = char_operator(p.sys, p.obs, 0.05);
  const EigenData eig = dominant_eigen(sample, p.sys.stationary);

  const CVec meta = matvec(sample.m, eig.eta);
  for (int i = 0; i < p.sys.d; ++i)
    CHECK(std::abs(meta[i] - eig.lambda * eig.eta[i]) <= 1e-10);
  CHECK(std::abs(stationary_mean(p.sys.stationary, eig.eta) - 1.0) <= 1e-10);
  CHECK(std::abs(dot(eig.xi, eig.eta) - 1.0) <= 1e-10);
  CHECK(eig.gap_ratio < 1.0);
}

TEST_CASE("iid eigenvalue is the classical characteristic function") {
  const Preset p = preset_iid3();
  for (const double t : {-0.4, 0.05, 0.31}) {
    const Complex lam = dominant_eigen(char_operator(p.sys, p.obs, t), p.sys.stationary).lambda;
    CHECK(std::abs(lam - classical_cf(p, t)) <= 1e-12);
  }
}

TEST_CASE("small-t eigenvalue matches the quadratic variance expansion") {
  // plus/minus one state observable on the 0.9/0.1 - 0.5/0.5 chain
  Mat q(2);
  q(0, 0) = 0.9;
  q(0, 1) = 0.1;
  q(1, 0) = 0.5;
  q(1, 1) = 0.5;
  const SymbolicSystem sys = make_system(Incidence::full(2), q);
  Mat raw(2);
  raw(0, 0) = raw(0, 1) = 1.0;
  raw(1, 0) = raw(1, 1) = -1.0;
  const Observable obs = center_observable(sys, raw);

  const double v = variance(sys, obs).v_gk;
  const double t = 0.01;
  const Complex lam = dominant_eigen(char_operator(sys, obs, t), sys.stationary).lambda;
  CHECK(std::abs(lam - (1.0 - v * t * t / 2.0)) <= 1e-6);
}

TEST_CASE("spectral_radius handles the standard shapes") {
  const Preset p = preset_golden_mean();
  CHECK(std::abs(spectral_radius(char_operator(p.sys, p.obs, 0.0).m) - 1.0) <= 1e-6);

  CMat nilpotent(2);
  nilpotent(0, 1) = 1.0;
  CHECK(spectral_radius(nilpotent) <= 1e-9);

  CMat diag(2);
  diag(0, 0) = 0.5;
  diag(1, 1) = 0.2;
  CHECK(std::abs(spectral_radius(diag) - 0.5) <= 1e-6);

  CMat huge(2, Complex(1e308, 0.0));
  try {
    spectral_radius(huge);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::overflow);
  }
}

TEST_CASE("aperiodicity_scan flags integer observables at 2 pi") {
  const Preset lattice = preset_lattice3();
  const double step = std::numbers::pi / 50.0;
  const AperiodicityScan scan = aperiodicity_scan(lattice.sys, lattice.obs, step, 6.5, step);
  CHECK(scan.max_rho >= 1.0 - 1e-8);
  CHECK(std::abs(std::abs(scan.argmax_t) - kTwoPi) <= 1e-9);

  CHECK_THROWS_AS(aperiodicity_scan(lattice.sys, lattice.obs, 0.0, 1.0, 0.1), Error);
  CHECK_THROWS_AS(aperiodicity_scan(lattice.sys, lattice.obs, -0.5, 1.0, 0.1), Error);
}

TEST_CASE("aperiodicity verdict is invariant under exact rescaling") {
  const Preset base = preset_golden_mean();
  Observable doubled = base.obs;
  for (auto& x : doubled.values.a) x *= 2.0;

  const AperiodicityScan a = aperiodicity_scan(base.sys, base.obs, 0.1, 1.0, 0.05);
  const AperiodicityScan b = aperiodicity_scan(base.sys, doubled, 0.05, 0.5, 0.025);
  CHECK(a.max_rho == b.max_rho);  // powers of two keep the products bit-identical
  CHECK((a.max_rho >= 1.0 - 1e-8) == (b.max_rho >= 1.0 - 1e-8));
}

TEST_CASE("eigenvalue_curve is conjugation symmetric with modulus below one") {
  const Preset p = preset_golden_mean();
  std::vector<double> ts;
  for (int k = -8; k <= 8; ++k)
    if (k != 0) ts.push_back(0.05 * k);
  const EigenCurve curve = eigenvalue_curve(p.sys, p.obs, ts);
  CHECK(curve.fitted_c > 0.0);
  const size_t m = ts.size();
  for (size_t i = 0; i < m; ++i) {
    CHECK(std::abs(curve.samples[i].lambda) <= 1.0 + 1e-12);
    const Complex mirror = curve.samples[m - 1 - i].lambda;
    CHECK(std::abs(curve.samples[i].lambda - std::conj(mirror)) <= 1e-10);
  }
}

TEST_CASE("variance agrees between the series and the second derivative") {
  const Preset iid = preset_iid3();
  const VarianceReport rep = variance(iid.sys, iid.obs);
  double direct = 0.0;
  for (int x = 0; x < 3; ++x)
    direct += iid.sys.stationary[x] * iid.obs.values(x, 0) * iid.obs.values(x, 0);
  CHECK(std::abs(rep.v_gk - direct) <= 1e-12);  // covariances vanish for iid
  CHECK(rep.rel_err <= 1e-4);

  const Preset p = preset_two_state();
  const VarianceReport dep = variance(p.sys, p.obs);
  CHECK(dep.v_gk > 0.0);
  CHECK(dep.rel_err <= 1e-4);
}

TEST_CASE("variance of the zero observable is zero") {
  const SymbolicSystem sys = preset_iid3().sys;
  const Observable zero = center_observable(sys, Mat(3, 0.0));
  const VarianceReport rep = variance(sys, zero);
  CHECK(rep.v_gk == 0.0);
  CHECK(std::abs(rep.v_fd) <= 1e-9);
}

TEST_CASE("remainder_decay vanishes in the rank-one and t = 0 cases") {
  const Preset iid = preset_iid3();
  for (const double norm : remainder_decay(iid.sys, iid.obs, 0.2, 8)) CHECK(norm <= 1e-10);

  const Preset p = preset_two_state();
  for (const double norm : remainder_decay(p.sys, p.obs, 0.0, 8)) CHECK(norm <= 1e-10);
}

TEST_CASE("remainder_decay is geometric at the gap rate") {
  const Preset p = preset_golden_mean();
  const EigenData eig = dominant_eigen(char_operator(p.sys, p.obs, 0.1), p.sys.stationary);
  const std::vector<double> norms = remainder_decay(p.sys, p.obs, 0.1, 20);

  // least squares slope of log norms against n
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (size_t i = 0; i < norms.size(); ++i) {
    if (norms[i] < 1e-280) break;
    const double x = static_cast<double>(i + 1);
    const double y = std::log(norms[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  REQUIRE(count >= 5);
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  CHECK(slope <= std::log(eig.gap_ratio * std::abs(eig.lambda)) + 0.05);
}

TEST_CASE("eta_prime_check reports a vanishing real part") {
  const Preset iid = preset_iid3();
  CHECK(eta_prime_check(iid.sys, iid.obs, 1e-3) <= 1e-10);

  const Preset p = preset_two_state();
  const double at_h = eta_prime_check(p.sys, p.obs, 1e-3);
  const double at_h2 = eta_prime_check(p.sys, p.obs, 5e-4);
  CHECK(at_h <= 4.5 * at_h2 + 1e-12);  // second order in h (or exactly zero)

  const Observable zero = center_observable(p.sys, Mat(2, 0.0));
  CHECK(eta_prime_check(p.sys, zero, 1e-3) == 0.0);
}

TEST_CASE("find_perturbation_window returns a usable dyadic radius") {
  for (const Preset& p : nonlattice_presets()) {
    CAPTURE(p.name);
    const double delta = find_perturbation_window(p.sys, p.obs);
    CHECK(delta > 0.0);
    CHECK(delta <= 0.5);
    const EigenData eig = dominant_eigen(char_operator(p.sys, p.obs, delta), p.sys.stationary);
    CHECK(eig.gap_ratio <= 0.95);
  }
}
