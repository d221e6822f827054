#include "shiftspec/presets.hpp"

#include <cmath>

namespace shiftspec {

namespace {
const double kSqrt2 = std::sqrt(2.0);
}

Preset preset_two_state() {
  Mat q(2);
  q(0, 0) = 0.9;
  q(0, 1) = 0.1;
  q(1, 0) = 0.5;
  q(1, 1) = 0.5;

  // Cycle sums: loop(0) = s, loop(1) = -s, two-cycle = -s sqrt(2). The two
  // gauge-invariant combinations are 2s and s sqrt(2), so the observable is
  // non-lattice at any scale. The scale pushes the per-step variance high
  // enough that the potential-kernel increments at n > 1e3 sit below 1e-6.
  const double s = 4.5;
  Mat raw(2);
  raw(0, 0) = s;
  raw(0, 1) = -s * (kSqrt2 - 1.0);
  raw(1, 0) = -s;
  raw(1, 1) = -s;

  Preset p;
  p.name = "two_state";
  p.sys = make_system(Incidence::full(2), q);
  p.obs = center_observable(p.sys, raw);
  return p;
}

Preset preset_golden_mean() {
  Incidence a(2);
  a(0, 0) = 1;
  a(0, 1) = 1;
  a(1, 0) = 1;

  Potential zero{Mat(2)};
  Preset p;
  p.name = "golden_mean";
  p.sys = gibbs_from_potential(a, zero);  // Parry measure

  // Loop sum s and two-cycle sum s sqrt(2): irrational ratio, so no full
  // resonance anywhere; the nearest partial resonance 2 pi / (s (2 - sqrt 2))
  // sits near t = 1.8, outside both the scan window and the kernel support.
  // The scale keeps rho(P(t)) <= 0.999 down to t = 0.05.
  const double s = 6.0;
  Mat raw(2);
  raw(0, 0) = s;
  raw(0, 1) = s * kSqrt2;
  raw(1, 0) = 0.0;
  p.obs = center_observable(p.sys, raw);
  return p;
}

Preset preset_iid3() {
  const Vec pi = {0.5, 0.3, 0.2};
  Mat q(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) q(i, j) = pi[j];

  // State observable: values {1, sqrt(2), 0} on the first coordinate,
  // scaled so the per-step variance is comfortably above one (the spectral
  // radius at the scan edge t = 0.05 then clears the 0.999 bound).
  Mat raw(3);
  const double scale = 2.2;
  const double values[3] = {scale, scale * kSqrt2, 0.0};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) raw(i, j) = values[i];

  Preset p;
  p.name = "iid3";
  p.sys = make_system(Incidence::full(3), q);
  p.obs = center_observable(p.sys, raw);
  return p;
}

Preset preset_lattice3() {
  const Vec pi = {0.25, 0.5, 0.25};
  Mat q(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) q(i, j) = pi[j];

  Mat raw(3);
  const double values[3] = {1.0, 0.0, -1.0};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) raw(i, j) = values[i];

  Preset p;
  p.name = "lattice3";
  p.sys = make_system(Incidence::full(3), q);
  p.obs = center_observable(p.sys, raw);  // already mean zero, stays integer
  p.lattice = true;
  return p;
}

std::vector<Preset> nonlattice_presets() {
  return {preset_two_state(), preset_golden_mean(), preset_iid3()};
}

}  // namespace shiftspec
