#pragma once

#include <cstdint>
#include <vector>

#include "shiftspec/kernel.hpp"
#include "shiftspec/model.hpp"

namespace shiftspec {

// A stationary trajectory with its increments X_k = phi(s_{k-1}, s_k) and
// Birkhoff sums S_k. Reproducible from (seed, stream) alone.
struct PathSample {
  uint64_t seed = 0;
  uint64_t stream = 0;
  int n = 0;
  std::vector<int> states;  // n + 1 symbols
  Vec increments;           // n values
  Vec sums;                 // n + 1 values, sums[0] = 0
};

PathSample sample_path(const SymbolicSystem& sys, const Observable& obs, int n, uint64_t seed,
                       uint64_t stream = 0);

// S_n alone, without materializing the path.
double sample_final_sum(const SymbolicSystem& sys, const Observable& obs, int n, uint64_t seed,
                        uint64_t stream = 0);

struct ScaledPath {
  int n = 0;
  Vec values;  // values[j] = sums[j] / sqrt(n)
};
ScaledPath scaled_path(const PathSample& p);

struct LocalTimeField {
  int n = 0;
  Vec x_grid;
  Vec values;  // l_n(x) >= 0
};

// l_n(x) = n^{-1/2} sum_{k=1..n} f(S_k - sqrt(n) x).
LocalTimeField local_time_field(const PathSample& p, const SmoothingKernel& kern, Vec x_grid);
double local_time_at(const PathSample& p, const SmoothingKernel& kern, double x);

// 513 uniform points on [-4 sqrt(v), 4 sqrt(v)].
Vec default_x_grid(double v, int points = 513);

// Trapezoid mass of l_n over a uniform grid covering the scaled path range
// plus `margin` on both sides. arg_spacing is the grid step measured in
// kernel-argument units (sqrt(n) times the x step); any value below 2 pi
// leaves only the range-truncation error.
double wide_trapezoid_mass(const PathSample& p, const SmoothingKernel& kern, double margin = 40.0,
                           double arg_spacing = 4.0);

// Fraction of k in {1..n} with S_k / sqrt(n) in [a, b].
double occupation_fraction(const PathSample& p, double a, double b);

}  // namespace shiftspec
