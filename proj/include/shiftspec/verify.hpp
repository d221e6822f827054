#pragma once

#include <functional>
#include <span>
#include <vector>

#include "shiftspec/kernel.hpp"
#include "shiftspec/montecarlo.hpp"

namespace shiftspec {

// One-sample Kolmogorov-Smirnov at the fixed 1% asymptotic level.
struct KSResult {
  double statistic = 0.0;
  int n_samples = 0;
  double critical = 0.0;  // 1.628 / sqrt(n_samples)
  bool pass = false;
};

KSResult ks_statistic(std::span<const double> sorted_samples,
                      const std::function<double(double)>& cdf);

double normal_cdf(double x, double variance);

// Law of |Z| / sqrt(v): Brownian local time at zero, time one, variance v.
double half_normal_cdf(double x, double variance);

// KS of S_n / sqrt(n) over m seed streams against Normal(0, v).
KSResult clt_check(const SymbolicSystem& sys, const Observable& obs, int n, int m_samples,
                   uint64_t seed);

// KS of l_n(0) / mass against |Z| / sqrt(v). Refuses to run (probable_lattice)
// when the aperiodicity scan over the kernel's frequency support finds
// rho(P(t)) >= 1 - 1e-8.
KSResult local_time_law_check(const SymbolicSystem& sys, const Observable& obs,
                              const SmoothingKernel& kern, int n, int m_samples, uint64_t seed);

// Deterministic two-sided bounds relating the integral of l_n over [a, b] to
// occupation fractions of enlarged/shrunken intervals. Holds per path because
// the kernel is nonnegative.
struct SandwichReport {
  int n = 0;
  double a = 0.0, b = 0.0, eps = 0.0;
  bool lower_ok = false, upper_ok = false;
  double slack_lower = 0.0, slack_upper = 0.0;
  bool lower_vacuous = false;  // a + eps > b - eps; lower bound trivially 0
};

SandwichReport occupation_sandwich(const PathSample& p, const SmoothingKernel& kern, double a,
                                   double b, double eps);

struct MomentRatioReport {
  std::vector<int> n_list;
  Vec offset_list;
  std::vector<Vec> ratios;  // [n index][offset index]: E (l_n(x) - l_n(x+off))^4 / off^2
  Vec second_moments;       // E l_n(x)^2 per n
  // Worst (row max / row median) over the n rows: offset-direction stability
  // at each n. The n direction is covered by the second moments.
  double max_over_median = 0.0;
};

MomentRatioReport moment_ratio_scan(const SymbolicSystem& sys, const Observable& obs,
                                    const SmoothingKernel& kern, std::span<const int> n_list,
                                    double x, std::span<const double> offsets, int m_samples,
                                    uint64_t seed);

struct ModulusPoint {
  double delta = 0.0;
  double probability = 0.0;  // empirical P(osc of l_n over distance < delta >= eps)
};

// Oscillation probabilities on a uniform grid over [-2 sqrt(v), 2 sqrt(v)].
// grid_points = 0 picks the coarsest grid with spacing <= min(delta) / 4.
std::vector<ModulusPoint> modulus_probe(const SymbolicSystem& sys, const Observable& obs,
                                        const SmoothingKernel& kern, int n,
                                        std::span<const double> deltas, double eps, int m_samples,
                                        uint64_t seed, int grid_points = 0);

// Both sides of the dyadic chaining bound B_k <= 2 sum A_i for values on a
// grid of size 2^k + 1.
struct ChainingCheck {
  double sup_pairwise = 0.0;
  double bound = 0.0;
};

ChainingCheck dyadic_chaining_check(std::span<const double> values);

}  // namespace shiftspec
