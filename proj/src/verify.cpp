#include "shiftspec/verify.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <string>

#include "shiftspec/threads.hpp"

namespace shiftspec {

namespace {

constexpr double kSlackTol = 1e-10;
constexpr double kDegenerateVarianceTol = 1e-10;
constexpr double kLatticeThreshold = 1.0 - 1e-8;

double require_variance(const SymbolicSystem& sys, const Observable& obs) {
  const double v = variance(sys, obs).v_gk;
  if (v < kDegenerateVarianceTol)
    raise(Errc::degenerate_variance, "limiting variance " + std::to_string(v));
  return v;
}

// Scan grid for the lattice gate: multiples of pi/50 cover the kernel's
// frequency support and land exactly on the resonances of integer-valued
// observables (t = pi, 2 pi).
void lattice_gate(const SymbolicSystem& sys, const Observable& obs) {
  const double step = std::numbers::pi / 50.0;
  const AperiodicityScan scan = aperiodicity_scan(sys, obs, step, 7.0, step);
  if (scan.max_rho >= kLatticeThreshold)
    raise(Errc::probable_lattice, "rho(P(t)) = " + std::to_string(scan.max_rho) + " at t = " +
                                      std::to_string(scan.argmax_t));
}

// Sliding-window oscillation: max over windows of given width of (max - min).
double max_oscillation(const Vec& values, int window) {
  if (window <= 0) return 0.0;
  std::deque<int> maxq, minq;
  double best = 0.0;
  for (int i = 0; i < static_cast<int>(values.size()); ++i) {
    while (!maxq.empty() && values[maxq.back()] <= values[i]) maxq.pop_back();
    maxq.push_back(i);
    while (!minq.empty() && values[minq.back()] >= values[i]) minq.pop_back();
    minq.push_back(i);
    const int lo = i - window;
    while (maxq.front() < lo) maxq.pop_front();
    while (minq.front() < lo) minq.pop_front();
    best = std::max(best, values[maxq.front()] - values[minq.front()]);
  }
  return best;
}

}  // namespace

KSResult ks_statistic(std::span<const double> sorted_samples,
                      const std::function<double(double)>& cdf) {
  const int m = static_cast<int>(sorted_samples.size());
  if (m < 20) raise(Errc::too_few_samples, "need at least 20 samples, got " + std::to_string(m));
  for (int i = 1; i < m; ++i)
    if (sorted_samples[i] < sorted_samples[i - 1])
      raise(Errc::invalid_grid, "samples must be sorted");

  double d = 0.0;
  for (int i = 1; i <= m; ++i) {
    const double f = cdf(sorted_samples[i - 1]);
    d = std::max(d, static_cast<double>(i) / m - f);
    d = std::max(d, f - static_cast<double>(i - 1) / m);
  }
  KSResult out;
  out.statistic = d;
  out.n_samples = m;
  out.critical = 1.628 / std::sqrt(static_cast<double>(m));
  out.pass = d <= out.critical;
  return out;
}

double normal_cdf(double x, double variance) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0 * variance));
}

double half_normal_cdf(double x, double variance) {
  if (x <= 0.0) return 0.0;
  return std::erf(x * std::sqrt(variance) / std::numbers::sqrt2);
}

KSResult clt_check(const SymbolicSystem& sys, const Observable& obs, int n, int m_samples,
                   uint64_t seed) {
  const double v = require_variance(sys, obs);
  Vec samples(m_samples);
  const double root = std::sqrt(static_cast<double>(n));
  parallel_chunks(m_samples, 64, [&](size_t lo, size_t hi) {
    for (size_t j = lo; j < hi; ++j)
      samples[j] = sample_final_sum(sys, obs, n, seed, j) / root;
  });
  std::sort(samples.begin(), samples.end());
  return ks_statistic(samples, [v](double x) { return normal_cdf(x, v); });
}

KSResult local_time_law_check(const SymbolicSystem& sys, const Observable& obs,
                              const SmoothingKernel& kern, int n, int m_samples, uint64_t seed) {
  const double v = require_variance(sys, obs);
  lattice_gate(sys, obs);

  Vec samples(m_samples);
  parallel_chunks(m_samples, 16, [&](size_t lo, size_t hi) {
    for (size_t j = lo; j < hi; ++j) {
      const PathSample p = sample_path(sys, obs, n, seed, j);
      samples[j] = local_time_at(p, kern, 0.0) / kern.mass;
    }
  });
  std::sort(samples.begin(), samples.end());
  return ks_statistic(samples, [v](double x) { return half_normal_cdf(x, v); });
}

SandwichReport occupation_sandwich(const PathSample& p, const SmoothingKernel& kern, double a,
                                   double b, double eps) {
  if (!(a < b) || !(eps > 0.0)) raise(Errc::invalid_window, "need a < b and eps > 0");
  SandwichReport rep;
  rep.n = p.n;
  rep.a = a;
  rep.b = b;
  rep.eps = eps;

  const double root = std::sqrt(static_cast<double>(p.n));
  // int_a^b l_n dx = (1/n) sum_k int f over [S_k - sqrt(n) b, S_k - sqrt(n) a].
  double lhs = 0.0;
  for (int k = 1; k <= p.n; ++k)
    lhs += kern.integral(p.sums[k] - root * b, p.sums[k] - root * a);
  lhs /= static_cast<double>(p.n);

  const double upper =
      occupation_fraction(p, a - eps, b + eps) * kern.mass + kern.mass_tail(root * eps);
  rep.slack_upper = upper - lhs;
  rep.upper_ok = rep.slack_upper >= -kSlackTol;

  rep.lower_vacuous = a + eps > b - eps;
  const double lower = rep.lower_vacuous
                           ? 0.0
                           : occupation_fraction(p, a + eps, b - eps) * kern.mass_window(root * eps);
  rep.slack_lower = lhs - lower;
  rep.lower_ok = rep.slack_lower >= -kSlackTol;
  return rep;
}

MomentRatioReport moment_ratio_scan(const SymbolicSystem& sys, const Observable& obs,
                                    const SmoothingKernel& kern, std::span<const int> n_list,
                                    double x, std::span<const double> offsets, int m_samples,
                                    uint64_t seed) {
  if (m_samples < 20) raise(Errc::too_few_samples, "need at least 20 samples");
  for (const double off : offsets)
    if (!(off > 0.0)) raise(Errc::invalid_grid, "offsets must be positive");

  MomentRatioReport rep;
  rep.n_list.assign(n_list.begin(), n_list.end());
  rep.offset_list.assign(offsets.begin(), offsets.end());
  rep.ratios.resize(n_list.size());
  rep.second_moments.assign(n_list.size(), 0.0);

  const size_t n_off = offsets.size();
  for (size_t ni = 0; ni < n_list.size(); ++ni) {
    const int n = n_list[ni];
    constexpr size_t kChunk = 32;
    const size_t n_chunks = (static_cast<size_t>(m_samples) + kChunk - 1) / kChunk;
    std::vector<Vec> chunk_fourth(n_chunks, Vec(n_off, 0.0));
    Vec chunk_second(n_chunks, 0.0);

    parallel_chunks(m_samples, kChunk, [&](size_t lo, size_t hi) {
      Vec fourth(n_off, 0.0);
      double second = 0.0;
      for (size_t j = lo; j < hi; ++j) {
        const uint64_t stream = (static_cast<uint64_t>(ni) << 32) + j;
        const PathSample p = sample_path(sys, obs, n, seed, stream);
        const double base = local_time_at(p, kern, x);
        second += base * base;
        for (size_t oi = 0; oi < n_off; ++oi) {
          const double diff = base - local_time_at(p, kern, x + offsets[oi]);
          const double d2 = diff * diff;
          fourth[oi] += d2 * d2;
        }
      }
      chunk_fourth[lo / kChunk] = std::move(fourth);
      chunk_second[lo / kChunk] = second;
    });

    Vec fourth(n_off, 0.0);
    double second = 0.0;
    for (size_t c = 0; c < n_chunks; ++c) {
      for (size_t oi = 0; oi < n_off; ++oi) fourth[oi] += chunk_fourth[c][oi];
      second += chunk_second[c];
    }
    rep.second_moments[ni] = second / m_samples;
    rep.ratios[ni].resize(n_off);
    for (size_t oi = 0; oi < n_off; ++oi)
      rep.ratios[ni][oi] = fourth[oi] / m_samples / (offsets[oi] * offsets[oi]);
  }

  for (const Vec& row : rep.ratios) {
    Vec sorted = row;
    std::sort(sorted.begin(), sorted.end());
    const size_t sz = sorted.size();
    const double median =
        sz % 2 == 1 ? sorted[sz / 2] : 0.5 * (sorted[sz / 2 - 1] + sorted[sz / 2]);
    if (median > 0.0) rep.max_over_median = std::max(rep.max_over_median, sorted.back() / median);
  }
  return rep;
}

std::vector<ModulusPoint> modulus_probe(const SymbolicSystem& sys, const Observable& obs,
                                        const SmoothingKernel& kern, int n,
                                        std::span<const double> deltas, double eps, int m_samples,
                                        uint64_t seed, int grid_points) {
  if (deltas.empty()) raise(Errc::invalid_grid, "empty delta list");
  for (size_t i = 0; i + 1 < deltas.size(); ++i)
    if (!(deltas[i] > deltas[i + 1])) raise(Errc::invalid_grid, "deltas must be decreasing");
  if (!(deltas.back() > 0.0)) raise(Errc::invalid_grid, "deltas must be positive");

  const double v = require_variance(sys, obs);
  const double half = 2.0 * std::sqrt(v);
  const double delta_min = deltas.back();
  if (grid_points == 0)
    grid_points = static_cast<int>(std::ceil(2.0 * half / (delta_min / 4.0))) + 1;
  if (grid_points < 2) raise(Errc::grid_too_coarse, "grid needs at least two points");
  const double spacing = 2.0 * half / static_cast<double>(grid_points - 1);
  if (spacing > delta_min / 4.0 * (1.0 + 1e-12))
    raise(Errc::grid_too_coarse, "grid spacing " + std::to_string(spacing) + " exceeds " +
                                     std::to_string(delta_min / 4.0));

  Vec grid(grid_points);
  for (int i = 0; i < grid_points; ++i) grid[i] = -half + spacing * static_cast<double>(i);

  // Window width per delta: pairs at strict distance < delta.
  std::vector<int> windows(deltas.size());
  for (size_t di = 0; di < deltas.size(); ++di) {
    int w = static_cast<int>(std::ceil(deltas[di] / spacing - 1e-12)) - 1;
    windows[di] = std::max(w, 0);
  }

  constexpr size_t kChunk = 16;
  const size_t n_chunks = (static_cast<size_t>(m_samples) + kChunk - 1) / kChunk;
  std::vector<std::vector<long>> chunk_counts(n_chunks, std::vector<long>(deltas.size(), 0));
  parallel_chunks(m_samples, kChunk, [&](size_t lo, size_t hi) {
    std::vector<long>& counts = chunk_counts[lo / kChunk];
    for (size_t j = lo; j < hi; ++j) {
      const PathSample p = sample_path(sys, obs, n, seed, j);
      const LocalTimeField field = local_time_field(p, kern, grid);
      for (size_t di = 0; di < deltas.size(); ++di)
        if (max_oscillation(field.values, windows[di]) >= eps) ++counts[di];
    }
  });

  std::vector<ModulusPoint> out(deltas.size());
  for (size_t di = 0; di < deltas.size(); ++di) {
    long total = 0;
    for (const auto& counts : chunk_counts) total += counts[di];
    out[di].delta = deltas[di];
    out[di].probability = static_cast<double>(total) / static_cast<double>(m_samples);
  }
  return out;
}

ChainingCheck dyadic_chaining_check(std::span<const double> values) {
  const size_t size = values.size();
  if (size < 2 || ((size - 1) & (size - 2)) != 0)
    raise(Errc::bad_grid_size, "need 2^k + 1 values, got " + std::to_string(size));
  const size_t n = size - 1;  // power of two

  ChainingCheck out;
  const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
  out.sup_pairwise = *max_it - *min_it;

  // A_0 = B_0 on the coarsest pair, then max adjacent increments per level.
  double sum = std::abs(values[n] - values[0]);
  for (size_t stride = n / 2; stride >= 1; stride /= 2) {
    double level = 0.0;
    for (size_t j = 0; j + stride <= n; j += stride)
      level = std::max(level, std::abs(values[j + stride] - values[j]));
    sum += level;
    if (stride == 1) break;
  }
  out.bound = 2.0 * sum;
  return out;
}

}  // namespace shiftspec
