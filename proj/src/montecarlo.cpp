#include "shiftspec/montecarlo.hpp"

#include <algorithm>
#include <cmath>

#include "shiftspec/rng.hpp"

namespace shiftspec {

namespace {

// Inverse-CDF draw over a cumulative row; d is single digits so a linear
// scan beats anything fancier.
int draw(const double* cum, int d, double u) {
  for (int i = 0; i < d - 1; ++i)
    if (u < cum[i]) return i;
  return d - 1;
}

// Sums f(a_k - shift) over the Birkhoff sums for many shifts. For the Fejer
// form the cos/sin of every a_k are cached once and each evaluation uses the
// angle-difference identity with a long series branch near zero; this keeps
// the bulk local-time loops free of libm trig. Error against pointwise f is
// below 2e-14 per term.
class KernelRowSum {
 public:
  KernelRowSum(const SmoothingKernel& kern, const Vec& sums, int first, int last)
      : kern_(kern), sums_(sums), first_(first), last_(last) {
    if (kern.fejer_form) {
      cos_.resize(last - first + 1);
      sin_.resize(last - first + 1);
      for (int k = first; k <= last; ++k) {
        cos_[k - first] = std::cos(sums[k]);
        sin_[k - first] = std::sin(sums[k]);
      }
    }
  }

  double operator()(double shift) const {
    if (!kern_.fejer_form) {
      double acc = 0.0;
      for (int k = first_; k <= last_; ++k) acc += kern_.f(sums_[k] - shift);
      return acc;
    }
    const double cs = std::cos(shift);
    const double sn = std::sin(shift);
    double acc = 0.0;
    for (int k = first_; k <= last_; ++k) {
      const double u = sums_[k] - shift;
      if (u < 0.25 && u > -0.25) {
        // 2 (1 - cos u) / u^2 expanded through u^10
        const double u2 = u * u;
        acc += 1.0 +
               u2 * (-1.0 / 12.0 +
                     u2 * (1.0 / 360.0 +
                           u2 * (-1.0 / 20160.0 +
                                 u2 * (1.0 / 1814400.0 - u2 / 239500800.0))));
      } else {
        const double c = cos_[k - first_] * cs + sin_[k - first_] * sn;  // cos(a_k - shift)
        acc += 2.0 * (1.0 - c) / (u * u);
      }
    }
    return acc;
  }

 private:
  const SmoothingKernel& kern_;
  const Vec& sums_;
  int first_;
  int last_;
  Vec cos_, sin_;
};

struct Sampler {
  const SymbolicSystem& sys;
  Vec cum_pi;
  Vec cum_rows;

  explicit Sampler(const SymbolicSystem& s) : sys(s) {
    const int d = s.d;
    cum_pi.resize(d);
    double acc = 0.0;
    for (int i = 0; i < d; ++i) {
      acc += s.stationary[i];
      cum_pi[i] = acc;
    }
    cum_rows.resize(static_cast<size_t>(d) * d);
    for (int i = 0; i < d; ++i) {
      acc = 0.0;
      for (int j = 0; j < d; ++j) {
        acc += s.kernel(i, j);
        cum_rows[static_cast<size_t>(i) * d + j] = acc;
      }
    }
  }

  int initial(CounterRng& rng) const { return draw(cum_pi.data(), sys.d, rng.next_double()); }
  int step(CounterRng& rng, int from) const {
    return draw(&cum_rows[static_cast<size_t>(from) * sys.d], sys.d, rng.next_double());
  }
};

}  // namespace

PathSample sample_path(const SymbolicSystem& sys, const Observable& obs, int n, uint64_t seed,
                       uint64_t stream) {
  if (n < 1) raise(Errc::invalid_grid, "need n >= 1");
  PathSample p;
  p.seed = seed;
  p.stream = stream;
  p.n = n;
  p.states.resize(static_cast<size_t>(n) + 1);
  p.increments.resize(n);
  p.sums.resize(static_cast<size_t>(n) + 1);

  CounterRng rng(seed, stream);
  const Sampler sampler(sys);
  int state = sampler.initial(rng);
  p.states[0] = state;
  p.sums[0] = 0.0;
  double s = 0.0;
  for (int k = 1; k <= n; ++k) {
    const int next = sampler.step(rng, state);
    const double x = obs.values(state, next);
    p.states[k] = next;
    p.increments[k - 1] = x;
    s += x;
    p.sums[k] = s;
    state = next;
  }
  return p;
}

double sample_final_sum(const SymbolicSystem& sys, const Observable& obs, int n, uint64_t seed,
                        uint64_t stream) {
  CounterRng rng(seed, stream);
  const Sampler sampler(sys);
  int state = sampler.initial(rng);
  double s = 0.0;
  for (int k = 1; k <= n; ++k) {
    const int next = sampler.step(rng, state);
    s += obs.values(state, next);
    state = next;
  }
  return s;
}

ScaledPath scaled_path(const PathSample& p) {
  ScaledPath out;
  out.n = p.n;
  out.values.resize(p.sums.size());
  const double root = std::sqrt(static_cast<double>(p.n));
  for (size_t j = 0; j < p.sums.size(); ++j) out.values[j] = p.sums[j] / root;
  return out;
}

double local_time_at(const PathSample& p, const SmoothingKernel& kern, double x) {
  const double root = std::sqrt(static_cast<double>(p.n));
  const double shift = root * x;
  double s = 0.0;
  for (int k = 1; k <= p.n; ++k) s += kern.f(p.sums[k] - shift);
  return s / root;
}

LocalTimeField local_time_field(const PathSample& p, const SmoothingKernel& kern, Vec x_grid) {
  LocalTimeField out;
  out.n = p.n;
  out.values.resize(x_grid.size());
  const double root = std::sqrt(static_cast<double>(p.n));
  const KernelRowSum row(kern, p.sums, 1, p.n);
  for (size_t i = 0; i < x_grid.size(); ++i) out.values[i] = row(root * x_grid[i]) / root;
  out.x_grid = std::move(x_grid);
  return out;
}

Vec default_x_grid(double v, int points) {
  if (points < 2) raise(Errc::invalid_grid, "grid needs at least two points");
  const double half = 4.0 * std::sqrt(std::max(v, 0.0));
  Vec grid(points);
  const double h = 2.0 * half / static_cast<double>(points - 1);
  for (int i = 0; i < points; ++i) grid[i] = -half + h * static_cast<double>(i);
  return grid;
}

double wide_trapezoid_mass(const PathSample& p, const SmoothingKernel& kern, double margin,
                           double arg_spacing) {
  const double root = std::sqrt(static_cast<double>(p.n));
  const auto [min_it, max_it] = std::minmax_element(p.sums.begin(), p.sums.end());
  const double lo = *min_it / root - margin;
  const double hi = *max_it / root + margin;
  const double h = arg_spacing / root;
  const long points = static_cast<long>(std::ceil((hi - lo) / h)) + 1;

  const KernelRowSum row(kern, p.sums, 1, p.n);
  double acc = 0.0;
  for (long i = 0; i < points; ++i) {
    const double x = lo + h * static_cast<double>(i);
    const double l = row(root * x) / root;
    acc += (i == 0 || i == points - 1) ? 0.5 * l : l;
  }
  return acc * h;
}

double occupation_fraction(const PathSample& p, double a, double b) {
  if (!(a <= b)) raise(Errc::invalid_window, "need a <= b");
  const double root = std::sqrt(static_cast<double>(p.n));
  long count = 0;
  for (int k = 1; k <= p.n; ++k) {
    const double x = p.sums[k] / root;
    if (x >= a && x <= b) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(p.n);
}

}  // namespace shiftspec
