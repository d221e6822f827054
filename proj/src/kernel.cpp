#include "shiftspec/kernel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "shiftspec/threads.hpp"

namespace shiftspec {

namespace {

constexpr double kImagTol = 1e-10;

double fejer_f(double x) {
  const double ax = std::abs(x);
  if (ax < 1e-3) {
    const double x2 = x * x;
    return 1.0 - x2 / 12.0 + x2 * x2 / 360.0;
  }
  return 2.0 * (1.0 - std::cos(x)) / (x * x);
}

double fejer_primitive(double x) {
  const double ax = std::abs(x);
  if (ax < 1e-3) {
    const double x2 = x * x;
    return x * (1.0 - x2 / 36.0 + x2 * x2 / 1800.0);
  }
  return 2.0 * (sine_integral(x) - (1.0 - std::cos(x)) / x);
}

struct NodeTable {
  QuadratureGrid grid;
  std::vector<CMat> ops;      // P(t_j)
  std::vector<double> coeff;  // w_j * fhat(t_j)
};

NodeTable build_nodes(const SymbolicSystem& sys, const Observable& obs,
                      const SmoothingKernel& kern, int quad_points) {
  NodeTable table;
  table.grid = simpson_grid(quad_points, -1.0, 1.0);
  const size_t m = table.grid.nodes.size();
  table.ops.resize(m);
  table.coeff.resize(m);
  for (size_t j = 0; j < m; ++j) {
    table.ops[j] = char_operator(sys, obs, table.grid.nodes[j]).m;
    table.coeff[j] = table.grid.weights[j] * kern.fhat(table.grid.nodes[j]);
  }
  return table;
}

}  // namespace

double sine_integral(double x) {
  const double ax = std::abs(x);
  if (ax == 0.0) return 0.0;

  double si;
  if (ax <= 2.0) {
    // sum over k of (-1)^k x^(2k+1) / ((2k+1) (2k+1)!)
    double sin_term = ax;  // (-1)^k x^(2k+1) / (2k+1)!
    double sum = ax;
    for (int k = 1; k < 40; ++k) {
      const int n = 2 * k + 1;
      sin_term *= -ax * ax / static_cast<double>((n - 1) * n);
      const double contrib = sin_term / static_cast<double>(n);
      sum += contrib;
      if (std::abs(contrib) < 1e-18 * std::abs(sum)) break;
    }
    si = sum;
  } else {
    // Si(x) = pi/2 + Im(h), Ci(x) = -Re(h), h = e^{-ix} * CF for E1(ix),
    // evaluated with the modified Lentz scheme.
    const Complex b0(1.0, ax);
    Complex c(1e308, 0.0);
    Complex d = 1.0 / b0;
    Complex h = d;
    Complex b = b0;
    bool converged = false;
    for (int i = 2; i <= 4000; ++i) {
      const double a = -static_cast<double>(i - 1) * static_cast<double>(i - 1);
      b += 2.0;
      d = 1.0 / (a * d + b);
      c = b + a / c;
      const Complex del = c * d;
      h *= del;
      if (std::abs(del - 1.0) < 1e-16) {
        converged = true;
        break;
      }
    }
    if (!converged) raise(Errc::nonconvergent_series, "sine integral continued fraction stalled");
    h *= Complex(std::cos(ax), -std::sin(ax));
    si = std::numbers::pi / 2.0 + h.imag();
  }
  return x < 0.0 ? -si : si;
}

SmoothingKernel fejer_kernel() {
  SmoothingKernel k;
  k.fhat = [](double t) { return std::max(0.0, 1.0 - std::abs(t)); };
  k.f = fejer_f;
  k.primitive = fejer_primitive;
  k.mass = 2.0 * std::numbers::pi;
  k.fejer_form = true;
  return k;
}

QuadratureGrid simpson_grid(int points, double lo, double hi) {
  if (points < 3 || points % 2 == 0)
    raise(Errc::invalid_grid, "Simpson rule needs an odd node count >= 3");
  if (!(hi > lo)) raise(Errc::invalid_grid, "empty quadrature interval");
  QuadratureGrid g;
  g.nodes.resize(points);
  g.weights.resize(points);
  const double h = (hi - lo) / static_cast<double>(points - 1);
  for (int i = 0; i < points; ++i) {
    g.nodes[i] = lo + h * static_cast<double>(i);
    double w = (i == 0 || i == points - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    g.weights[i] = w * h / 3.0;
  }
  return g;
}

namespace {

// Moments of 1, u, u^2 against e^{-ixu} over [-h, h]. Series below
// theta = xh = 0.1 to dodge the trig cancellation.
struct OscMoments {
  Complex i0, i1, i2;
};

OscMoments osc_moments(double x, double h) {
  OscMoments m;
  const double theta = x * h;
  if (std::abs(theta) < 0.1) {
    const double t2 = theta * theta;
    m.i0 = 2.0 * h * (1.0 - t2 / 6.0 + t2 * t2 / 120.0);
    m.i1 = Complex(0.0, -2.0 * h * h * (theta / 3.0 - t2 * theta / 30.0));
    m.i2 = 2.0 * h * h * h * (1.0 / 3.0 - t2 / 10.0 + t2 * t2 / 168.0);
  } else {
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    m.i0 = 2.0 * s / x;
    m.i1 = Complex(0.0, -2.0 * (s / (x * x) - h * c / x));
    m.i2 = 2.0 * (2.0 * h * c / (x * x) + (h * h / x - 2.0 / (x * x * x)) * s);
  }
  return m;
}

// Integral of g(t) e^{-ixt} over the grid: quadratic interpolation of g on
// each Simpson panel with the oscillation integrated in closed form. Agrees
// with composite Simpson to the same order for small x and stays accurate
// when x is far beyond the node resolution.
Complex filon_integral(const QuadratureGrid& grid, const CVec& g, double x) {
  const size_t points = grid.nodes.size();
  const double h = grid.nodes[1] - grid.nodes[0];
  const OscMoments mom = osc_moments(x, h);
  Complex acc = 0.0;
  for (size_t j = 0; j + 2 < points; j += 2) {
    const Complex a = g[j + 1];
    const Complex b = (g[j + 2] - g[j]) / (2.0 * h);
    const Complex c = (g[j + 2] - 2.0 * g[j + 1] + g[j]) / (2.0 * h * h);
    const double mid = grid.nodes[j + 1];
    const double phase = -x * mid;
    acc += Complex(std::cos(phase), std::sin(phase)) * (a * mom.i0 + b * mom.i1 + c * mom.i2);
  }
  return acc;
}

}  // namespace

double expected_kernel_density(const SymbolicSystem& sys, const Observable& obs,
                               const SmoothingKernel& kern, long n, double x, int quad_points) {
  if (n < 1) raise(Errc::invalid_grid, "need n >= 1");
  const NodeTable table = build_nodes(sys, obs, kern, quad_points);
  const size_t m = table.grid.nodes.size();

  CVec integrand(m);
  constexpr size_t kChunk = 256;
  parallel_chunks(m, kChunk, [&](size_t lo, size_t hi) {
    CVec v(sys.d), tmp(sys.d);
    for (size_t j = lo; j < hi; ++j) {
      const double fhat_j = kern.fhat(table.grid.nodes[j]);
      if (fhat_j == 0.0) {
        integrand[j] = 0.0;
        continue;
      }
      std::fill(v.begin(), v.end(), Complex(1.0, 0.0));
      for (long k = 0; k < n; ++k) {
        matvec_inplace(table.ops[j], v, tmp);
        v.swap(tmp);
      }
      integrand[j] = fhat_j * stationary_mean(sys.stationary, v);
    }
  });

  const Complex integral = filon_integral(table.grid, integrand, x);
  if (std::abs(integral.imag()) > kImagTol)
    raise(Errc::quadrature_imag_residue,
          "imaginary residue " + std::to_string(integral.imag()));
  return integral.real();
}

double lambda_l1_norm(const SymbolicSystem& sys, const Observable& obs, long n, double delta,
                      int quad_points) {
  if (!(delta > 0.0)) raise(Errc::invalid_grid, "delta must be positive");
  if (n < 0) raise(Errc::invalid_grid, "negative power");
  const QuadratureGrid grid = simpson_grid(quad_points, -delta, delta);
  const size_t m = grid.nodes.size();

  constexpr size_t kChunk = 64;
  const size_t n_chunks = (m + kChunk - 1) / kChunk;
  std::vector<double> chunk_sums(n_chunks, 0.0);
  parallel_chunks(m, kChunk, [&](size_t lo, size_t hi) {
    double acc = 0.0;
    for (size_t j = lo; j < hi; ++j) {
      const EigenData eig = dominant_eigen(char_operator(sys, obs, grid.nodes[j]), sys.stationary);
      acc += grid.weights[j] * std::pow(std::abs(eig.lambda), static_cast<double>(n));
    }
    chunk_sums[lo / kChunk] = acc;
  });

  double integral = 0.0;
  for (double c : chunk_sums) integral += c;
  return integral;
}

double PotentialKernelSum::partial(int n) const {
  double s = 0.0;
  for (int i = 0; i < n && i < static_cast<int>(terms.size()); ++i) s += terms[i];
  return s;
}

double PotentialKernelSum::max_term_beyond(int n0) const {
  double worst = 0.0;
  for (size_t i = static_cast<size_t>(n0); i < terms.size(); ++i)
    worst = std::max(worst, terms[i]);
  return worst;
}

std::vector<PotentialKernelSum> potential_kernel_sums(const SymbolicSystem& sys,
                                                      const Observable& obs,
                                                      const SmoothingKernel& kern,
                                                      std::span<const double> ys, int n_max,
                                                      int quad_points) {
  if (n_max < 1) raise(Errc::invalid_grid, "need N >= 1");
  const NodeTable table = build_nodes(sys, obs, kern, quad_points);
  const size_t m = table.grid.nodes.size();
  const size_t ny = ys.size();

  // Per node and step n the integrand contributes coeff * c_n * (1 - e^{ity}).
  // Split into the y-independent part and one phase-weighted part per y so a
  // single sweep of operator powers serves every offset.
  constexpr size_t kChunk = 64;
  const size_t n_chunks = (m + kChunk - 1) / kChunk;
  struct ChunkAccum {
    std::vector<Complex> base;             // integral of coeff * c_n
    std::vector<Complex> shifted;          // [y][n] integral with phase e^{ity}
  };
  std::vector<ChunkAccum> accum(n_chunks);

  parallel_chunks(m, kChunk, [&](size_t lo, size_t hi) {
    ChunkAccum& acc = accum[lo / kChunk];
    const size_t nm = static_cast<size_t>(n_max);
    acc.base.assign(nm, Complex{});
    acc.shifted.assign(ny * nm, Complex{});
    std::vector<CVec> v(hi - lo, CVec(sys.d, Complex(1.0, 0.0)));
    // Per-node phase factors e^{ity} are n-independent; hoist them.
    std::vector<Complex> phase((hi - lo) * ny);
    for (size_t j = lo; j < hi; ++j)
      for (size_t yi = 0; yi < ny; ++yi) {
        const double ph = table.grid.nodes[j] * ys[yi];
        phase[(j - lo) * ny + yi] = Complex(std::cos(ph), std::sin(ph));
      }
    CVec tmp(sys.d);
    for (size_t ni = 0; ni < nm; ++ni) {
      for (size_t j = lo; j < hi; ++j) {
        CVec& vj = v[j - lo];
        matvec_inplace(table.ops[j], vj, tmp);
        vj.swap(tmp);
        const Complex contrib = table.coeff[j] * stationary_mean(sys.stationary, vj);
        acc.base[ni] += contrib;
        for (size_t yi = 0; yi < ny; ++yi)
          acc.shifted[yi * nm + ni] += contrib * phase[(j - lo) * ny + yi];
      }
    }
  });

  std::vector<PotentialKernelSum> out(ny);
  for (size_t yi = 0; yi < ny; ++yi) {
    out[yi].y = ys[yi];
    out[yi].terms.assign(static_cast<size_t>(n_max), 0.0);
  }
  const size_t nm = static_cast<size_t>(n_max);
  for (size_t ni = 0; ni < nm; ++ni) {
    Complex base = 0.0;
    for (const ChunkAccum& acc : accum) base += acc.base[ni];
    for (size_t yi = 0; yi < ny; ++yi) {
      Complex shifted = 0.0;
      for (const ChunkAccum& acc : accum) shifted += acc.shifted[yi * nm + ni];
      const Complex diff = base - shifted;  // int fhat c_n (1 - e^{ity})
      if (std::abs(diff.imag()) > kImagTol)
        raise(Errc::quadrature_imag_residue, "imaginary residue " + std::to_string(diff.imag()) +
                                                 " at n = " + std::to_string(ni + 1));
      out[yi].terms[ni] = std::abs(diff.real());
      out[yi].value += out[yi].terms[ni];
    }
  }
  return out;
}

PotentialKernelSum potential_kernel_sum(const SymbolicSystem& sys, const Observable& obs,
                                        const SmoothingKernel& kern, double y, int n_max,
                                        int quad_points) {
  const double ys[1] = {y};
  return potential_kernel_sums(sys, obs, kern, ys, n_max, quad_points)[0];
}

}  // namespace shiftspec
