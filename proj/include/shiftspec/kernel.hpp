#pragma once

#include <functional>
#include <span>
#include <vector>

#include "shiftspec/model.hpp"
#include "shiftspec/spectral.hpp"

namespace shiftspec {

// Smoothing function f with Fourier transform supported on [-1, 1] under the
// convention f(x) = integral of fhat(t) e^{itx} dt. f is symmetric and
// nonnegative; mass = 2 pi fhat(0).
struct SmoothingKernel {
  std::function<double(double)> fhat;
  std::function<double(double)> f;
  std::function<double(double)> primitive;  // integral of f from 0 to x
  double mass = 0.0;
  // True when f(u) = 2 (1 - cos u) / u^2 exactly; lets bulk evaluators reuse
  // cached cos/sin through the angle-difference identity (error <= ~2e-14).
  bool fejer_form = false;

  double integral(double a, double b) const { return primitive(b) - primitive(a); }
  double mass_tail(double u) const { return 0.5 * mass - primitive(u); }   // int_u^inf f
  double mass_window(double u) const { return 2.0 * primitive(u); }        // int_{-u}^{u} f
};

// fhat(t) = max(0, 1 - |t|), f(x) = 2 (1 - cos x) / x^2, mass = 2 pi.
SmoothingKernel fejer_kernel();

// Si(x) = integral of sin(u)/u from 0 to x. Power series for small |x|,
// complex continued fraction otherwise.
double sine_integral(double x);

struct QuadratureGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Composite Simpson rule; points must be odd and >= 3.
QuadratureGrid simpson_grid(int points, double lo, double hi);

constexpr int kDefaultQuadPoints = 4097;  // 2^12 + 1

// m(f(S_n - x)) = int fhat(t) m(P^n(t) 1) e^{-itx} dt over [-1, 1], with the
// operator power applied to the constant vector node by node.
double expected_kernel_density(const SymbolicSystem& sys, const Observable& obs,
                               const SmoothingKernel& kern, long n, double x,
                               int quad_points = kDefaultQuadPoints);

// Integral of |lambda(t)|^n over (-delta, delta).
double lambda_l1_norm(const SymbolicSystem& sys, const Observable& obs, long n, double delta,
                      int quad_points = kDefaultQuadPoints);

struct PotentialKernelSum {
  double y = 0.0;
  double value = 0.0;          // sum of |m(f(S_n) - f(S_n + y))| for n = 1..N
  std::vector<double> terms;   // terms[i] is the increment at n = i + 1
  double partial(int n) const;              // sum of the first n terms
  double max_term_beyond(int n0) const;     // max increment with n > n0
};

PotentialKernelSum potential_kernel_sum(const SymbolicSystem& sys, const Observable& obs,
                                        const SmoothingKernel& kern, double y, int n_max,
                                        int quad_points = kDefaultQuadPoints);

// Same sweep sharing one pass of operator powers across all offsets.
std::vector<PotentialKernelSum> potential_kernel_sums(const SymbolicSystem& sys,
                                                      const Observable& obs,
                                                      const SmoothingKernel& kern,
                                                      std::span<const double> ys, int n_max,
                                                      int quad_points = kDefaultQuadPoints);

}  // namespace shiftspec
