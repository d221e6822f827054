#pragma once

#include <span>
#include <vector>

#include "shiftspec/model.hpp"

namespace shiftspec {

// The twisted transfer operator P(t) as a matrix acting on functions of the
// current symbol. At t = 0 this is the transfer operator itself: it fixes
// the constant vector and preserves the stationary mean.
struct CharOperatorSample {
  double t = 0.0;
  CMat m;
};

// Dominant eigendata of P(t). eta is normalized by m(eta) = 1 (mean against
// the stationary vector), xi by <xi, eta> = 1. gap_ratio is the spectral
// radius of the remainder N(t) = P(t) - lambda <xi,.> eta divided by |lambda|.
struct EigenData {
  double t = 0.0;
  Complex lambda;
  CVec eta;
  CVec xi;
  double gap_ratio = 0.0;
};

struct VarianceReport {
  double v_gk = 0.0;   // autocovariance (Green-Kubo) series
  double v_fd = 0.0;   // -lambda''(0) by Richardson central differences
  double rel_err = 0.0;
};

struct AperiodicityScan {
  double max_rho = 0.0;
  double argmax_t = 0.0;
};

struct EigenCurve {
  std::vector<EigenData> samples;
  double fitted_c = 0.0;  // largest c with |lambda(t)| <= 1 - c t^2 on the grid
};

// Stationary mean m(v) = sum_x pi[x] v[x].
Complex stationary_mean(const Vec& pi, const CVec& v);

CharOperatorSample char_operator(const SymbolicSystem& sys, const Observable& obs, double t);

// E[e^{itS_n}] two ways: full path enumeration (the oracle; feasible while
// d^(n+1) <= 1e7) and repeated application of P(t) to the constant vector.
Complex brute_force_charfn(const SymbolicSystem& sys, const Observable& obs, int n, double t);
Complex operator_charfn(const SymbolicSystem& sys, const Observable& obs, long n, double t);

EigenData dominant_eigen(const CharOperatorSample& sample, const Vec& pi);

// Gelfand estimate rho ~ ||M^(2^k)||^(1/2^k), max-row-sum norm, k <= 12.
double spectral_radius(const CMat& m);

// Max of rho(P(t)) over the grid t_lo, t_lo+step, ..., t_hi, both signs of t.
// max_rho >= 1 - 1e-8 signals a lattice-type observable.
AperiodicityScan aperiodicity_scan(const SymbolicSystem& sys, const Observable& obs, double t_lo,
                                   double t_hi, double step);

EigenCurve eigenvalue_curve(const SymbolicSystem& sys, const Observable& obs,
                            std::span<const double> ts);

VarianceReport variance(const SymbolicSystem& sys, const Observable& obs);

// Max norms of N^n(t) applied to the constant vector, n = 1..n_max.
std::vector<double> remainder_decay(const SymbolicSystem& sys, const Observable& obs, double t,
                                    int n_max);

// Max norm of Re((eta(h) - eta(-h)) / 2h); near zero when eta'(0) is purely
// imaginary.
double eta_prime_check(const SymbolicSystem& sys, const Observable& obs, double h);

// Largest dyadic delta <= 0.5 such that the dominant eigen computation at
// t = +-delta converges on the branch through lambda(0) = 1 with
// gap_ratio <= 0.95.
double find_perturbation_window(const SymbolicSystem& sys, const Observable& obs);

}  // namespace shiftspec
