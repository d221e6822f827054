#pragma once

#include <cstdint>
#include <vector>

#include "shiftspec/error.hpp"
#include "shiftspec/linalg.hpp"

namespace shiftspec {

// Allowed-transition structure of a finite subshift.
struct Incidence {
  int d = 0;
  std::vector<uint8_t> bits;  // row-major d*d, entries 0/1
  Incidence() = default;
  explicit Incidence(int d_) : d(d_), bits(static_cast<size_t>(d_) * d_, 0) {}
  uint8_t operator()(int i, int j) const { return bits[static_cast<size_t>(i) * d + j]; }
  uint8_t& operator()(int i, int j) { return bits[static_cast<size_t>(i) * d + j]; }

  static Incidence full(int d) {
    Incidence a(d);
    for (auto& b : a.bits) b = 1;
    return a;
  }
};

// Finite-alphabet shift with a stationary 1-step Markov measure. Immutable
// after construction; all invariants are checked by make_system.
struct SymbolicSystem {
  int d = 0;
  Incidence incidence;
  Mat kernel;      // row-stochastic Q, Q(x,y) > 0 only on allowed edges
  Vec stationary;  // pi, pi Q = pi, sum 1, strictly positive
};

// Real-valued function of an edge (pair of consecutive symbols).
struct Observable {
  Mat values;  // read only on allowed edges; zero elsewhere
  bool centered = false;
};

struct Potential {
  Mat values;  // finite entries, read only on allowed edges
};

// Least n0 with all entries of the boolean power A^n0 positive. Searches up
// to the Wielandt bound d^2 - 2d + 2 and rejects periodic/reducible inputs.
int check_primitive(const Incidence& a);

// Unique pi with pi Q = pi, sum pi = 1. Requires the support of Q to be
// primitive; residual of the returned vector is <= 1e-13.
Vec stationary_distribution(const Mat& q);

SymbolicSystem make_system(const Incidence& a, const Mat& q);

// Ruelle-Perron-Frobenius normalization of exp(potential) restricted to the
// allowed edges: Q(x,y) = M(x,y) h(y) / (rho h(x)) with (rho, h) the dominant
// eigenpair of M(x,y) = A(x,y) exp(pot(x,y)).
SymbolicSystem gibbs_from_potential(const Incidence& a, const Potential& pot);

// Mean of an edge function under the stationary edge measure pi(x) Q(x,y).
double edge_mean(const SymbolicSystem& sys, const Mat& values);

Observable center_observable(const SymbolicSystem& sys, const Mat& raw);

}  // namespace shiftspec
