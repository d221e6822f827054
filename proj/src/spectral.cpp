#include "shiftspec/spectral.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace shiftspec {

namespace {

constexpr int kIterCap = 100000;
constexpr double kIterTol = 1e-12;
constexpr double kWindowGapLimit = 0.95;
constexpr double kWindowBranchFloor = 0.7;

CMat remainder_matrix(const CharOperatorSample& sample, const EigenData& eig) {
  const int d = sample.m.n;
  CMat n(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) n(i, j) = sample.m(i, j) - eig.lambda * eig.eta[i] * eig.xi[j];
  return n;
}

}  // namespace

Complex stationary_mean(const Vec& pi, const CVec& v) {
  Complex s = 0.0;
  for (size_t i = 0; i < pi.size(); ++i) s += pi[i] * v[i];
  return s;
}

CharOperatorSample char_operator(const SymbolicSystem& sys, const Observable& obs, double t) {
  if (!obs.centered) raise(Errc::uncentered_observable, "observable must be centered first");
  const int d = sys.d;
  CharOperatorSample out;
  out.t = t;
  out.m = CMat(d);
  for (int y = 0; y < d; ++y)
    for (int x = 0; x < d; ++x) {
      if (!sys.incidence(x, y)) continue;
      const double w = sys.stationary[x] * sys.kernel(x, y) / sys.stationary[y];
      const double phase = t * obs.values(x, y);
      out.m(y, x) = w * Complex(std::cos(phase), std::sin(phase));
    }
  return out;
}

Complex brute_force_charfn(const SymbolicSystem& sys, const Observable& obs, int n, double t) {
  if (n < 0) raise(Errc::invalid_grid, "negative step count");
  const double paths = std::pow(static_cast<double>(sys.d), n + 1);
  if (paths > 1e7) raise(Errc::too_large, "path enumeration would exceed 1e7 states");

  Complex acc = 0.0;
  // Depth-first walk over admissible paths carrying probability and the
  // running Birkhoff sum.
  struct Frame {
    int state;
    double prob;
    double sum;
  };
  std::vector<Frame> stack;
  stack.reserve(static_cast<size_t>(n) + 2);
  for (int x0 = 0; x0 < sys.d; ++x0) {
    stack.push_back({x0, sys.stationary[x0], 0.0});
    std::vector<int> depth_next(static_cast<size_t>(n) + 1, 0);
    while (!stack.empty()) {
      const int depth = static_cast<int>(stack.size()) - 1;
      if (depth == n) {
        const Frame& f = stack.back();
        acc += f.prob * Complex(std::cos(t * f.sum), std::sin(t * f.sum));
        stack.pop_back();
        continue;
      }
      int& j = depth_next[depth];
      const Frame f = stack.back();
      bool descended = false;
      while (j < sys.d) {
        const int y = j++;
        if (!sys.incidence(f.state, y) || sys.kernel(f.state, y) == 0.0) continue;
        depth_next[depth + 1] = 0;
        stack.push_back({y, f.prob * sys.kernel(f.state, y), f.sum + obs.values(f.state, y)});
        descended = true;
        break;
      }
      if (!descended) {
        depth_next[depth] = 0;
        stack.pop_back();
      }
    }
  }
  return acc;
}

Complex operator_charfn(const SymbolicSystem& sys, const Observable& obs, long n, double t) {
  const CharOperatorSample sample = char_operator(sys, obs, t);
  CVec v(sys.d, Complex(1.0, 0.0));
  CVec tmp(sys.d);
  for (long k = 0; k < n; ++k) {
    matvec_inplace(sample.m, v, tmp);
    v.swap(tmp);
  }
  return stationary_mean(sys.stationary, v);
}

EigenData dominant_eigen(const CharOperatorSample& sample, const Vec& pi) {
  const int d = sample.m.n;
  EigenData out;
  out.t = sample.t;

  CVec v(d, Complex(1.0, 0.0));
  CVec next(d);
  bool converged = false;
  for (int iter = 0; iter < kIterCap; ++iter) {
    matvec_inplace(sample.m, v, next);
    const Complex mean = stationary_mean(pi, next);
    if (std::abs(mean) < 1e-280)
      raise(Errc::nonconvergent_eigen, "iterate became orthogonal to the stationary mean");
    double dist = 0.0;
    for (int i = 0; i < d; ++i) {
      next[i] /= mean;
      dist = std::max(dist, std::abs(next[i] - v[i]));
    }
    v.swap(next);
    if (dist <= kIterTol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    raise(Errc::nonconvergent_eigen,
          "power iteration at t = " + std::to_string(sample.t) + " hit the iteration cap");
  out.eta = v;

  // Adjoint iteration for the eigenfunctional.
  CVec w(pi.begin(), pi.end());
  converged = false;
  for (int iter = 0; iter < kIterCap; ++iter) {
    CVec wn = vecmat(w, sample.m);
    const Complex scale = dot(wn, out.eta);
    if (std::abs(scale) < 1e-280)
      raise(Errc::nonconvergent_eigen, "adjoint iterate orthogonal to the eigenvector");
    double dist = 0.0;
    for (int i = 0; i < d; ++i) {
      wn[i] /= scale;
      dist = std::max(dist, std::abs(wn[i] - w[i]));
    }
    w.swap(wn);
    if (dist <= kIterTol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    raise(Errc::nonconvergent_eigen,
          "adjoint iteration at t = " + std::to_string(sample.t) + " hit the iteration cap");
  out.xi = w;

  // <xi, M eta> with <xi, eta> = 1 refines the eigenvalue estimate.
  out.lambda = dot(out.xi, matvec(sample.m, out.eta));
  const double lam_abs = std::abs(out.lambda);
  if (lam_abs < 1e-280) raise(Errc::nonconvergent_eigen, "dominant eigenvalue collapsed to zero");
  out.gap_ratio = spectral_radius(remainder_matrix(sample, out)) / lam_abs;
  return out;
}

double spectral_radius(const CMat& m) {
  const int d = m.n;
  if (d == 1) return std::abs(m(0, 0));
  CMat power = m;
  double log_scale = 0.0;  // log of the factor divided out so far
  double prev = -1.0;
  // Every level is an upper bound on rho, so the running minimum only
  // tightens the estimate. The k >= 2 guard skips the flat start that
  // zero-pattern matrices produce (||M|| = ||M^2|| = 1 exactly).
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 12; ++k) {
    const double norm = inf_norm(power);
    if (!std::isfinite(norm)) raise(Errc::overflow, "matrix norm overflowed during squaring");
    if (norm == 0.0) return 0.0;
    const double est = std::exp((std::log(norm) + log_scale) / std::pow(2.0, k));
    best = std::min(best, est);
    if (k >= 2 && std::abs(est - prev) <= 1e-6 * std::max(est, 1e-300)) return best;
    prev = est;
    if (k == 12) break;
    for (auto& z : power.a) z /= norm;
    log_scale = 2.0 * (log_scale + std::log(norm));
    power = matmul(power, power);
  }
  return best;
}

AperiodicityScan aperiodicity_scan(const SymbolicSystem& sys, const Observable& obs, double t_lo,
                                   double t_hi, double step) {
  if (!(t_lo > 0.0) || !(t_hi > t_lo) || !(step > 0.0))
    raise(Errc::invalid_grid, "need 0 < t_lo < t_hi and step > 0");
  AperiodicityScan out;
  out.max_rho = -1.0;
  const long count = static_cast<long>(std::floor((t_hi - t_lo) / step + 1e-9)) + 1;
  for (long k = 0; k < count; ++k) {
    const double t = t_lo + static_cast<double>(k) * step;
    for (const double sign : {1.0, -1.0}) {
      const double rho = spectral_radius(char_operator(sys, obs, sign * t).m);
      if (rho > out.max_rho) {
        out.max_rho = rho;
        out.argmax_t = sign * t;
      }
    }
  }
  return out;
}

EigenCurve eigenvalue_curve(const SymbolicSystem& sys, const Observable& obs,
                            std::span<const double> ts) {
  EigenCurve out;
  out.samples.reserve(ts.size());
  double c = std::numeric_limits<double>::infinity();
  for (const double t : ts) {
    out.samples.push_back(dominant_eigen(char_operator(sys, obs, t), sys.stationary));
    if (t != 0.0) {
      const double abs_l = std::abs(out.samples.back().lambda);
      c = std::min(c, (1.0 - abs_l) / (t * t));
    }
  }
  out.fitted_c = std::isfinite(c) ? c : 0.0;
  return out;
}

VarianceReport variance(const SymbolicSystem& sys, const Observable& obs) {
  if (!obs.centered) raise(Errc::uncentered_observable, "observable must be centered first");
  const int d = sys.d;

  // Autocovariance series from pi, Q and matrix powers:
  //   v = Var(phi) + 2 sum_k u . Q^{k-1} w,
  // with u the stationary in-flow weighted by phi and w the conditional mean
  // of the next increment.
  double var0 = 0.0;
  Vec u(d, 0.0), w(d, 0.0);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) {
      if (!sys.incidence(x, y)) continue;
      const double p = sys.stationary[x] * sys.kernel(x, y);
      const double f = obs.values(x, y);
      var0 += p * f * f;
      u[y] += p * f;
      w[x] += sys.kernel(x, y) * f;
    }

  double v_gk = var0;
  Vec qw = w;
  bool converged = false;
  for (int k = 1; k <= 10000; ++k) {
    double cov = 0.0;
    for (int i = 0; i < d; ++i) cov += u[i] * qw[i];
    v_gk += 2.0 * cov;
    if (std::abs(cov) < 1e-14) {
      converged = true;
      break;
    }
    qw = matvec(sys.kernel, qw);
  }
  if (!converged) raise(Errc::nonconvergent_series, "autocovariance terms did not reach 1e-14");
  if (v_gk < 0.0 && v_gk > -1e-12 * std::max(var0, 1.0)) v_gk = 0.0;

  // -lambda''(0) by symmetric differences with one Richardson level. The
  // conjugation symmetry folds lambda(-h) into Re lambda(h).
  const double h = 1e-3;
  auto second_diff = [&](double step) {
    const Complex lam = dominant_eigen(char_operator(sys, obs, step), sys.stationary).lambda;
    return (2.0 * lam.real() - 2.0) / (step * step);
  };
  const double d_h = second_diff(h);
  const double d_h2 = second_diff(h / 2.0);
  const double lambda_pp = (4.0 * d_h2 - d_h) / 3.0;

  VarianceReport rep;
  rep.v_gk = v_gk;
  rep.v_fd = -lambda_pp;
  rep.rel_err = std::abs(rep.v_gk - rep.v_fd) / std::max(rep.v_gk, 1e-12);
  return rep;
}

std::vector<double> remainder_decay(const SymbolicSystem& sys, const Observable& obs, double t,
                                    int n_max) {
  const CharOperatorSample sample = char_operator(sys, obs, t);
  const EigenData eig = dominant_eigen(sample, sys.stationary);
  std::vector<double> norms;
  norms.reserve(n_max);
  CVec z(sys.d, Complex(1.0, 0.0));
  for (int n = 1; n <= n_max; ++n) {
    const CVec mz = matvec(sample.m, z);
    const Complex proj = dot(eig.xi, z);
    for (int i = 0; i < sys.d; ++i) z[i] = mz[i] - eig.lambda * proj * eig.eta[i];
    norms.push_back(max_abs(z));
  }
  return norms;
}

double eta_prime_check(const SymbolicSystem& sys, const Observable& obs, double h) {
  const EigenData plus = dominant_eigen(char_operator(sys, obs, h), sys.stationary);
  const EigenData minus = dominant_eigen(char_operator(sys, obs, -h), sys.stationary);
  double worst = 0.0;
  for (int i = 0; i < sys.d; ++i) {
    const Complex deriv = (plus.eta[i] - minus.eta[i]) / (2.0 * h);
    worst = std::max(worst, std::abs(deriv.real()));
  }
  return worst;
}

double find_perturbation_window(const SymbolicSystem& sys, const Observable& obs) {
  for (double delta = 0.5; delta >= 0x1p-20; delta *= 0.5) {
    bool ok = true;
    for (const double sign : {1.0, -1.0}) {
      try {
        const EigenData eig = dominant_eigen(char_operator(sys, obs, sign * delta), sys.stationary);
        // Guard against power iteration landing on the wrong branch once
        // the perturbed Perron eigenvalue is no longer dominant.
        if (eig.gap_ratio > kWindowGapLimit || std::abs(eig.lambda) < kWindowBranchFloor) {
          ok = false;
          break;
        }
      } catch (const Error& e) {
        if (e.code() != Errc::nonconvergent_eigen) throw;
        ok = false;
        break;
      }
    }
    if (ok) return delta;
  }
  raise(Errc::nonconvergent_eigen, "no usable perturbation window above 2^-20");
}

}  // namespace shiftspec
