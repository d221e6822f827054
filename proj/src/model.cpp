#include "shiftspec/model.hpp"

#include <cmath>
#include <string>

namespace shiftspec {

namespace {

constexpr double kRowSumTol = 1e-12;
constexpr double kStationaryTol = 1e-13;
constexpr int kEigenCap = 100000;

Incidence support_of(const Mat& q) {
  Incidence a(q.n);
  for (int i = 0; i < q.n; ++i)
    for (int j = 0; j < q.n; ++j) a(i, j) = q(i, j) > 0.0 ? 1 : 0;
  return a;
}

void check_row_stochastic(const Mat& q) {
  for (int i = 0; i < q.n; ++i) {
    double s = 0.0;
    for (int j = 0; j < q.n; ++j) {
      if (q(i, j) < 0.0)
        raise(Errc::validation_error, "negative kernel entry in row " + std::to_string(i));
      s += q(i, j);
    }
    if (std::abs(s - 1.0) > kRowSumTol)
      raise(Errc::validation_error,
            "kernel row " + std::to_string(i) + " sums to " + std::to_string(s));
  }
}

// Solve pi Q = pi, sum pi = 1 by Gaussian elimination on (Q^T - I) with the
// last equation replaced by the normalization row.
Vec solve_stationary(const Mat& q) {
  const int d = q.n;
  std::vector<double> m(static_cast<size_t>(d) * (d + 1), 0.0);
  auto at = [&](int i, int j) -> double& { return m[static_cast<size_t>(i) * (d + 1) + j]; };
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) at(i, j) = q(j, i) - (i == j ? 1.0 : 0.0);
  for (int j = 0; j < d; ++j) at(d - 1, j) = 1.0;
  at(d - 1, d) = 1.0;

  for (int col = 0; col < d; ++col) {
    int piv = col;
    for (int r = col + 1; r < d; ++r)
      if (std::abs(at(r, col)) > std::abs(at(piv, col))) piv = r;
    if (std::abs(at(piv, col)) < 1e-300)
      raise(Errc::not_primitive, "singular stationary system");
    if (piv != col)
      for (int j = col; j <= d; ++j) std::swap(at(piv, j), at(col, j));
    for (int r = 0; r < d; ++r) {
      if (r == col) continue;
      const double f = at(r, col) / at(col, col);
      if (f == 0.0) continue;
      for (int j = col; j <= d; ++j) at(r, j) -= f * at(col, j);
    }
  }
  Vec pi(d);
  for (int i = 0; i < d; ++i) pi[i] = at(i, d) / at(i, i);
  return pi;
}

double stationary_residual(const Mat& q, const Vec& pi) {
  double res = 0.0;
  double total = 0.0;
  for (int j = 0; j < q.n; ++j) {
    double s = 0.0;
    for (int i = 0; i < q.n; ++i) s += pi[i] * q(i, j);
    res = std::max(res, std::abs(s - pi[j]));
    total += pi[j];
  }
  return std::max(res, std::abs(total - 1.0));
}

}  // namespace

int check_primitive(const Incidence& a) {
  const int d = a.d;
  if (d < 1) raise(Errc::validation_error, "empty alphabet");
  for (int i = 0; i < d; ++i) {
    bool row = false, col = false;
    for (int j = 0; j < d; ++j) {
      row |= a(i, j) != 0;
      col |= a(j, i) != 0;
    }
    if (!row) raise(Errc::empty_row_or_column, "state " + std::to_string(i) + " has no successor");
    if (!col) raise(Errc::empty_row_or_column, "state " + std::to_string(i) + " has no predecessor");
  }

  const int bound = d * d - 2 * d + 2;
  std::vector<uint8_t> power(a.bits);
  auto all_positive = [&] {
    for (uint8_t b : power)
      if (!b) return false;
    return true;
  };
  for (int n0 = 1; n0 <= bound; ++n0) {
    if (all_positive()) return n0;
    std::vector<uint8_t> next(static_cast<size_t>(d) * d, 0);
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k) {
        if (!power[static_cast<size_t>(i) * d + k]) continue;
        for (int j = 0; j < d; ++j)
          if (a(k, j)) next[static_cast<size_t>(i) * d + j] = 1;
      }
    power.swap(next);
  }
  raise(Errc::not_primitive,
        "no positive power within the Wielandt bound " + std::to_string(bound));
}

Vec stationary_distribution(const Mat& q) {
  check_row_stochastic(q);
  check_primitive(support_of(q));
  Vec pi = solve_stationary(q);

  // A few power-iteration refinements mop up elimination round-off.
  for (int iter = 0; iter < 64 && stationary_residual(q, pi) > kStationaryTol; ++iter) {
    Vec next(q.n, 0.0);
    for (int i = 0; i < q.n; ++i)
      for (int j = 0; j < q.n; ++j) next[j] += pi[i] * q(i, j);
    double s = 0.0;
    for (double x : next) s += x;
    for (double& x : next) x /= s;
    pi.swap(next);
  }
  if (stationary_residual(q, pi) > kStationaryTol)
    raise(Errc::nonconvergent_eigen, "stationary vector residual above tolerance");
  for (double x : pi)
    if (!(x > 0.0)) raise(Errc::not_primitive, "stationary vector not strictly positive");
  return pi;
}

SymbolicSystem make_system(const Incidence& a, const Mat& q) {
  if (a.d != q.n) raise(Errc::validation_error, "incidence and kernel dimensions differ");
  for (int i = 0; i < q.n; ++i)
    for (int j = 0; j < q.n; ++j)
      if (q(i, j) > 0.0 && !a(i, j))
        raise(Errc::validation_error, "kernel positive on forbidden edge (" +
                                          std::to_string(i) + "," + std::to_string(j) + ")");
  check_row_stochastic(q);
  check_primitive(a);
  SymbolicSystem sys;
  sys.d = q.n;
  sys.incidence = a;
  sys.kernel = q;
  sys.stationary = stationary_distribution(q);
  return sys;
}

SymbolicSystem gibbs_from_potential(const Incidence& a, const Potential& pot) {
  const int d = a.d;
  if (pot.values.n != d) raise(Errc::validation_error, "potential dimension mismatch");
  check_primitive(a);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (a(i, j) && !std::isfinite(pot.values(i, j)))
        raise(Errc::validation_error, "non-finite potential entry");

  Mat m(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (a(i, j)) m(i, j) = std::exp(pot.values(i, j));

  // Dominant eigenpair of the positive matrix by power iteration.
  Vec h(d, 1.0);
  double rho = 0.0;
  bool converged = false;
  for (int iter = 0; iter < kEigenCap; ++iter) {
    Vec next = matvec(m, h);
    double norm = 0.0;
    for (double x : next) norm += std::abs(x);
    for (double& x : next) x /= norm;
    double dist = 0.0;
    for (int i = 0; i < d; ++i) dist = std::max(dist, std::abs(next[i] - h[i]));
    h.swap(next);
    rho = norm;
    if (dist <= 1e-15) {
      converged = true;
      break;
    }
  }
  if (!converged) raise(Errc::nonconvergent_eigen, "Perron eigenvector iteration did not settle");

  Mat q(d);
  for (int i = 0; i < d; ++i) {
    double rowsum = 0.0;
    for (int j = 0; j < d; ++j) {
      q(i, j) = a(i, j) ? m(i, j) * h[j] / (rho * h[i]) : 0.0;
      rowsum += q(i, j);
    }
    for (int j = 0; j < d; ++j) q(i, j) /= rowsum;
  }
  return make_system(a, q);
}

double edge_mean(const SymbolicSystem& sys, const Mat& values) {
  double mean = 0.0;
  for (int i = 0; i < sys.d; ++i)
    for (int j = 0; j < sys.d; ++j)
      if (sys.incidence(i, j)) mean += sys.stationary[i] * sys.kernel(i, j) * values(i, j);
  return mean;
}

Observable center_observable(const SymbolicSystem& sys, const Mat& raw) {
  if (raw.n != sys.d) raise(Errc::validation_error, "observable dimension mismatch");
  const double mean = edge_mean(sys, raw);
  Observable obs;
  obs.values = Mat(sys.d);
  for (int i = 0; i < sys.d; ++i)
    for (int j = 0; j < sys.d; ++j)
      obs.values(i, j) = sys.incidence(i, j) ? raw(i, j) - mean : 0.0;
  obs.centered = true;
  return obs;
}

}  // namespace shiftspec
