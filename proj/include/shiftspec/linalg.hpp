#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace shiftspec {

using Complex = std::complex<double>;
using Vec = std::vector<double>;
using CVec = std::vector<Complex>;

// Dense square matrix, row-major. Alphabet sizes are small (single digits),
// so everything here is plain loops.
struct Mat {
  int n = 0;
  std::vector<double> a;
  Mat() = default;
  explicit Mat(int n_, double fill = 0.0) : n(n_), a(static_cast<size_t>(n_) * n_, fill) {}
  double& operator()(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
  double operator()(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
};

struct CMat {
  int n = 0;
  CVec a;
  CMat() = default;
  explicit CMat(int n_, Complex fill = {}) : n(n_), a(static_cast<size_t>(n_) * n_, fill) {}
  Complex& operator()(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
  Complex operator()(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
};

inline Vec matvec(const Mat& m, const Vec& v) {
  Vec out(m.n, 0.0);
  for (int i = 0; i < m.n; ++i) {
    double s = 0.0;
    for (int j = 0; j < m.n; ++j) s += m(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

inline void matvec_inplace(const CMat& m, const CVec& v, CVec& out) {
  for (int i = 0; i < m.n; ++i) {
    Complex s = 0.0;
    const Complex* row = &m.a[static_cast<size_t>(i) * m.n];
    for (int j = 0; j < m.n; ++j) s += row[j] * v[j];
    out[i] = s;
  }
}

inline CVec matvec(const CMat& m, const CVec& v) {
  CVec out(m.n);
  matvec_inplace(m, v, out);
  return out;
}

// w^T M for a covector w.
inline CVec vecmat(const CVec& w, const CMat& m) {
  CVec out(m.n, Complex{});
  for (int i = 0; i < m.n; ++i) {
    const Complex wi = w[i];
    const Complex* row = &m.a[static_cast<size_t>(i) * m.n];
    for (int j = 0; j < m.n; ++j) out[j] += wi * row[j];
  }
  return out;
}

inline Mat matmul(const Mat& x, const Mat& y) {
  Mat out(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int k = 0; k < x.n; ++k) {
      const double xik = x(i, k);
      if (xik == 0.0) continue;
      for (int j = 0; j < x.n; ++j) out(i, j) += xik * y(k, j);
    }
  return out;
}

inline CMat matmul(const CMat& x, const CMat& y) {
  CMat out(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int k = 0; k < x.n; ++k) {
      const Complex xik = x(i, k);
      for (int j = 0; j < x.n; ++j) out(i, j) += xik * y(k, j);
    }
  return out;
}

inline double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double max_abs(const CVec& v) {
  double m = 0.0;
  for (const Complex& x : v) m = std::max(m, std::abs(x));
  return m;
}

// Max row sum of absolute values (operator norm for the max norm).
inline double inf_norm(const CMat& m) {
  double best = 0.0;
  for (int i = 0; i < m.n; ++i) {
    double s = 0.0;
    for (int j = 0; j < m.n; ++j) s += std::abs(m(i, j));
    best = std::max(best, s);
  }
  return best;
}

inline Complex dot(const CVec& w, const CVec& v) {
  Complex s = 0.0;
  for (size_t i = 0; i < v.size(); ++i) s += w[i] * v[i];
  return s;
}

}  // namespace shiftspec
