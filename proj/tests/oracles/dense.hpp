#pragma once

// Dense-matrix oracles: determinants and Gram-Schmidt on Toeplitz moment
// matrices, independent of the Levinson recursion.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

using Mp = boost::multiprecision::cpp_bin_float_50;

// log |det A| of a row-major n x n matrix by partially pivoted elimination.
template <class Real>
Real log_abs_det(std::vector<Real> a, int n) {
  using std::abs;
  using std::log;
  Real acc(0);
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (abs(a[r * n + c]) > abs(a[piv * n + c])) piv = r;
    if (piv != c)
      for (int j = 0; j < n; ++j) std::swap(a[c * n + j], a[piv * n + j]);
    const Real p = a[c * n + c];
    acc += log(abs(p));
    for (int r = c + 1; r < n; ++r) {
      const Real f = a[r * n + c] / p;
      for (int j = c; j < n; ++j) a[r * n + j] -= f * a[c * n + j];
    }
  }
  return acc;
}

// Toeplitz matrix (phi_{j-k}) from phi(j) for |j| < n.
template <class Real>
std::vector<Real> toeplitz(const std::function<Real(int)>& phi, int n) {
  std::vector<Real> a(static_cast<std::size_t>(n * n));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) a[j * n + k] = phi(j - k);
  return a;
}

// Coefficients of the monic pi_k with <pi_k, z^j> = sum_i c_i phi_{j-i} = 0
// for j < k, by solving the k x k linear system directly.
inline std::vector<double> monic_opuc(const std::function<double(int)>& phi, int k) {
  std::vector<Mp> a(static_cast<std::size_t>(k * k)), rhs(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < k; ++i) a[j * k + i] = phi(j - i);
    rhs[j] = -Mp(phi(j - k));
  }
  for (int c = 0; c < k; ++c) {
    int piv = c;
    for (int r = c + 1; r < k; ++r)
      if (abs(a[r * k + c]) > abs(a[piv * k + c])) piv = r;
    if (piv != c) {
      for (int j = 0; j < k; ++j) std::swap(a[c * k + j], a[piv * k + j]);
      std::swap(rhs[c], rhs[piv]);
    }
    for (int r = c + 1; r < k; ++r) {
      const Mp f = a[r * k + c] / a[c * k + c];
      for (int j = c; j < k; ++j) a[r * k + j] -= f * a[c * k + j];
      rhs[r] -= f * rhs[c];
    }
  }
  std::vector<Mp> x(static_cast<std::size_t>(k));
  for (int r = k - 1; r >= 0; --r) {
    Mp s = rhs[r];
    for (int j = r + 1; j < k; ++j) s -= a[r * k + j] * x[j];
    x[r] = s / a[r * k + r];
  }
  std::vector<double> c(static_cast<std::size_t>(k + 1));
  for (int i = 0; i < k; ++i) c[i] = static_cast<double>(x[i]);
  c[k] = 1.0;
  return c;
}

inline std::complex<double> poly(const std::vector<double>& c, std::complex<double> z) {
  std::complex<double> v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * z + *it;
  return v;
}

}  // namespace oracle
