#pragma once

#include <complex>
#include <string>
#include <vector>

#include "lpp/policy.hpp"
#include "lpp/symbols.hpp"

namespace lpp {

/// Reflection coefficients and norms of the monic OPUC of a symbol.
///
/// b(k) = -pi_k(0). For symbols without z -> 1/z symmetry the Toeplitz matrix
/// is not symmetric and the left/right families differ; the dual family
/// pi^_k (orthogonal from the other side) has b^(k) = -pi^_k(0), and the norm
/// recurrence reads N_k = (1 - b(k) b^(k)) N_{k-1}. For symmetric symbols
/// b^ = b.
struct OpucData {
  std::vector<double> reflection;       // b(k) at [k-1], k = 1..K
  std::vector<double> dual_reflection;  // b^(k) at [k-1]
  std::vector<double> log_norms;        // log N_k at [k], k = 0..K
  int cutoff = 0;
  SymbolSpec symbol;
  std::string method;  // Fourier path: "quadrature" or "series"
  int nodes = 0;
  Precision precision = Precision::Standard;

  double b(int k) const;
  double b_dual(int k) const;
  double log_norm(int k) const;
};

/// Levinson recursion on Fourier coefficients (long double arithmetic).
/// Requires coeffs.half_width >= K. Throws NumericalError at breakdown,
/// i.e. 1 - b(k) b^(k) <= 2e-13 or a non-positive norm.
OpucData levinson(const FourierTable& coeffs, int K);

/// Production path: series Fourier coefficients and recursion at the
/// requested precision. Auto resolves through resolve_precision.
OpucData levinson(const SymbolSpec& symbol, int K, Precision precision = Precision::Auto);

/// Standard unless the exponential part of the symbol makes the recursion
/// cancel more digits than long double carries.
Precision resolve_precision(const SymbolSpec& symbol, Precision requested);

/// log D_ell = sum_{k<ell} log N_k, D_0 = 1. Requires ell <= cutoff + 1.
double toeplitz_log_det(const OpucData& data, int ell);

/// A complex value held as mantissa * exp(log_scale).
struct ScaledPair {
  std::complex<double> pi;
  std::complex<double> pi_star;
  double log_scale = 0.0;

  std::complex<double> pi_value() const;
  std::complex<double> pi_star_value() const;
};

/// (pi_k(z), pi*_k(z)) by the Szego recurrence, in scaled form.
ScaledPair eval_pi(const OpucData& data, int k, std::complex<double> z);

struct YCorner {
  double a = 0.0;  // -1 / N_{k-1}
  double b = 0.0;  // -pi_k(0)
  double b_dual = 0.0;
  double d = 0.0;  // (1 - b b^) / a
  int k = 0;

  double unimodular_defect() const { return a * d + b * b_dual - 1.0; }
};

YCorner y_corner(const OpucData& data, int k);

/// (k/t) b(k) + (b(k-1) + b(k+1)) (1 - b(k)^2); vanishes for e^{t(z+1/z)}.
double dpii_residual(const OpucData& data, double t, int k);

struct RecurrenceReport {
  double a_deviation = 0.0;  // max_k |a(k) - (1 - b b^) a(k+1)| / |a(k)|
  double d_deviation = 0.0;  // max_k |d(k) - (1 - b b^) d(k-1)| / |d(k)|
  double unimodular_deviation = 0.0;
  int worst_a_k = 0;
  int worst_d_k = 0;
};

/// The norms are accumulated from inner products inside the recursion, so
/// these relations are an independent consistency check.
RecurrenceReport recurrence_checks(const OpucData& data);

}  // namespace lpp
