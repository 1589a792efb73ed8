#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "lpp/opuc.hpp"
#include "lpp/symbols.hpp"

namespace lpp {

/// K_k(z, w) = (z^{-k} w^k - psi(z) psi(w)^{-1}) / (2 pi i (z - w)) on the unit
/// circle, with psi = phi_+ / phi_- from the symbol's plus/minus factors
/// (phi_+(0) = 1, phi_-(inf) = 1). For e^{t(z+1/z)}, psi = e^{t(z - 1/z)}.
struct IntegrableKernelSpec {
  int k = 0;
  SymbolSpec symbol;
  int nodes = 128;

  static IntegrableKernelSpec square(double t, int k, int nodes = 128);

  std::complex<double> psi(std::complex<double> z) const;
  /// max over nodes of |phi_+ phi_- - phi|; 0 up to rounding by construction.
  double factorization_defect() const;
  void validate() const;
};

/// Nystrom matrix A_jl = K(z_j, z_l) w_l, z_j = e^{2 pi i j/m}, w_l = 2 pi i z_l / m.
/// The diagonal holds the limit K(w, w) = -(k/w + psi'(w)/psi(w)) / (2 pi i).
Eigen::MatrixXcd kernel_matrix(const IntegrableKernelSpec& spec, Execution exec = Execution::Parallel);

/// log det(1 - A), by partial-pivoting LU. Throws NumericalError when the
/// factorization is near-singular (1 in the spectrum).
std::complex<double> fredholm_log_det(const IntegrableKernelSpec& spec,
                                      Execution exec = Execution::Parallel);

struct FredholmRow {
  int k = 0;
  double log_det = 0.0;       // Re log det(1 - K_k)
  double log_det_imag = 0.0;  // |Im|, reduced mod 2 pi
  // log D_k - log D_inf - (-k log 2 + log det(1 - K_k))
  double product_residual = 0.0;
  // M_11(0) = -Y_21(0;k)/2 = 1/(2 N_{k-1}) vs det(1 - K_{k-1}) / det(1 - K_k); k >= 1
  double ratio_residual = 0.0;
};

struct FredholmReport {
  double t = 0.0;
  int nodes = 0;
  double log_d_inf = 0.0;
  std::vector<FredholmRow> rows;  // k = 0..k_max
  double max_product_residual = 0.0;
  double max_ratio_residual = 0.0;
  double max_imag = 0.0;
};

/// Toeplitz-Fredholm identities for the square symbol. Requires opuc built
/// from e^{t(z+1/z)} with cutoff >= k_max.
FredholmReport identity_checks(double t, int k_max, const OpucData& opuc, int nodes = 128);

}  // namespace lpp
