#pragma once

#include <complex>
#include <string>
#include <vector>

#include "lpp/policy.hpp"

namespace lpp {

enum class ModelKind {
  PoissonSquare,      // (f) Poisson points in the square
  PoissonTriangle,    // triangle with diagonal source, via OPUC formula
  PoissonExternal,    // square with sources of rate alpha_+/- on the axes
  LatticeA,           // weak/weak, geometric weights
  LatticeB,           // weak-up/strict-right, Bernoulli weights
  LatticeC,           // strict/strict, geometric weights
  PoissonLinesD,      // Poisson lines, weakly-right
  PoissonLinesE,      // Poisson lines, strictly-right
  TrianglePoissonFS,  // (f-S): same law as PoissonTriangle, via O(l)
  SymmetricLatticeA,  // (a-S)
  SymmetricLatticeC,  // (c-S)
};

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);

/// Percolation model descriptor shared by the exact and Monte Carlo paths.
///
/// Lattice kinds read row weights q_i from `row_params` and column weights
/// q_j from `col_params`; M and N follow from the list sizes. The Poisson-line
/// kinds read the line rates from `row_params`. The symmetric lattices read
/// q_i from `row_params` and the diagonal parameter from `alpha`.
struct ModelSpec {
  ModelKind kind = ModelKind::PoissonSquare;
  double t = 0.0;
  double alpha = 0.0;
  double alpha_plus = 0.0;
  double alpha_minus = 0.0;
  std::vector<double> row_params;
  std::vector<double> col_params;
  int M = 0;
  int N = 0;

  static ModelSpec poisson_square(double t);
  static ModelSpec poisson_triangle(double t, double alpha);
  static ModelSpec poisson_external(double t, double alpha_plus, double alpha_minus);
  static ModelSpec lattice(ModelKind kind, std::vector<double> rows, std::vector<double> cols);
  static ModelSpec poisson_lines(ModelKind kind, double t, std::vector<double> rates);
  static ModelSpec symmetric_lattice(ModelKind kind, double alpha, std::vector<double> q);
};

/// Checks the parameter constraints of the model's catalog entry and fills in
/// M, N for lattice kinds. Throws ValidationError naming the violated constraint.
ModelSpec validated(ModelSpec model);

bool is_lattice(ModelKind kind);
bool is_orthogonal_group_model(ModelKind kind);

/// phi(z) = exp(a z + b/z) prod(1+q z) prod(1+q/z) prod(1-q z)^-1 prod(1-q/z)^-1
struct SymbolSpec {
  double exp_plus_t = 0.0;
  double exp_minus_t = 0.0;
  std::vector<double> zeros_plus;
  std::vector<double> zeros_minus;
  std::vector<double> poles_plus;
  std::vector<double> poles_minus;

  std::complex<double> operator()(std::complex<double> z) const;

  /// Value and logarithmic derivative of the plus/minus factors
  /// phi_+(z) (analytic inside, phi_+(0)=1) and phi_-(z) (analytic outside,
  /// phi_-(inf)=1).
  std::complex<double> plus_factor(std::complex<double> z) const;
  std::complex<double> minus_factor(std::complex<double> z) const;
  std::complex<double> plus_log_derivative(std::complex<double> z) const;
  std::complex<double> minus_log_derivative(std::complex<double> z) const;

  /// phi(z) = phi(1/z): the Toeplitz matrix is symmetric.
  bool reflection_symmetric() const;
  bool is_trivial() const;
  /// Every factor parameter is < 1, so log phi has zero winding on |z|=1.
  bool zero_winding() const;
  /// Throws ValidationError unless all parameters are nonnegative and all
  /// pole parameters lie in [0, 1).
  void validate() const;

  bool operator==(const SymbolSpec&) const = default;
};

/// Fourier coefficients phi_j, |j| <= half_width, with
/// phi_j = (1/2pi) int phi(e^{i theta}) e^{-i j theta} d theta.
struct FourierTable {
  std::vector<double> coeffs;  // coeffs[j + half_width]
  int half_width = 0;
  int nodes = 0;  // 0 for the series path
  SymbolSpec symbol;
  std::string method;  // "quadrature" or "series"

  double operator[](int j) const { return coeffs.at(static_cast<std::size_t>(j + half_width)); }
};

/// Symbol phi of the unitary-group (Toeplitz) representation of the model.
/// Triangle and external-source models return e^{t(z+1/z)}, whose OPUC enter
/// their exact formulas. Orthogonal-group lattices (a-S), (c-S) have no such
/// symbol and are rejected; see build_orthogonal_weight.
///
/// The lattice and line laws depend only on the products q_i q_j (resp.
/// t q_i), and Toeplitz determinants are invariant under z -> c z. When a
/// factor parameter would be >= 1, the symbol is rebalanced with such a c so
/// that poles (and, where possible, zeros) sit strictly inside the disk.
SymbolSpec build_symbol(const ModelSpec& model);

/// psi of Exp_{U in O(l)} det psi(U), as a symbol with plus-side factors only.
SymbolSpec build_orthogonal_weight(const ModelSpec& model);

/// log Z for the model (log-space to avoid overflow).
double normalization_log_z(const ModelSpec& model);

int default_quadrature_nodes(int half_width);
/// Also covers the series tails of factors close to the unit circle.
int default_quadrature_nodes(const SymbolSpec& symbol, int half_width);

/// Equally spaced quadrature on the circle. Requires nodes >= 4 (half_width+1).
FourierTable fourier_coeffs(const SymbolSpec& symbol, int half_width, int nodes = 0,
                            Execution exec = Execution::Parallel);

/// Analytic path: phi_j = sum_n p_{n+j} m_n from the power series of phi_+ and
/// phi_-(1/z). Every catalog symbol has nonnegative series coefficients, so the
/// sums are cancellation-free. Returns coefficients in `Real` precision,
/// indexed [j + half_width].
template <class Real>
std::vector<Real> series_coeffs(const SymbolSpec& symbol, int half_width);

FourierTable series_fourier_table(const SymbolSpec& symbol, int half_width);

struct SzegoConstant {
  double log_d_inf = 0.0;  // sum_{j=1}^{J} j (log phi)_j (log phi)_{-j}
  double remainder = 0.0;  // estimated |omitted tail|
  int truncation = 0;
};

/// Strong Szego constant log D_inf. Throws NumericalError when log phi has
/// non-decaying Fourier coefficients (nonzero winding).
SzegoConstant strong_szego_log_dinf(const SymbolSpec& symbol, int truncation = 64, int nodes = 0);

}  // namespace lpp
