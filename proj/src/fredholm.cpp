#include "lpp/fredholm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lpp/error.hpp"

namespace lpp {

namespace {

using cd = std::complex<double>;
constexpr cd kTwoPiI{0.0, 2.0 * M_PI};
constexpr double kSingular = 1e-13;

cd node(int j, int m) { return std::polar(1.0, 2.0 * M_PI * j / m); }

struct KernelRowContext {
  const IntegrableKernelSpec& spec;
  std::vector<cd> z, psi, dlog_psi, weight;
};

void fill_row(const KernelRowContext& c, Eigen::MatrixXcd& a, int j) {
  const int m = c.spec.nodes;
  const int k = c.spec.k;
  const cd zj = c.z[static_cast<std::size_t>(j)];
  const cd zk = std::pow(zj, -k);
  for (int l = 0; l < m; ++l) {
    const auto li = static_cast<std::size_t>(l);
    cd value;
    if (l == j) {
      value = -(static_cast<double>(k) / zj + c.dlog_psi[li]) / kTwoPiI;
    } else {
      const cd w = c.z[li];
      value = (zk * std::pow(w, k) - c.psi[static_cast<std::size_t>(j)] / c.psi[li]) / (kTwoPiI * (zj - w));
    }
    a(j, l) = value * c.weight[li];
  }
}

}  // namespace

IntegrableKernelSpec IntegrableKernelSpec::square(double t, int k, int nodes) {
  IntegrableKernelSpec s;
  s.k = k;
  s.symbol = build_symbol(ModelSpec::poisson_square(t));
  s.nodes = nodes;
  return s;
}

cd IntegrableKernelSpec::psi(cd z) const { return symbol.plus_factor(z) / symbol.minus_factor(z); }

double IntegrableKernelSpec::factorization_defect() const {
  double worst = 0.0;
  for (int j = 0; j < nodes; ++j) {
    const cd z = node(j, nodes);
    worst = std::max(worst, std::abs(symbol.plus_factor(z) * symbol.minus_factor(z) - symbol(z)));
  }
  return worst;
}

void IntegrableKernelSpec::validate() const {
  if (nodes < 16 || nodes % 2 != 0) {
    throw ValidationError("Nystrom nodes must be even and >= 16, got " + std::to_string(nodes));
  }
  if (k < 0) throw ValidationError("kernel index k must be >= 0");
  symbol.validate();
}

Eigen::MatrixXcd kernel_matrix(const IntegrableKernelSpec& spec, Execution exec) {
  spec.validate();
  const int m = spec.nodes;
  KernelRowContext c{spec, {}, {}, {}, {}};
  c.z.resize(static_cast<std::size_t>(m));
  c.psi.resize(c.z.size());
  c.dlog_psi.resize(c.z.size());
  c.weight.resize(c.z.size());
  for (int j = 0; j < m; ++j) {
    const auto i = static_cast<std::size_t>(j);
    c.z[i] = node(j, m);
    c.psi[i] = spec.psi(c.z[i]);
    c.dlog_psi[i] = spec.symbol.plus_log_derivative(c.z[i]) - spec.symbol.minus_log_derivative(c.z[i]);
    c.weight[i] = kTwoPiI * c.z[i] / static_cast<double>(m);
  }
  Eigen::MatrixXcd a(m, m);
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < m; ++j) fill_row(c, a, j);
  } else {
    for (int j = 0; j < m; ++j) fill_row(c, a, j);
  }
  return a;
}

std::complex<double> fredholm_log_det(const IntegrableKernelSpec& spec, Execution exec) {
  const Eigen::MatrixXcd a = kernel_matrix(spec, exec);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(a.rows(), a.cols());
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(id - a);
  const Eigen::MatrixXcd& u = lu.matrixLU();
  double largest = 0.0;
  for (Eigen::Index i = 0; i < u.rows(); ++i) largest = std::max(largest, std::abs(u(i, i)));
  cd acc = 0.0;
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const double mag = std::abs(u(i, i));
    if (!(mag > kSingular * largest)) {
      std::ostringstream os;
      os << "det(1 - K_" << spec.k << ") is numerically singular: pivot " << mag << " vs " << largest;
      throw NumericalError(os.str());
    }
    acc += std::log(u(i, i));
  }
  if (lu.permutationP().determinant() < 0) acc += cd(0.0, M_PI);
  // Principal branch of the imaginary part.
  acc.imag(std::remainder(acc.imag(), 2.0 * M_PI));
  return acc;
}

FredholmReport identity_checks(double t, int k_max, const OpucData& opuc, int nodes) {
  if (k_max < 0) throw ValidationError("k_max must be >= 0");
  if (opuc.cutoff < k_max) {
    throw ValidationError("identity_checks: OPUC cutoff " + std::to_string(opuc.cutoff) + " < k_max " +
                          std::to_string(k_max));
  }
  FredholmReport r;
  r.t = t;
  r.nodes = nodes;
  r.log_d_inf = t * t;  // strong Szego constant of e^{t(z+1/z)}
  double prev_log_det = 0.0;
  for (int k = 0; k <= k_max; ++k) {
    const cd ld = fredholm_log_det(IntegrableKernelSpec::square(t, k, nodes));
    FredholmRow row;
    row.k = k;
    row.log_det = ld.real();
    row.log_det_imag = std::abs(ld.imag());
    row.product_residual =
        std::abs(toeplitz_log_det(opuc, k) - r.log_d_inf - (-k * std::log(2.0) + ld.real()));
    if (k >= 1) {
      const double m11 = -y_corner(opuc, k).a / 2.0;
      row.ratio_residual = std::abs(m11 - std::exp(prev_log_det - ld.real())) / m11;
    }
    prev_log_det = ld.real();
    r.max_product_residual = std::max(r.max_product_residual, row.product_residual);
    r.max_ratio_residual = std::max(r.max_ratio_residual, row.ratio_residual);
    r.max_imag = std::max(r.max_imag, row.log_det_imag);
    r.rows.push_back(row);
  }
  return r;
}

}  // namespace lpp
