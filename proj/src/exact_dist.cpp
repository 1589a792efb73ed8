#include "lpp/exact_dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "lpp/error.hpp"

namespace lpp {

namespace {

constexpr double kTriangleTailTolerance = 1e-10;
constexpr double kExternalNearOne = 1e-4;
constexpr double kExternalStep = 1e-3;
constexpr double kLogNormResolution = 1e-15;

void require_cutoff(const OpucData& opuc, int needed, const char* what) {
  if (opuc.cutoff < needed) {
    std::ostringstream os;
    os << what << ": OPUC cutoff " << opuc.cutoff << " < required " << needed;
    throw ValidationError(os.str());
  }
}

void require_ell(int ell) {
  if (ell < 0) throw ValidationError("ell must be >= 0, got " + std::to_string(ell));
}

// pi_k(x), pi*_k(x) at a real point, unscaled.
struct RealPair {
  double pi = 0.0;
  double pi_star = 0.0;
};

RealPair real_pi(const OpucData& opuc, int k, double x) {
  const ScaledPair s = eval_pi(opuc, k, {x, 0.0});
  return {s.pi_value().real(), s.pi_star_value().real()};
}

// Numerator of D'_ell / D_ell as a function of a-.
double external_numerator(const OpucData& opuc, int ell, double a_plus, double a_minus) {
  const RealPair p = real_pi(opuc, ell, -a_plus);
  const RealPair m = real_pi(opuc, ell, -a_minus);
  return p.pi_star * m.pi_star - a_plus * a_minus * p.pi * m.pi;
}

// log|det| and sign through partial-pivoting LU.
std::pair<double, int> log_det(const Eigen::MatrixXd& a) {
  if (a.rows() == 0) return {0.0, 1};
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const Eigen::MatrixXd& u = lu.matrixLU();
  double log_abs = 0.0;
  int sign = static_cast<int>(lu.permutationP().determinant());
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const double d = u(i, i);
    if (d == 0.0) return {-std::numeric_limits<double>::infinity(), 0};
    if (d < 0.0) sign = -sign;
    log_abs += std::log(std::abs(d));
  }
  return {log_abs, sign};
}

// Exp over density prod w(theta_j) prod_{j<k} (x_j - x_k)^2 of prod h(x_j),
// with `size` angles on [0, pi]. By Andreief it is det[<h w T_i T_k>] /
// det[<w T_i T_k>] in the Chebyshev basis T_i(cos theta) = cos(i theta).
double weyl_ratio(const std::vector<double>& h, const std::vector<double>& w, int size) {
  if (size == 0) return 1.0;
  const int M = static_cast<int>(h.size());
  Eigen::MatrixXd num = Eigen::MatrixXd::Zero(size, size);
  Eigen::MatrixXd den = Eigen::MatrixXd::Zero(size, size);
  for (int n = 0; n < M; ++n) {
    const double theta = M_PI * (n + 0.5) / M;
    for (int i = 0; i < size; ++i) {
      const double ti = std::cos(i * theta);
      for (int k = 0; k <= i; ++k) {
        const double g = w[static_cast<std::size_t>(n)] * ti * std::cos(k * theta);
        den(i, k) += g;
        num(i, k) += g * h[static_cast<std::size_t>(n)];
      }
    }
  }
  num = num.selfadjointView<Eigen::Lower>();
  den = den.selfadjointView<Eigen::Lower>();
  const auto [ln, sn] = log_det(num);
  const auto [ld, sd] = log_det(den);
  if (sd == 0) throw NumericalError("Weyl quadrature: singular Gram matrix");
  return sn * sd * std::exp(ln - ld);
}

}  // namespace

int default_square_cutoff(double t) {
  if (!(t >= 0.0)) throw ValidationError("t must be >= 0");
  return static_cast<int>(std::ceil(2.0 * t + 10.0 * std::cbrt(t) + 30.0));
}

OpucData square_opuc(double t, Precision precision, int cutoff) {
  const SymbolSpec symbol = build_symbol(ModelSpec::poisson_square(t));
  return levinson(symbol, cutoff < 0 ? default_square_cutoff(t) : cutoff, precision);
}

double log_prob_square(double t, int ell, const OpucData& opuc) {
  require_ell(ell);
  return toeplitz_log_det(opuc, ell) - t * t;
}

double prob_square(double t, int ell, const OpucData& opuc) {
  return std::exp(log_prob_square(t, ell, opuc));
}

ProductForm prob_square_product(int ell, const OpucData& opuc) {
  require_ell(ell);
  require_cutoff(opuc, ell, "prob_square_product");
  ProductForm out;
  for (int k = ell; k <= opuc.cutoff; ++k) out.log_p -= opuc.log_norm(k);
  // log N_k decays faster than geometrically past the edge; bound the rest by
  // a geometric series with the last observed ratio.
  const double last = std::abs(opuc.log_norm(opuc.cutoff));
  const double prev = opuc.cutoff > 0 ? std::abs(opuc.log_norm(opuc.cutoff - 1)) : 0.0;
  const double ratio = prev > 0.0 ? last / prev : 1.0;
  // Once the norms round to 1 the ratio is noise; the tail is then below
  // the resolution of the stored logs.
  if (last < kLogNormResolution) {
    out.tail_bound = kLogNormResolution;
  } else {
    out.tail_bound = ratio < 1.0 ? last * ratio / (1.0 - ratio) : std::numeric_limits<double>::infinity();
  }
  return out;
}

int triangle_cutoff(double t, int m) {
  return std::max(default_square_cutoff(t), 2 * m + 21);
}

TriangleResult prob_triangle_odd(double t, double alpha, int m, const OpucData& opuc, int k_tail) {
  if (m < 0) throw ValidationError("m must be >= 0");
  if (!(alpha >= 0.0)) throw ValidationError("alpha must be >= 0");
  const int last_k = (opuc.cutoff - 1) / 2;  // largest k with 2k+1 <= cutoff
  if (last_k < m) {
    throw ValidationError("prob_triangle_odd: OPUC cutoff " + std::to_string(opuc.cutoff) +
                          " < 2m+1 = " + std::to_string(2 * m + 1));
  }
  const int kept = k_tail < 0 ? last_k - m + 1 : k_tail;
  if (kept < 1) throw ValidationError("k_tail must be >= 1");
  if (m + kept - 1 > last_k) {
    throw ValidationError("prob_triangle_odd: k_tail=" + std::to_string(kept) + " needs cutoff >= " +
                          std::to_string(2 * (m + kept - 1) + 1));
  }

  auto term = [&](int k, double& lp, double& lm) {
    const double ln = opuc.log_norm(2 * k + 1);
    const double b = opuc.b(2 * k + 1);
    lp = -ln + std::log1p(b);
    lm = -ln + std::log1p(-b);
  };

  double log_hp = 0.0, log_hm = 0.0;
  for (int k = m; k < m + kept; ++k) {
    double lp, lm;
    term(k, lp, lm);
    log_hp += lp;
    log_hm += lm;
  }
  // Omitted factors available within the cutoff, plus the last available one
  // again as the estimate of everything past it.
  double bound = 0.0, last = 0.0;
  for (int k = m + kept; k <= last_k; ++k) {
    double lp, lm;
    term(k, lp, lm);
    last = std::max(std::abs(lp), std::abs(lm));
    bound += last;
  }
  if (m + kept > last_k) {
    double lp, lm;
    term(last_k, lp, lm);
    last = std::max(std::abs(lp), std::abs(lm));
  }
  bound += last;
  if (bound > kTriangleTailTolerance) {
    std::ostringstream os;
    os << "prob_triangle_odd: truncation bound " << bound << " > " << kTriangleTailTolerance
       << " with " << kept << " factors; raise k_tail or the OPUC cutoff";
    throw NumericalError(os.str());
  }

  const RealPair p = real_pi(opuc, 2 * m, -alpha);
  const double plus = p.pi_star + alpha * p.pi;
  const double minus = p.pi_star - alpha * p.pi;
  TriangleResult out;
  out.p = 0.5 * std::exp(-alpha * t) * (plus * std::exp(log_hp) + minus * std::exp(log_hm));
  out.tail_bound = bound;
  out.factors = kept;
  return out;
}

Bracket triangle_even_bounds(double t, double alpha, int m, const OpucData& opuc) {
  if (m < 0) throw ValidationError("m must be >= 0");
  Bracket b;
  b.lower = m == 0 ? 0.0 : prob_triangle_odd(t, alpha, m - 1, opuc).p;
  b.upper = prob_triangle_odd(t, alpha, m, opuc).p;
  return b;
}

double external_ratio(double a_plus, double a_minus, int ell, const OpucData& opuc) {
  require_ell(ell);
  require_cutoff(opuc, ell, "external_ratio");
  if (!(a_plus >= 0.0) || !(a_minus >= 0.0)) throw ValidationError("alpha_+- must be >= 0");
  const double gap = 1.0 - a_plus * a_minus;
  if (std::abs(gap) >= kExternalNearOne) {
    return external_numerator(opuc, ell, a_plus, a_minus) / gap;
  }
  // The numerator vanishes at a- = 1/a+; expand it to second order there.
  const double root = 1.0 / a_plus;
  auto n = [&](double a) { return external_numerator(opuc, ell, a_plus, a); };
  const double n0 = n(root);
  auto d1 = [&](double h) { return (n(root + h) - n(root - h)) / (2.0 * h); };
  auto d2 = [&](double h) { return (n(root + h) - 2.0 * n0 + n(root - h)) / (h * h); };
  const double h = kExternalStep;
  const double slope = (4.0 * d1(h / 2) - d1(h)) / 3.0;
  const double curvature = (4.0 * d2(h / 2) - d2(h)) / 3.0;
  const double delta = a_minus - root;
  return -(slope + 0.5 * curvature * delta) / a_plus;
}

double prob_external(double t, double a_plus, double a_minus, int ell, const OpucData& opuc) {
  require_ell(ell);
  const double log_z = (a_plus + a_minus) * t + t * t;
  const double cur = external_ratio(a_plus, a_minus, ell, opuc) *
                     std::exp(toeplitz_log_det(opuc, ell) - log_z);
  if (ell == 0) return cur;
  const double prev = external_ratio(a_plus, a_minus, ell - 1, opuc) *
                      std::exp(toeplitz_log_det(opuc, ell - 1) - log_z);
  return cur - a_plus * a_minus * prev;
}

double prob_lattice(const ModelSpec& model, int ell, Precision precision) {
  require_ell(ell);
  const ModelSpec m = validated(model);
  switch (m.kind) {
    case ModelKind::LatticeA:
    case ModelKind::LatticeB:
    case ModelKind::LatticeC:
    case ModelKind::PoissonLinesD:
    case ModelKind::PoissonLinesE:
    case ModelKind::PoissonSquare:
      break;
    default:
      throw ValidationError("prob_lattice: " + to_string(m.kind) + " is not a Toeplitz model");
  }
  const OpucData opuc = levinson(build_symbol(m), std::max(ell, 1), precision);
  return std::exp(toeplitz_log_det(opuc, ell) - normalization_log_z(m));
}

double orthogonal_group_expectation(const SymbolSpec& psi, int ell, int nodes) {
  require_ell(ell);
  psi.validate();
  if (psi.exp_minus_t != 0.0 || !psi.zeros_minus.empty() || !psi.poles_minus.empty()) {
    throw ValidationError("orthogonal_group_expectation: psi must have plus-side factors only");
  }
  if (nodes < 2 * ell + 8) throw ValidationError("orthogonal_group_expectation: too few nodes");
  if (ell == 0) return 1.0;

  std::vector<double> h(static_cast<std::size_t>(nodes));
  std::vector<double> one(h.size(), 1.0), w_minus(h.size()), w_plus(h.size()), w_sin(h.size());
  for (int n = 0; n < nodes; ++n) {
    const double theta = M_PI * (n + 0.5) / nodes;
    const auto i = static_cast<std::size_t>(n);
    h[i] = std::norm(psi.plus_factor(std::polar(1.0, theta)));
    const double x = std::cos(theta);
    w_minus[i] = 1.0 - x;
    w_plus[i] = 1.0 + x;
    w_sin[i] = std::sin(theta) * std::sin(theta);
  }
  const double psi_one = psi.plus_factor(1.0).real();
  const double psi_neg = psi.plus_factor(-1.0).real();

  const int m = ell / 2;
  double e_special, e_reflect;
  if (ell % 2 == 1) {
    // SO(2m+1) fixes eigenvalue 1, O^-(2m+1) fixes -1.
    e_special = psi_one * weyl_ratio(h, w_minus, m);
    e_reflect = psi_neg * weyl_ratio(h, w_plus, m);
  } else {
    // O^-(2m) has eigenvalues 1 and -1 plus m-1 conjugate pairs.
    e_special = weyl_ratio(h, one, m);
    e_reflect = psi_one * psi_neg * weyl_ratio(h, w_sin, m - 1);
  }
  return 0.5 * (e_special + e_reflect);
}

double prob_via_ogroup(const ModelSpec& model, int ell) {
  const ModelSpec m = validated(model);
  const SymbolSpec psi = build_orthogonal_weight(m);
  const int nodes = std::max(256, 8 * ell + 64);
  return orthogonal_group_expectation(psi, ell, nodes) * std::exp(-normalization_log_z(m));
}

double prob_triangle_fs_via_ogroup(double t, double alpha, int ell) {
  ModelSpec m = ModelSpec::poisson_triangle(t, alpha);
  m.kind = ModelKind::TrianglePoissonFS;
  return prob_via_ogroup(m, ell);
}

double scaled_cdf(double t, double x, const OpucData& opuc) {
  if (!(t > 0.0)) throw ValidationError("scaled_cdf requires t > 0");
  const double level = std::floor(2.0 * t + x * std::cbrt(t));
  if (level < 0.0) return 0.0;
  const int ell = static_cast<int>(std::min(level, static_cast<double>(opuc.cutoff + 1)));
  return prob_square(t, ell, opuc);
}

DistTable dist_table(const ModelSpec& model, int ell_max, Precision precision) {
  require_ell(ell_max);
  const ModelSpec m = validated(model);
  DistTable table;
  table.model = m;
  auto put = [&](int ell, double p) {
    table.entries[ell] = {p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity(), p};
  };

  switch (m.kind) {
    case ModelKind::PoissonSquare: {
      const OpucData opuc = square_opuc(m.t, precision, std::max(ell_max, 1));
      for (int ell = 0; ell <= ell_max; ++ell) put(ell, prob_square(m.t, ell, opuc));
      table.cutoff = opuc.cutoff;
      table.method = "toeplitz-levinson";
      table.precision = to_string(opuc.precision);
      break;
    }
    case ModelKind::PoissonTriangle: {
      const int m_max = (ell_max - 1) / 2;
      const OpucData opuc = square_opuc(m.t, precision, triangle_cutoff(m.t, std::max(m_max, 0)));
      for (int k = 0; 2 * k + 1 <= ell_max; ++k) {
        const TriangleResult r = prob_triangle_odd(m.t, m.alpha, k, opuc);
        put(2 * k + 1, r.p);
        table.tail_bound = std::max(table.tail_bound, r.tail_bound);
      }
      table.cutoff = opuc.cutoff;
      table.method = "opuc-odd-formula";
      table.precision = to_string(opuc.precision);
      break;
    }
    case ModelKind::PoissonExternal: {
      const OpucData opuc = square_opuc(m.t, precision, std::max(ell_max, 1));
      for (int ell = 0; ell <= ell_max; ++ell) {
        put(ell, prob_external(m.t, m.alpha_plus, m.alpha_minus, ell, opuc));
      }
      table.cutoff = opuc.cutoff;
      table.method = "external-derivative";
      table.precision = to_string(opuc.precision);
      break;
    }
    case ModelKind::TrianglePoissonFS:
    case ModelKind::SymmetricLatticeA:
    case ModelKind::SymmetricLatticeC:
      for (int ell = 0; ell <= ell_max; ++ell) put(ell, prob_via_ogroup(m, ell));
      table.cutoff = ell_max;
      table.method = "orthogonal-weyl";
      table.precision = to_string(Precision::Standard);
      break;
    default: {
      const OpucData opuc = levinson(build_symbol(m), std::max(ell_max, 1), precision);
      const double log_z = normalization_log_z(m);
      for (int ell = 0; ell <= ell_max; ++ell) put(ell, std::exp(toeplitz_log_det(opuc, ell) - log_z));
      table.cutoff = opuc.cutoff;
      table.method = "toeplitz-levinson";
      table.precision = to_string(opuc.precision);
      break;
    }
  }
  return table;
}

}  // namespace lpp
