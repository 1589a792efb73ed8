#include "lpp/opuc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lpp/error.hpp"

namespace lpp {

namespace {

constexpr double kBreakdown = 2e-13;

// Above this exponential weight the early norms (~e^{a+b}) and the late
// ones (~1) differ by more digits than long double resolves comfortably.
constexpr double kHighPrecisionWeight = 4.0;
// The recursion loses about 2 (a + b) / ln 10 digits for e^{a z + b/z};
// HighReal carries 200, keep at least 25.
constexpr double kMaxHighWeight = 175.0 * 2.302585092994046 / 2.0;

template <class Real>
OpucData levinson_impl(const std::vector<Real>& phi, int half_width, int K) {
  using std::abs;
  using std::log;
  auto coeff = [&](int j) -> const Real& {
    return phi[static_cast<std::size_t>(j + half_width)];
  };

  OpucData out;
  out.cutoff = K;
  out.reflection.reserve(static_cast<std::size_t>(K));
  out.dual_reflection.reserve(static_cast<std::size_t>(K));
  out.log_norms.reserve(static_cast<std::size_t>(K) + 1);

  Real norm = coeff(0);
  if (!(norm > Real(0))) throw NumericalError("Levinson breakdown at k=0: phi_0 <= 0");
  out.log_norms.push_back(static_cast<double>(log(norm)));

  std::vector<Real> c{Real(1)};
  std::vector<Real> ch{Real(1)};
  std::vector<Real> nc, nch;
  for (int k = 0; k < K; ++k) {
    Real eps(0), eps_hat(0);
    for (int m = 0; m <= k; ++m) {
      eps += coeff(-1 - m) * c[static_cast<std::size_t>(m)];
      eps_hat += coeff(1 + m) * ch[static_cast<std::size_t>(m)];
    }
    const Real r = -eps / norm;
    const Real rh = -eps_hat / norm;
    const Real factor = Real(1) - r * rh;
    if (!(factor > Real(kBreakdown))) {
      std::ostringstream os;
      os << "Levinson breakdown at k=" << k + 1 << ": 1 - b(k) b^(k) = "
         << static_cast<double>(factor) << " (insufficient precision or invalid measure)";
      throw NumericalError(os.str());
    }

    const std::size_t n = static_cast<std::size_t>(k) + 2;
    nc.assign(n, Real(0));
    nch.assign(n, Real(0));
    for (std::size_t i = 0; i < n; ++i) {
      const Real shifted = i >= 1 ? c[i - 1] : Real(0);
      const Real shifted_h = i >= 1 ? ch[i - 1] : Real(0);
      const std::size_t rev = static_cast<std::size_t>(k) - i;
      const Real rev_h = i <= static_cast<std::size_t>(k) ? ch[rev] : Real(0);
      const Real rev_c = i <= static_cast<std::size_t>(k) ? c[rev] : Real(0);
      nc[i] = shifted + r * rev_h;
      nch[i] = shifted_h + rh * rev_c;
    }
    c.swap(nc);
    ch.swap(nch);

    // N_{k+1} = <pi_{k+1}, z^{k+1}> evaluated from the inner product itself.
    norm = norm + r * eps_hat;
    if (!(norm > Real(0))) {
      std::ostringstream os;
      os << "Levinson breakdown at k=" << k + 1 << ": non-positive norm";
      throw NumericalError(os.str());
    }
    out.reflection.push_back(static_cast<double>(-r));
    out.dual_reflection.push_back(static_cast<double>(-rh));
    out.log_norms.push_back(static_cast<double>(log(norm)));
  }
  return out;
}

}  // namespace

double OpucData::b(int k) const {
  if (k < 1 || k > cutoff) throw ValidationError("reflection index out of range");
  return reflection[static_cast<std::size_t>(k - 1)];
}

double OpucData::b_dual(int k) const {
  if (k < 1 || k > cutoff) throw ValidationError("reflection index out of range");
  return dual_reflection[static_cast<std::size_t>(k - 1)];
}

double OpucData::log_norm(int k) const {
  if (k < 0 || k > cutoff) throw ValidationError("norm index out of range");
  return log_norms[static_cast<std::size_t>(k)];
}

OpucData levinson(const FourierTable& coeffs, int K) {
  if (K < 0) throw ValidationError("cutoff K must be >= 0");
  if (coeffs.half_width < K) {
    std::ostringstream os;
    os << "Fourier table half_width " << coeffs.half_width << " < cutoff " << K;
    throw ValidationError(os.str());
  }
  std::vector<long double> phi(coeffs.coeffs.begin(), coeffs.coeffs.end());
  OpucData out = levinson_impl(phi, coeffs.half_width, K);
  out.symbol = coeffs.symbol;
  out.method = coeffs.method;
  out.nodes = coeffs.nodes;
  out.precision = Precision::Standard;
  return out;
}

Precision resolve_precision(const SymbolSpec& symbol, Precision requested) {
  if (requested != Precision::Auto) return requested;
  return symbol.exp_plus_t + symbol.exp_minus_t >= kHighPrecisionWeight ? Precision::High
                                                                        : Precision::Standard;
}

OpucData levinson(const SymbolSpec& symbol, int K, Precision precision) {
  if (K < 0) throw ValidationError("cutoff K must be >= 0");
  symbol.validate();
  const Precision p = resolve_precision(symbol, precision);
  OpucData out;
  if (p == Precision::High) {
    if (symbol.exp_plus_t + symbol.exp_minus_t > kMaxHighWeight) {
      throw NumericalError("exponential weight too large for the high-precision recursion");
    }
    out = levinson_impl(series_coeffs<HighReal>(symbol, K), K, K);
  } else {
    out = levinson_impl(series_coeffs<long double>(symbol, K), K, K);
  }
  out.symbol = symbol;
  out.method = "series";
  out.nodes = 0;
  out.precision = p;
  return out;
}

double toeplitz_log_det(const OpucData& data, int ell) {
  if (ell < 0 || ell > data.cutoff + 1) {
    std::ostringstream os;
    os << "ell = " << ell << " outside [0, cutoff+1 = " << data.cutoff + 1 << "]";
    throw ValidationError(os.str());
  }
  double s = 0.0;
  for (int k = 0; k < ell; ++k) s += data.log_norms[static_cast<std::size_t>(k)];
  return s;
}

std::complex<double> ScaledPair::pi_value() const { return pi * std::exp(log_scale); }
std::complex<double> ScaledPair::pi_star_value() const { return pi_star * std::exp(log_scale); }

ScaledPair eval_pi(const OpucData& data, int k, std::complex<double> z) {
  if (k < 0 || k > data.cutoff) throw ValidationError("eval_pi: k outside [0, cutoff]");
  using cl = std::complex<long double>;
  const cl zl(z.real(), z.imag());
  cl p = 1.0L, ph = 1.0L, ps = 1.0L, phs = 1.0L;
  long double log_scale = 0.0L;
  for (int j = 0; j < k; ++j) {
    const long double r = -static_cast<long double>(data.reflection[static_cast<std::size_t>(j)]);
    const long double rh =
        -static_cast<long double>(data.dual_reflection[static_cast<std::size_t>(j)]);
    const cl np = zl * p + r * phs;
    const cl nph = zl * ph + rh * ps;
    const cl nps = ps + r * zl * ph;
    const cl nphs = phs + rh * zl * p;
    p = np;
    ph = nph;
    ps = nps;
    phs = nphs;
    const long double m = std::max({std::abs(p), std::abs(ph), std::abs(ps), std::abs(phs)});
    if (m > 1e150L || (m > 0.0L && m < 1e-150L)) {
      p /= m;
      ph /= m;
      ps /= m;
      phs /= m;
      log_scale += std::log(m);
    }
  }
  ScaledPair out;
  const long double m = std::max(std::abs(p), std::abs(ps));
  if (m > 0.0L) {
    p /= m;
    ps /= m;
    log_scale += std::log(m);
  }
  out.pi = {static_cast<double>(p.real()), static_cast<double>(p.imag())};
  out.pi_star = {static_cast<double>(ps.real()), static_cast<double>(ps.imag())};
  out.log_scale = static_cast<double>(log_scale);
  return out;
}

YCorner y_corner(const OpucData& data, int k) {
  if (k < 1 || k > data.cutoff) throw ValidationError("y_corner: k outside [1, cutoff]");
  YCorner y;
  y.k = k;
  y.a = -std::exp(-data.log_norm(k - 1));
  y.b = data.b(k);
  y.b_dual = data.b_dual(k);
  y.d = (1.0 - y.b * y.b_dual) / y.a;
  return y;
}

double dpii_residual(const OpucData& data, double t, int k) {
  if (t == 0.0) throw ValidationError("dpii_residual: t = 0 (division by t)");
  if (k < 2 || k > data.cutoff - 1) {
    throw ValidationError("dpii_residual: k outside [2, cutoff-1]");
  }
  const double bk = data.b(k);
  return (k / t) * bk + (data.b(k - 1) + data.b(k + 1)) * (1.0 - bk * bk);
}

RecurrenceReport recurrence_checks(const OpucData& data) {
  if (data.cutoff < 2) throw ValidationError("recurrence_checks needs cutoff >= 2");
  RecurrenceReport rep;
  for (int k = 1; k < data.cutoff; ++k) {
    const YCorner y = y_corner(data, k);
    const YCorner y1 = y_corner(data, k + 1);
    const double dev = std::abs(y.a - (1.0 - y.b * y.b_dual) * y1.a) / std::abs(y.a);
    if (dev > rep.a_deviation) {
      rep.a_deviation = dev;
      rep.worst_a_k = k;
    }
  }
  for (int k = 1; k <= data.cutoff; ++k) {
    const YCorner y = y_corner(data, k);
    // d(k) = -N_k taken straight from the accumulated norms.
    const double d_k = -std::exp(data.log_norm(k));
    const double d_prev = -std::exp(data.log_norm(k - 1));
    const double dev = std::abs(d_k - (1.0 - y.b * y.b_dual) * d_prev) / std::abs(d_k);
    if (dev > rep.d_deviation) {
      rep.d_deviation = dev;
      rep.worst_d_k = k;
    }
    rep.unimodular_deviation = std::max(rep.unimodular_deviation, std::abs(y.unimodular_defect()));
  }
  return rep;
}

}  // namespace lpp
