#include "lpp/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "lpp/error.hpp"

namespace lpp {

namespace {

using cd = std::complex<double>;

const std::map<ModelKind, std::string>& kind_names() {
  static const std::map<ModelKind, std::string> names = {
      {ModelKind::PoissonSquare, "square"},
      {ModelKind::PoissonTriangle, "triangle"},
      {ModelKind::PoissonExternal, "external"},
      {ModelKind::LatticeA, "lattice-a"},
      {ModelKind::LatticeB, "lattice-b"},
      {ModelKind::LatticeC, "lattice-c"},
      {ModelKind::PoissonLinesD, "lines-d"},
      {ModelKind::PoissonLinesE, "lines-e"},
      {ModelKind::TrianglePoissonFS, "triangle-fs"},
      {ModelKind::SymmetricLatticeA, "lattice-a-sym"},
      {ModelKind::SymmetricLatticeC, "lattice-c-sym"},
  };
  return names;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

void require_nonnegative(const std::vector<double>& values, const std::string& name) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::ostringstream os;
    os << name << "[" << i << "] = " << values[i] << " violates " << name << " >= 0";
    require(std::isfinite(values[i]) && values[i] >= 0.0, os.str());
  }
}

double max_or_zero(const std::vector<double>& v) {
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

// Every pair product q_i q_j must lie in [0, 1).
void require_pair_products_below_one(const ModelSpec& m) {
  for (std::size_t i = 0; i < m.row_params.size(); ++i) {
    for (std::size_t j = 0; j < m.col_params.size(); ++j) {
      const double prod = m.row_params[i] * m.col_params[j];
      std::ostringstream os;
      os << "constraint q_i*q_j in [0,1) violated for i=" << i + 1 << ", j=" << j + 1 << ": "
         << m.row_params[i] << "*" << m.col_params[j] << " = " << prod;
      require(prod < 1.0, os.str());
    }
  }
}

// Scale c for z -> c z so that plus parameters P c and minus parameters Q / c
// fall below one whenever P Q < 1.
double balance_scale(double plus_max, double minus_max) {
  if (plus_max < 1.0 && minus_max < 1.0) return 1.0;
  if (plus_max == 0.0) return 2.0 * minus_max;
  if (minus_max == 0.0) return 1.0 / (2.0 * plus_max);
  if (plus_max * minus_max < 1.0) return std::sqrt(minus_max / plus_max);
  // Only reachable for lattice (b): keep the poles inside, zeros may wind.
  return 2.0 * minus_max;
}

void scale_symbol(SymbolSpec& s, double c) {
  if (c == 1.0) return;
  s.exp_plus_t *= c;
  s.exp_minus_t /= c;
  for (double& q : s.zeros_plus) q *= c;
  for (double& q : s.poles_plus) q *= c;
  for (double& q : s.zeros_minus) q /= c;
  for (double& q : s.poles_minus) q /= c;
}

double plus_max(const SymbolSpec& s) {
  return std::max(max_or_zero(s.zeros_plus), max_or_zero(s.poles_plus));
}
double minus_max(const SymbolSpec& s) {
  return std::max(max_or_zero(s.zeros_minus), max_or_zero(s.poles_minus));
}

}  // namespace

std::string to_string(ModelKind kind) { return kind_names().at(kind); }

ModelKind parse_model_kind(const std::string& name) {
  for (const auto& [kind, n] : kind_names()) {
    if (n == name) return kind;
  }
  throw ValidationError("unknown model '" + name + "'");
}

ModelSpec ModelSpec::poisson_square(double t) {
  ModelSpec m;
  m.kind = ModelKind::PoissonSquare;
  m.t = t;
  return m;
}

ModelSpec ModelSpec::poisson_triangle(double t, double alpha) {
  ModelSpec m;
  m.kind = ModelKind::PoissonTriangle;
  m.t = t;
  m.alpha = alpha;
  return m;
}

ModelSpec ModelSpec::poisson_external(double t, double alpha_plus, double alpha_minus) {
  ModelSpec m;
  m.kind = ModelKind::PoissonExternal;
  m.t = t;
  m.alpha_plus = alpha_plus;
  m.alpha_minus = alpha_minus;
  return m;
}

ModelSpec ModelSpec::lattice(ModelKind kind, std::vector<double> rows, std::vector<double> cols) {
  ModelSpec m;
  m.kind = kind;
  m.row_params = std::move(rows);
  m.col_params = std::move(cols);
  m.M = static_cast<int>(m.row_params.size());
  m.N = static_cast<int>(m.col_params.size());
  return m;
}

ModelSpec ModelSpec::poisson_lines(ModelKind kind, double t, std::vector<double> rates) {
  ModelSpec m;
  m.kind = kind;
  m.t = t;
  m.row_params = std::move(rates);
  m.N = static_cast<int>(m.row_params.size());
  return m;
}

ModelSpec ModelSpec::symmetric_lattice(ModelKind kind, double alpha, std::vector<double> q) {
  ModelSpec m;
  m.kind = kind;
  m.alpha = alpha;
  m.row_params = std::move(q);
  m.M = m.N = static_cast<int>(m.row_params.size());
  return m;
}

bool is_lattice(ModelKind kind) {
  return kind == ModelKind::LatticeA || kind == ModelKind::LatticeB || kind == ModelKind::LatticeC;
}

bool is_orthogonal_group_model(ModelKind kind) {
  return kind == ModelKind::TrianglePoissonFS || kind == ModelKind::PoissonTriangle ||
         kind == ModelKind::SymmetricLatticeA || kind == ModelKind::SymmetricLatticeC;
}

ModelSpec validated(ModelSpec m) {
  auto require_rate = [](double v, const char* name) {
    std::ostringstream os;
    os << name << " = " << v << " violates " << name << " >= 0";
    require(std::isfinite(v) && v >= 0.0, os.str());
  };
  require_rate(m.t, "t");
  require_rate(m.alpha, "alpha");
  require_rate(m.alpha_plus, "alpha_plus");
  require_rate(m.alpha_minus, "alpha_minus");
  require_nonnegative(m.row_params, "q");
  require_nonnegative(m.col_params, "q'");

  switch (m.kind) {
    case ModelKind::PoissonSquare:
    case ModelKind::PoissonTriangle:
    case ModelKind::TrianglePoissonFS:
    case ModelKind::PoissonExternal:
      break;
    case ModelKind::LatticeA:
    case ModelKind::LatticeB:
    case ModelKind::LatticeC: {
      const int rows = static_cast<int>(m.row_params.size());
      const int cols = static_cast<int>(m.col_params.size());
      require(rows > 0 && cols > 0, "lattice models need M >= 1 row and N >= 1 column parameters");
      require(m.M == 0 || m.M == rows, "M does not match the number of row parameters");
      require(m.N == 0 || m.N == cols, "N does not match the number of column parameters");
      m.M = rows;
      m.N = cols;
      if (m.kind != ModelKind::LatticeB) require_pair_products_below_one(m);
      break;
    }
    case ModelKind::PoissonLinesD:
    case ModelKind::PoissonLinesE:
      require(!m.row_params.empty(), "Poisson-line models need at least one line rate");
      m.N = static_cast<int>(m.row_params.size());
      break;
    case ModelKind::SymmetricLatticeA:
    case ModelKind::SymmetricLatticeC: {
      require(!m.row_params.empty(), "symmetric lattice models need N >= 1 parameters");
      m.M = m.N = static_cast<int>(m.row_params.size());
      for (std::size_t i = 0; i < m.row_params.size(); ++i) {
        std::ostringstream os;
        os << "constraint q_i in [0,1) violated for i=" << i + 1;
        require(m.row_params[i] < 1.0, os.str());
        if (m.kind == ModelKind::SymmetricLatticeA) {
          std::ostringstream os2;
          os2 << "constraint alpha*q_i in [0,1) violated for i=" << i + 1;
          require(m.alpha * m.row_params[i] < 1.0, os2.str());
        }
      }
      break;
    }
  }
  return m;
}

// --- SymbolSpec -----------------------------------------------------------

cd SymbolSpec::plus_factor(cd z) const {
  cd v = std::exp(exp_plus_t * z);
  for (double q : zeros_plus) v *= 1.0 + q * z;
  for (double q : poles_plus) v /= 1.0 - q * z;
  return v;
}

cd SymbolSpec::minus_factor(cd z) const {
  const cd w = 1.0 / z;
  cd v = std::exp(exp_minus_t * w);
  for (double q : zeros_minus) v *= 1.0 + q * w;
  for (double q : poles_minus) v /= 1.0 - q * w;
  return v;
}

cd SymbolSpec::operator()(cd z) const { return plus_factor(z) * minus_factor(z); }

cd SymbolSpec::plus_log_derivative(cd z) const {
  cd d = exp_plus_t;
  for (double q : zeros_plus) d += q / (1.0 + q * z);
  for (double q : poles_plus) d += q / (1.0 - q * z);
  return d;
}

cd SymbolSpec::minus_log_derivative(cd z) const {
  cd d = -exp_minus_t / (z * z);
  for (double q : zeros_minus) d -= q / (z * (z + q));
  for (double q : poles_minus) d -= q / (z * (z - q));
  return d;
}

bool SymbolSpec::reflection_symmetric() const {
  auto sorted = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  return exp_plus_t == exp_minus_t && sorted(zeros_plus) == sorted(zeros_minus) &&
         sorted(poles_plus) == sorted(poles_minus);
}

bool SymbolSpec::is_trivial() const {
  return exp_plus_t == 0.0 && exp_minus_t == 0.0 && zeros_plus.empty() && zeros_minus.empty() &&
         poles_plus.empty() && poles_minus.empty();
}

bool SymbolSpec::zero_winding() const {
  auto below_one = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double q) { return q < 1.0; });
  };
  return below_one(zeros_plus) && below_one(zeros_minus) && below_one(poles_plus) &&
         below_one(poles_minus);
}

void SymbolSpec::validate() const {
  require(std::isfinite(exp_plus_t) && exp_plus_t >= 0.0, "exp_plus_t must be >= 0");
  require(std::isfinite(exp_minus_t) && exp_minus_t >= 0.0, "exp_minus_t must be >= 0");
  require_nonnegative(zeros_plus, "zeros_plus");
  require_nonnegative(zeros_minus, "zeros_minus");
  require_nonnegative(poles_plus, "poles_plus");
  require_nonnegative(poles_minus, "poles_minus");
  for (double q : poles_plus) require(q < 1.0, "pole parameter must lie in [0,1)");
  for (double q : poles_minus) require(q < 1.0, "pole parameter must lie in [0,1)");
}

// --- model catalog --------------------------------------------------------

SymbolSpec build_symbol(const ModelSpec& model) {
  const ModelSpec m = validated(model);
  SymbolSpec s;
  switch (m.kind) {
    case ModelKind::PoissonSquare:
    case ModelKind::PoissonTriangle:
    case ModelKind::TrianglePoissonFS:
    case ModelKind::PoissonExternal:
      s.exp_plus_t = m.t;
      s.exp_minus_t = m.t;
      return s;
    case ModelKind::LatticeA:
      s.zeros_plus = m.row_params;
      s.zeros_minus = m.col_params;
      break;
    case ModelKind::LatticeB:
      s.zeros_plus = m.row_params;
      s.poles_minus = m.col_params;
      break;
    case ModelKind::LatticeC:
      s.poles_plus = m.row_params;
      s.poles_minus = m.col_params;
      break;
    case ModelKind::PoissonLinesD:
      s.exp_plus_t = m.t;
      s.zeros_minus = m.row_params;
      break;
    case ModelKind::PoissonLinesE:
      s.exp_plus_t = m.t;
      s.poles_minus = m.row_params;
      break;
    case ModelKind::SymmetricLatticeA:
    case ModelKind::SymmetricLatticeC:
      throw ValidationError(to_string(m.kind) +
                            " is an orthogonal-group model without a Toeplitz symbol");
  }
  scale_symbol(s, balance_scale(plus_max(s), minus_max(s)));
  s.validate();
  return s;
}

SymbolSpec build_orthogonal_weight(const ModelSpec& model) {
  const ModelSpec m = validated(model);
  SymbolSpec s;
  switch (m.kind) {
    case ModelKind::PoissonTriangle:
    case ModelKind::TrianglePoissonFS:
      s.exp_plus_t = m.t;
      s.zeros_plus = {m.alpha};
      return s;
    case ModelKind::SymmetricLatticeA:
      s.zeros_plus = m.row_params;
      s.zeros_plus.push_back(m.alpha);
      return s;
    case ModelKind::SymmetricLatticeC:
      s.zeros_plus = {m.alpha};
      s.poles_plus = m.row_params;
      return s;
    default:
      throw ValidationError(to_string(m.kind) + " has no orthogonal-group representation");
  }
}

double normalization_log_z(const ModelSpec& model) {
  const ModelSpec m = validated(model);
  double log_z = 0.0;
  switch (m.kind) {
    case ModelKind::PoissonSquare:
      return m.t * m.t;
    case ModelKind::PoissonTriangle:
    case ModelKind::TrianglePoissonFS:
      return m.alpha * m.t + 0.5 * m.t * m.t;
    case ModelKind::PoissonExternal:
      return (m.alpha_plus + m.alpha_minus) * m.t + m.t * m.t;
    case ModelKind::LatticeA:
    case ModelKind::LatticeC:
      for (double qi : m.row_params)
        for (double qj : m.col_params) log_z -= std::log1p(-qi * qj);
      return log_z;
    case ModelKind::LatticeB:
      for (double qi : m.row_params)
        for (double qj : m.col_params) log_z += std::log1p(qi * qj);
      return log_z;
    case ModelKind::PoissonLinesD:
    case ModelKind::PoissonLinesE:
      for (double q : m.row_params) log_z += m.t * q;
      return log_z;
    case ModelKind::SymmetricLatticeA:
    case ModelKind::SymmetricLatticeC: {
      const auto& q = m.row_params;
      for (std::size_t i = 0; i < q.size(); ++i) {
        if (m.kind == ModelKind::SymmetricLatticeA) {
          log_z -= std::log1p(-m.alpha * q[i]);
        } else {
          log_z += std::log1p(m.alpha * q[i]) - std::log1p(-q[i] * q[i]);
        }
        for (std::size_t j = i + 1; j < q.size(); ++j) log_z -= std::log1p(-q[i] * q[j]);
      }
      return log_z;
    }
  }
  return log_z;
}

// --- Fourier coefficients -------------------------------------------------


FourierTable fourier_coeffs(const SymbolSpec& symbol, int half_width, int nodes, Execution exec) {
  symbol.validate();
  if (half_width < 0) throw ValidationError("half_width must be >= 0");
  if (nodes == 0) nodes = default_quadrature_nodes(symbol, half_width);
  if (nodes < 4 * (half_width + 1)) {
    std::ostringstream os;
    os << "quadrature nodes = " << nodes << " too small for half_width " << half_width
       << " (need >= " << 4 * (half_width + 1) << ")";
    throw ValidationError(os.str());
  }

  const std::size_t m = static_cast<std::size_t>(nodes);
  std::vector<cd> roots(m);
  std::vector<cd> samples(m);
  for (std::size_t n = 0; n < m; ++n) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(n) / static_cast<double>(m);
    roots[n] = std::polar(1.0, -theta);
    samples[n] = symbol(std::conj(roots[n]));
  }

  FourierTable table;
  table.half_width = half_width;
  table.nodes = nodes;
  table.symbol = symbol;
  table.method = "quadrature";
  table.coeffs.assign(static_cast<std::size_t>(2 * half_width + 1), 0.0);

  const long long width = 2LL * half_width + 1;
  auto coefficient = [&](long long idx) {
    const long long j = idx - half_width;
    const long long jm = ((j % static_cast<long long>(m)) + static_cast<long long>(m)) %
                         static_cast<long long>(m);
    cd acc = 0.0;
    std::size_t phase = 0;
    for (std::size_t n = 0; n < m; ++n) {
      acc += samples[n] * roots[phase];
      phase += static_cast<std::size_t>(jm);
      if (phase >= m) phase -= m;
    }
    table.coeffs[static_cast<std::size_t>(idx)] = acc.real() / static_cast<double>(m);
  };

  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
    for (long long idx = 0; idx < width; ++idx) coefficient(idx);
  } else {
    for (long long idx = 0; idx < width; ++idx) coefficient(idx);
  }
  return table;
}

namespace {

// Number of extra series terms after which every factor has decayed below
// `rel_tol` relative to its peak.
std::size_t series_tail_length(double exp_t, const std::vector<double>& zeros,
                               const std::vector<double>& poles, double log_tol) {
  std::size_t tail = zeros.size();
  if (exp_t > 0.0) {
    const double peak_n = std::floor(exp_t);
    const double log_peak = peak_n * std::log(exp_t) - std::lgamma(peak_n + 1.0);
    double n = peak_n;
    while (n * std::log(exp_t) - std::lgamma(n + 1.0) - log_peak > log_tol) n += 1.0;
    tail += static_cast<std::size_t>(n) + 1;
  }
  for (double p : poles) {
    if (p > 0.0) tail += static_cast<std::size_t>(std::ceil(log_tol / std::log(p))) + 1;
  }
  return tail;
}

template <class Real>
std::vector<Real> one_sided_series(double exp_t, const std::vector<double>& zeros,
                                   const std::vector<double>& poles, std::size_t length) {
  std::vector<Real> s(length, Real(0));
  s[0] = Real(1);
  const Real a(exp_t);
  for (std::size_t n = 1; n < length; ++n) s[n] = s[n - 1] * a / Real(static_cast<double>(n));
  for (double q : zeros) {
    const Real qr(q);
    for (std::size_t n = length - 1; n >= 1; --n) s[n] += qr * s[n - 1];
  }
  for (double p : poles) {
    const Real pr(p);
    for (std::size_t n = 1; n < length; ++n) s[n] += pr * s[n - 1];
  }
  return s;
}

}  // namespace

int default_quadrature_nodes(int half_width) { return std::max(64, 16 * (half_width + 1)); }

int default_quadrature_nodes(const SymbolSpec& symbol, int half_width) {
  // Aliasing brings in phi_{j+m}; for poles close to 1 these decay slowly, so
  // the node count must also cover the series tails.
  const double log_tol = std::log(1e-18);
  const std::size_t tail =
      series_tail_length(symbol.exp_plus_t, symbol.zeros_plus, symbol.poles_plus,
                                 log_tol) +
      series_tail_length(symbol.exp_minus_t, symbol.zeros_minus, symbol.poles_minus,
                                 log_tol);
  const std::size_t need = static_cast<std::size_t>(half_width) + 2 * tail;
  std::size_t m = static_cast<std::size_t>(default_quadrature_nodes(half_width));
  if (need > m) m = (need + 3) / 4 * 4;
  return static_cast<int>(m);
}

template <class Real>
std::vector<Real> series_coeffs(const SymbolSpec& symbol, int half_width) {
  symbol.validate();
  if (half_width < 0) throw ValidationError("half_width must be >= 0");
  using std::log;
  const double eps = static_cast<double>(std::numeric_limits<Real>::epsilon());
  const double log_tol = std::log(eps) - std::log(100.0);
  const std::size_t tail =
      series_tail_length(symbol.exp_plus_t, symbol.zeros_plus, symbol.poles_plus, log_tol) +
      series_tail_length(symbol.exp_minus_t, symbol.zeros_minus, symbol.poles_minus, log_tol);
  const std::size_t length = static_cast<std::size_t>(half_width) + 1 + tail;
  if (length > 2'000'000) {
    throw NumericalError("series path needs too many terms; a parameter is too close to 1");
  }
  const auto plus =
      one_sided_series<Real>(symbol.exp_plus_t, symbol.zeros_plus, symbol.poles_plus, length);
  const auto minus =
      one_sided_series<Real>(symbol.exp_minus_t, symbol.zeros_minus, symbol.poles_minus, length);

  std::vector<Real> coeffs(static_cast<std::size_t>(2 * half_width + 1), Real(0));
  for (int j = 0; j <= half_width; ++j) {
    const std::size_t uj = static_cast<std::size_t>(j);
    Real pos(0), neg(0);
    for (std::size_t n = 0; n + uj < length; ++n) {
      pos += plus[n + uj] * minus[n];
      neg += plus[n] * minus[n + uj];
    }
    coeffs[static_cast<std::size_t>(half_width + j)] = pos;
    coeffs[static_cast<std::size_t>(half_width - j)] = neg;
  }
  return coeffs;
}

template std::vector<double> series_coeffs<double>(const SymbolSpec&, int);
template std::vector<long double> series_coeffs<long double>(const SymbolSpec&, int);
template std::vector<HighReal> series_coeffs<HighReal>(const SymbolSpec&, int);

FourierTable series_fourier_table(const SymbolSpec& symbol, int half_width) {
  FourierTable table;
  table.half_width = half_width;
  table.nodes = 0;
  table.symbol = symbol;
  table.method = "series";
  const auto c = series_coeffs<long double>(symbol, half_width);
  table.coeffs.assign(c.begin(), c.end());
  return table;
}

// --- strong Szego ---------------------------------------------------------

SzegoConstant strong_szego_log_dinf(const SymbolSpec& symbol, int truncation, int nodes) {
  symbol.validate();
  if (truncation < 1) throw ValidationError("truncation must be >= 1");
  if (!symbol.zero_winding()) {
    throw NumericalError(
        "log phi has non-decaying Fourier coefficients: a factor parameter is >= 1 "
        "(nonzero winding on the unit circle)");
  }
  if (nodes == 0) nodes = default_quadrature_nodes(symbol, truncation);
  if (nodes < 4 * (truncation + 1)) throw ValidationError("too few nodes for the truncation");

  const std::size_t m = static_cast<std::size_t>(nodes);
  std::vector<cd> samples(m);
  for (std::size_t n = 0; n < m; ++n) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(n) / static_cast<double>(m);
    const cd z = std::polar(1.0, theta);
    const cd w = std::conj(z);
    cd lg = symbol.exp_plus_t * z + symbol.exp_minus_t * w;
    for (double q : symbol.zeros_plus) lg += std::log(1.0 + q * z);
    for (double q : symbol.zeros_minus) lg += std::log(1.0 + q * w);
    for (double q : symbol.poles_plus) lg -= std::log(1.0 - q * z);
    for (double q : symbol.poles_minus) lg -= std::log(1.0 - q * w);
    samples[n] = lg;
  }
  auto log_coeff = [&](int j) {
    cd acc = 0.0;
    for (std::size_t n = 0; n < m; ++n) {
      const double theta =
          -2.0 * std::numbers::pi * static_cast<double>((static_cast<long long>(j) *
                                                          static_cast<long long>(n)) %
                                                         static_cast<long long>(m)) /
          static_cast<double>(m);
      acc += samples[n] * std::polar(1.0, theta);
    }
    return acc.real() / static_cast<double>(m);
  };

  SzegoConstant out;
  out.truncation = truncation;
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(truncation));
  for (int j = 1; j <= truncation; ++j) {
    const double term = j * log_coeff(j) * log_coeff(-j);
    terms.push_back(term);
    out.log_d_inf += term;
  }
  const double last = std::abs(terms.back());
  const double prev = terms.size() > 1 ? std::abs(terms[terms.size() - 2]) : 0.0;
  const double scale = std::max(1.0, std::abs(out.log_d_inf));
  if (last > 1e-14 * scale) {
    const double ratio = prev > 0.0 ? last / prev : 1.0;
    if (ratio >= 1.0) {
      throw NumericalError("log phi Fourier coefficients are not decaying at the truncation");
    }
    out.remainder = last * ratio / (1.0 - ratio);
  }
  return out;
}

}  // namespace lpp
