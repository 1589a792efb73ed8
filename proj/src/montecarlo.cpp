#include "lpp/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include <Eigen/Dense>
#include <omp.h>

#include "lpp/error.hpp"

namespace lpp {

namespace {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Sort by x (then y) and return the y sequence.
std::vector<double> ys_by_x(std::vector<Point>& pts) {
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  std::vector<double> ys;
  ys.reserve(pts.size());
  for (const Point& p : pts) ys.push_back(p.y);
  return ys;
}

long poisson(double mean, Rng& rng) {
  if (mean <= 0.0) return 0;
  return std::poisson_distribution<long>(mean)(rng);
}

int geometric(double q, Rng& rng) {
  if (q <= 0.0) return 0;
  // P(k) = (1 - q) q^k, the number of failures before the first success.
  return std::geometric_distribution<int>(1.0 - q)(rng);
}

void check_rates(double a, const char* name) {
  if (!(a >= 0.0)) throw ValidationError(std::string(name) + " must be >= 0");
}

template <class Body>
void for_blocks(long blocks, int workers, Execution exec, Body&& body) {
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, workers))
    for (long b = 0; b < blocks; ++b) body(b);
  } else {
    for (long b = 0; b < blocks; ++b) body(b);
  }
}

}  // namespace

Rng block_rng(std::uint64_t seed, std::uint64_t block) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
  return Rng(seq);
}

// --- EmpiricalCdf ---------------------------------------------------------

double EmpiricalCdf::cdf(int ell) const {
  if (trials <= 0) return 0.0;
  long below = 0;
  for (const auto& [v, c] : counts) {
    if (v > ell) break;
    below += c;
  }
  return static_cast<double>(below) / static_cast<double>(trials);
}

double EmpiricalCdf::stderr_at(int ell) const {
  const double p = cdf(ell);
  return trials > 0 ? std::sqrt(p * (1.0 - p) / static_cast<double>(trials)) : 0.0;
}

double EmpiricalCdf::mean() const {
  if (trials <= 0) return 0.0;
  double s = 0.0;
  for (const auto& [v, c] : counts) s += static_cast<double>(v) * static_cast<double>(c);
  return s / static_cast<double>(trials);
}

int EmpiricalCdf::max_value() const { return counts.empty() ? 0 : counts.rbegin()->first; }

void EmpiricalCdf::write_csv(std::ostream& os) const {
  os << "value,count,cdf,stderr\n";
  char buf[128];
  long below = 0;
  for (int v = 0; v <= max_value(); ++v) {
    const auto it = counts.find(v);
    const long c = it == counts.end() ? 0 : it->second;
    below += c;
    const double p = static_cast<double>(below) / static_cast<double>(trials);
    std::snprintf(buf, sizeof buf, "%d,%ld,%.17g,%.17g\n", v, c, p,
                  std::sqrt(p * (1.0 - p) / static_cast<double>(trials)));
    os << buf;
  }
}

// --- LIS ------------------------------------------------------------------

int lis_patience(const std::vector<double>& seq) {
  std::vector<double> tops;
  for (double v : seq) {
    auto it = std::lower_bound(tops.begin(), tops.end(), v);
    if (it == tops.end()) tops.push_back(v);
    else *it = v;
  }
  return static_cast<int>(tops.size());
}

int lnds_patience(const std::vector<double>& seq) {
  std::vector<double> tops;
  for (double v : seq) {
    auto it = std::upper_bound(tops.begin(), tops.end(), v);
    if (it == tops.end()) tops.push_back(v);
    else *it = v;
  }
  return static_cast<int>(tops.size());
}

int lis_quadratic(const std::vector<double>& seq) {
  std::vector<int> best(seq.size(), 1);
  int out = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j)
      if (seq[j] < seq[i]) best[i] = std::max(best[i], best[j] + 1);
    out = std::max(out, best[i]);
  }
  return out;
}

std::vector<std::int64_t> brute_force_lis_distribution(int N) {
  if (N < 0 || N > 8) throw ValidationError("brute_force_lis_distribution: N must be in [0, 8]");
  std::vector<std::int64_t> counts(static_cast<std::size_t>(N) + 1, 0);
  std::vector<double> p(static_cast<std::size_t>(N));
  std::iota(p.begin(), p.end(), 0.0);
  do {
    ++counts[static_cast<std::size_t>(lis_patience(p))];
  } while (std::next_permutation(p.begin(), p.end()));
  return counts;
}

// --- Poisson point models ---------------------------------------------------

int sample_poisson_square(double t, Rng& rng) {
  check_rates(t, "t");
  std::uniform_real_distribution<double> u(0.0, t);
  std::vector<Point> pts(static_cast<std::size_t>(poisson(t * t, rng)));
  for (Point& p : pts) p = {u(rng), u(rng)};
  return lis_patience(ys_by_x(pts));
}

int sample_triangle(double t, double alpha, Rng& rng) {
  check_rates(t, "t");
  check_rates(alpha, "alpha");
  std::uniform_real_distribution<double> u(0.0, t);
  const long bulk = poisson(0.5 * t * t, rng);
  const long diag = poisson(alpha * t, rng);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(2 * bulk + diag));
  for (long i = 0; i < bulk; ++i) {
    // Uniform in {x < y} by sorting a uniform pair.
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    pts.push_back({a, b});
    pts.push_back({b, a});
  }
  for (long i = 0; i < diag; ++i) {
    const double d = u(rng);
    pts.push_back({d, d});
  }
  return lis_patience(ys_by_x(pts));
}

int sample_external(double t, double a_plus, double a_minus, Rng& rng) {
  check_rates(t, "t");
  check_rates(a_plus, "alpha_+");
  check_rates(a_minus, "alpha_-");
  std::uniform_real_distribution<double> u(0.0, t);
  // Open interval for edge positions so no edge point sits at the corner.
  std::uniform_real_distribution<double> edge(std::nextafter(0.0, 1.0), t);
  std::vector<Point> pts(static_cast<std::size_t>(poisson(t * t, rng)));
  for (Point& p : pts) p = {u(rng), u(rng)};
  const long bottom = poisson(a_plus * t, rng);
  const long left = poisson(a_minus * t, rng);
  for (long i = 0; i < bottom; ++i) pts.push_back({edge(rng), 0.0});
  for (long i = 0; i < left; ++i) pts.push_back({0.0, edge(rng)});
  // Edge points share a coordinate; sorted by (x, y) a path along an edge is
  // a non-decreasing run of y.
  return lnds_patience(ys_by_x(pts));
}

// --- lattices ---------------------------------------------------------------

PathRule path_rule(ModelKind kind) {
  switch (kind) {
    case ModelKind::LatticeA:
    case ModelKind::SymmetricLatticeA:
      return PathRule::WeakWeak;
    case ModelKind::LatticeB:
      return PathRule::WeakStrict;
    case ModelKind::LatticeC:
    case ModelKind::SymmetricLatticeC:
      return PathRule::StrictStrict;
    default:
      throw ValidationError(to_string(kind) + " is not a lattice model");
  }
}

int lattice_last_passage(const LatticeArray& a, PathRule rule) {
  if (a.M <= 0 || a.N <= 0) return 0;
  // F(i, j): best path inside rows <= i, columns <= j (1-based, 0 = empty).
  const int W = a.N + 1;
  std::vector<int> F(static_cast<std::size_t>((a.M + 1) * W), 0);
  auto f = [&](int i, int j) -> int& { return F[static_cast<std::size_t>(i * W + j)]; };
  for (int i = 1; i <= a.M; ++i) {
    for (int j = 1; j <= a.N; ++j) {
      const int x = a.at(i - 1, j - 1);
      switch (rule) {
        case PathRule::WeakWeak:
          f(i, j) = x + std::max(f(i - 1, j), f(i, j - 1));
          break;
        case PathRule::WeakStrict:
          // Earlier sites lie in columns < j and rows <= i.
          f(i, j) = std::max(f(i - 1, j), f(i, j - 1) + x);
          break;
        case PathRule::StrictStrict:
          f(i, j) = std::max({f(i - 1, j), f(i, j - 1), f(i - 1, j - 1) + std::min(x, 1)});
          break;
      }
    }
  }
  return f(a.M, a.N);
}

LatticeArray sample_lattice_array(const ModelSpec& model, Rng& rng) {
  const ModelSpec m = validated(model);
  LatticeArray a;
  a.M = static_cast<int>(m.row_params.size());
  a.N = static_cast<int>(m.col_params.size());
  a.x.resize(static_cast<std::size_t>(a.M * a.N));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < a.M; ++i) {
    for (int j = 0; j < a.N; ++j) {
      const double q = m.row_params[static_cast<std::size_t>(i)] * m.col_params[static_cast<std::size_t>(j)];
      int& x = a.x[static_cast<std::size_t>(i * a.N + j)];
      if (m.kind == ModelKind::LatticeB) {
        x = u(rng) < q / (1.0 + q) ? 1 : 0;  // P(0) = 1/(1+q)
      } else {
        x = geometric(q, rng);
      }
    }
  }
  return a;
}

int lattice_lpp(const ModelSpec& model, Rng& rng) {
  const ModelSpec m = validated(model);
  switch (m.kind) {
    case ModelKind::LatticeA:
    case ModelKind::LatticeB:
    case ModelKind::LatticeC:
      return lattice_last_passage(sample_lattice_array(m, rng), path_rule(m.kind));
    case ModelKind::PoissonLinesD:
    case ModelKind::PoissonLinesE: {
      // Points on line i become (x, i); sorted by x, a path is a run of line
      // labels, non-decreasing for (d) and increasing for (e).
      std::uniform_real_distribution<double> u(0.0, m.t);
      std::vector<Point> pts;
      for (std::size_t i = 0; i < m.row_params.size(); ++i) {
        const long n = poisson(m.row_params[i] * m.t, rng);
        for (long k = 0; k < n; ++k) pts.push_back({u(rng), static_cast<double>(i)});
      }
      const std::vector<double> labels = ys_by_x(pts);
      return m.kind == ModelKind::PoissonLinesD ? lnds_patience(labels) : lis_patience(labels);
    }
    default:
      throw ValidationError("lattice_lpp: " + to_string(m.kind) + " is not a lattice or line model");
  }
}

// --- symmetrized lattices ---------------------------------------------------

double g_prime_pmf(double alpha, double q, int k) {
  if (!(q >= 0.0 && q < 1.0) || !(alpha >= 0.0)) {
    throw ValidationError("g' requires q in [0,1) and alpha >= 0");
  }
  if (k < 0) return 0.0;
  const double parity = (k % 2 == 1) ? alpha : 1.0;
  return (1.0 - q * q) / (1.0 + alpha * q) * parity * std::pow(q, k);
}

double g_prime_total_mass(double alpha, double q) {
  double total = 0.0;
  for (int k = 0;; ++k) {
    const double p = g_prime_pmf(alpha, q, k);
    total += p;
    if (q == 0.0 || (k > 1 && std::pow(q, k) < 1e-17)) break;
  }
  return total;
}

int sample_g_prime(double alpha, double q, Rng& rng) {
  if (q <= 0.0) return 0;
  // Odd with probability alpha q / (1 + alpha q); then k = 2j + parity with
  // j ~ g(q^2).
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int parity = u(rng) < alpha * q / (1.0 + alpha * q) ? 1 : 0;
  return 2 * geometric(q * q, rng) + parity;
}

LatticeArray sample_symmetric_array(const ModelSpec& model, Rng& rng) {
  const ModelSpec m = validated(model);
  if (m.kind != ModelKind::SymmetricLatticeA && m.kind != ModelKind::SymmetricLatticeC) {
    throw ValidationError("sample_symmetric_array: " + to_string(m.kind) + " is not a symmetrized lattice");
  }
  const auto& q = m.row_params;
  const int n = static_cast<int>(q.size());
  LatticeArray a;
  a.M = a.N = n;
  a.x.assign(static_cast<std::size_t>(n * n), 0);
  for (int i = 0; i < n; ++i) {
    const double qi = q[static_cast<std::size_t>(i)];
    a.x[static_cast<std::size_t>(i * n + i)] = m.kind == ModelKind::SymmetricLatticeA
                                                   ? geometric(m.alpha * qi, rng)
                                                   : sample_g_prime(m.alpha, qi, rng);
    for (int j = i + 1; j < n; ++j) {
      const int v = geometric(qi * q[static_cast<std::size_t>(j)], rng);
      a.x[static_cast<std::size_t>(i * n + j)] = v;
      a.x[static_cast<std::size_t>(j * n + i)] = v;
    }
  }
  return a;
}

int symmetrized_lattice_sample(const ModelSpec& model, Rng& rng) {
  const LatticeArray a = sample_symmetric_array(model, rng);
  return lattice_last_passage(a, path_rule(model.kind));
}

int sample_model(const ModelSpec& model, Rng& rng) {
  switch (model.kind) {
    case ModelKind::PoissonSquare:
      return sample_poisson_square(model.t, rng);
    case ModelKind::PoissonTriangle:
    case ModelKind::TrianglePoissonFS:
      return sample_triangle(model.t, model.alpha, rng);
    case ModelKind::PoissonExternal:
      return sample_external(model.t, model.alpha_plus, model.alpha_minus, rng);
    case ModelKind::SymmetricLatticeA:
    case ModelKind::SymmetricLatticeC:
      return symmetrized_lattice_sample(model, rng);
    default:
      return lattice_lpp(model, rng);
  }
}

EmpiricalCdf simulate(const SimConfig& cfg, Execution exec) {
  if (cfg.trials <= 0) throw ValidationError("trials must be positive");
  if (cfg.workers <= 0) throw ValidationError("workers must be positive");
  const ModelSpec model = validated(cfg.model);
  const long blocks = (cfg.trials + kTrialBlock - 1) / kTrialBlock;
  std::vector<std::map<int, long>> per_block(static_cast<std::size_t>(blocks));
  for_blocks(blocks, cfg.workers, exec, [&](long b) {
    Rng rng = block_rng(cfg.seed, static_cast<std::uint64_t>(b));
    const long n = std::min(kTrialBlock, cfg.trials - b * kTrialBlock);
    auto& counts = per_block[static_cast<std::size_t>(b)];
    for (long i = 0; i < n; ++i) ++counts[sample_model(model, rng)];
  });
  EmpiricalCdf out;
  out.trials = cfg.trials;
  for (const auto& block : per_block)
    for (const auto& [v, c] : block) out.counts[v] += c;
  return out;
}

// --- Haar orthogonal ----------------------------------------------------------

std::vector<double> haar_orthogonal(int n, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = g(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return std::vector<double>(q.data(), q.data() + static_cast<std::size_t>(n) * n);
}

Estimate haar_orthogonal_expectation(const SymbolSpec& psi, int ell, long trials, std::uint64_t seed,
                                     int workers, Execution exec) {
  if (ell < 0 || ell > 12) throw ValidationError("haar_orthogonal_expectation: ell must be in [0, 12]");
  if (trials <= 0) throw ValidationError("trials must be positive");
  psi.validate();
  const long blocks = (trials + kTrialBlock - 1) / kTrialBlock;
  std::vector<double> sums(static_cast<std::size_t>(blocks), 0.0), squares(sums.size(), 0.0);
  for_blocks(blocks, workers, exec, [&](long b) {
    Rng rng = block_rng(seed, static_cast<std::uint64_t>(b));
    const long n = std::min(kTrialBlock, trials - b * kTrialBlock);
    double s = 0.0, s2 = 0.0;
    for (long i = 0; i < n; ++i) {
      double value = 1.0;
      if (ell > 0) {
        const std::vector<double> u = haar_orthogonal(ell, rng);
        const Eigen::Map<const Eigen::MatrixXd> U(u.data(), ell, ell);
        Eigen::EigenSolver<Eigen::MatrixXd> es(U, false);
        std::complex<double> prod = 1.0;
        for (Eigen::Index k = 0; k < ell; ++k) prod *= psi.plus_factor(es.eigenvalues()(k));
        value = prod.real();
      }
      s += value;
      s2 += value * value;
    }
    sums[static_cast<std::size_t>(b)] = s;
    squares[static_cast<std::size_t>(b)] = s2;
  });
  double s = 0.0, s2 = 0.0;
  for (std::size_t b = 0; b < sums.size(); ++b) {
    s += sums[b];
    s2 += squares[b];
  }
  Estimate e;
  e.trials = trials;
  e.mean = s / static_cast<double>(trials);
  const double var = std::max(0.0, s2 / static_cast<double>(trials) - e.mean * e.mean);
  e.std_error = std::sqrt(var / static_cast<double>(trials));
  return e;
}

CdfComparison compare_cdf(const EmpiricalCdf& emp, const std::map<int, double>& exact, double sigmas,
                          double lo, double hi) {
  CdfComparison out;
  for (const auto& [ell, p] : exact) {
    CdfComparison::Row row;
    row.ell = ell;
    row.exact = p;
    row.empirical = emp.cdf(ell);
    row.std_error = std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(emp.trials));
    row.checked = p > lo && p < hi;
    if (row.checked) {
      row.z = (row.empirical - p) / row.std_error;
      out.max_abs_z = std::max(out.max_abs_z, std::abs(row.z));
      if (std::abs(row.z) > sigmas) out.pass = false;
    }
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace lpp
