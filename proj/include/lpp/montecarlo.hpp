#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <random>
#include <vector>

#include "lpp/policy.hpp"
#include "lpp/symbols.hpp"

namespace lpp {

using Rng = std::mt19937_64;

/// Trials run in fixed blocks; block b draws from mt19937_64 seeded with
/// seed_seq{seed_lo, seed_hi, b}. Counts are integers merged by addition, so
/// results do not depend on the worker count or the schedule.
constexpr long kTrialBlock = 4096;

Rng block_rng(std::uint64_t seed, std::uint64_t block);

struct SimConfig {
  ModelSpec model;
  long trials = 100000;
  std::uint64_t seed = 1;
  int workers = 1;
};

struct EmpiricalCdf {
  std::map<int, long> counts;  // value -> occurrences
  long trials = 0;

  double cdf(int ell) const;
  /// Binomial standard error sqrt(p (1 - p) / n) of the empirical cdf(ell).
  double stderr_at(int ell) const;
  double mean() const;
  int max_value() const;
  /// value,count,cdf,stderr with every value from 0 to max_value().
  void write_csv(std::ostream& os) const;
};

/// Longest strictly increasing subsequence, O(n log n).
int lis_patience(const std::vector<double>& seq);
/// Longest non-decreasing subsequence, O(n log n).
int lnds_patience(const std::vector<double>& seq);
/// O(n^2) reference for lis_patience.
int lis_quadratic(const std::vector<double>& seq);

/// Exact LIS counts over S_N by enumeration: result[k] = #{pi : LIS = k}. N <= 8.
std::vector<std::int64_t> brute_force_lis_distribution(int N);

int sample_poisson_square(double t, Rng& rng);
/// Rate-1 points below the diagonal of [0,t]^2, mirrored, plus rate-alpha
/// points on the diagonal.
int sample_triangle(double t, double alpha, Rng& rng);
/// Rate-1 points in [0,t]^2, rate alpha_+ on the bottom edge, alpha_- on the
/// left edge, none at the corner. Paths may run along an edge.
int sample_external(double t, double a_plus, double a_minus, Rng& rng);

/// Row-major M x N array of site values.
struct LatticeArray {
  int M = 0;
  int N = 0;
  std::vector<int> x;

  int at(int i, int j) const { return x[static_cast<std::size_t>(i * N + j)]; }
};

enum class PathRule {
  WeakWeak,      // (a): collect X along weakly-up/weakly-right paths
  WeakStrict,    // (b): weakly-up/strictly-right
  StrictStrict,  // (c): strictly-up/strictly-right, each nonzero site counts once
};

PathRule path_rule(ModelKind kind);

/// O(MN) dynamic programs, one per rule.
int lattice_last_passage(const LatticeArray& a, PathRule rule);

LatticeArray sample_lattice_array(const ModelSpec& model, Rng& rng);

/// Lattice kinds (a), (b), (c) and the Poisson-line kinds (d), (e).
int lattice_lpp(const ModelSpec& model, Rng& rng);

/// P(g'(alpha, q) = k) = (1 - q^2)/(1 + alpha q) alpha^{k mod 2} q^k.
double g_prime_pmf(double alpha, double q, int k);
/// Sum of the pmf over k (to the point where the tail is below 1e-17).
/// Throws ValidationError for q outside [0, 1) or a negative alpha.
double g_prime_total_mass(double alpha, double q);
int sample_g_prime(double alpha, double q, Rng& rng);

/// Symmetric array X(i,j) = X(j,i): g(q_i q_j) off the diagonal; the diagonal
/// is g(alpha q_i) for (a-S) and g'(alpha, q_i) for (c-S).
LatticeArray sample_symmetric_array(const ModelSpec& model, Rng& rng);
int symmetrized_lattice_sample(const ModelSpec& model, Rng& rng);

/// Dispatches on model.kind.
int sample_model(const ModelSpec& model, Rng& rng);

EmpiricalCdf simulate(const SimConfig& cfg, Execution exec = Execution::Parallel);

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  long trials = 0;
};

/// Haar-distributed U in O(n): QR of a Gaussian matrix with the signs of
/// diag(R) moved into Q, so both components carry mass 1/2.
std::vector<double> haar_orthogonal(int n, Rng& rng);

/// Monte Carlo Exp_{U in O(ell)} det psi(U) = prod psi(eigenvalues), psi
/// given by plus-side factors. ell <= 12.
Estimate haar_orthogonal_expectation(const SymbolSpec& psi, int ell, long trials, std::uint64_t seed,
                                     int workers = 1, Execution exec = Execution::Parallel);

struct CdfComparison {
  struct Row {
    int ell = 0;
    double exact = 0.0;
    double empirical = 0.0;
    double std_error = 0.0;
    double z = 0.0;
    bool checked = false;  // exact mass in (lo, hi)
  };
  std::vector<Row> rows;
  double max_abs_z = 0.0;
  bool pass = true;
};

/// Two-sided agreement at `sigmas` binomial standard errors (computed from the
/// exact probability) for every ell with exact CDF in (lo, hi).
CdfComparison compare_cdf(const EmpiricalCdf& emp, const std::map<int, double>& exact,
                          double sigmas = 3.0, double lo = 0.01, double hi = 0.99);

}  // namespace lpp
