#pragma once

#include <map>
#include <string>

#include "lpp/opuc.hpp"
#include "lpp/symbols.hpp"

namespace lpp {

/// Cutoff past the edge 2t where N_k = 1 and b(k) = 0 to double precision.
int default_square_cutoff(double t);

/// OPUC data of e^{t(z+1/z)} with default_square_cutoff(t), at the given
/// precision profile.
OpucData square_opuc(double t, Precision precision = Precision::Auto, int cutoff = -1);

/// P(L(t) <= ell) = e^{-t^2} D_ell. Requires opuc.cutoff >= ell - 1.
double prob_square(double t, int ell, const OpucData& opuc);
double log_prob_square(double t, int ell, const OpucData& opuc);

struct ProductForm {
  double log_p = 0.0;       // -sum_{k=ell}^{cutoff} log N_k
  double tail_bound = 0.0;  // bound on the omitted sum_{k>cutoff} log N_k
};

/// The other side of the ratio identity: P = prod_{k>=ell} N_k^{-1}.
ProductForm prob_square_product(int ell, const OpucData& opuc);

struct TriangleResult {
  double p = 0.0;
  double tail_bound = 0.0;  // bound on |log H^+-| truncation error
  int factors = 0;          // factors kept in each infinite product
};

/// Cutoff needed by prob_triangle_odd for this (t, m) with the default tail.
int triangle_cutoff(double t, int m);

/// P(L_s(t; alpha) <= 2m + 1) from pi_{2m}(-alpha) and the infinite products
/// H^+-_m = prod_{k>=m} N_{2k+1}^{-1} (1 -+ pi_{2k+1}(0)), truncated after
/// k_tail factors. Requires opuc of e^{t(z+1/z)} with cutoff >= 2(m + k_tail) + 1;
/// k_tail < 0 uses every factor the cutoff allows. Throws NumericalError when
/// the truncation bound exceeds 1e-10.
TriangleResult prob_triangle_odd(double t, double alpha, int m, const OpucData& opuc,
                                 int k_tail = -1);

struct Bracket {
  double lower = 0.0;
  double upper = 1.0;
};

/// P(L_s <= 2m - 1) <= P(L_s <= 2m) <= P(L_s <= 2m + 1).
Bracket triangle_even_bounds(double t, double alpha, int m, const OpucData& opuc);

/// P(L_e(t; a+, a-) <= ell) through D'_ell. Near a+ a- = 1 the ratio is
/// taken through its l'Hopital limit with Richardson-extrapolated central
/// differences in a-.
double prob_external(double t, double a_plus, double a_minus, int ell, const OpucData& opuc);

/// D'_ell / D_ell.
double external_ratio(double a_plus, double a_minus, int ell, const OpucData& opuc);

/// Lattice and Poisson-line kinds: exp(log D_ell - log Z).
double prob_lattice(const ModelSpec& model, int ell, Precision precision = Precision::Auto);

/// Exp_{U in O(ell)} det psi(U) by Weyl-measure quadrature over both
/// components, with psi given by its plus-side factors.
double orthogonal_group_expectation(const SymbolSpec& psi, int ell, int nodes = 256);

/// P(L <= ell) = Exp_{O(ell)} det psi(U) / Z for the orthogonal-group models
/// (triangle, f-S, a-S, c-S).
double prob_via_ogroup(const ModelSpec& model, int ell);
double prob_triangle_fs_via_ogroup(double t, double alpha, int ell);

/// prob_square(t, floor(2t + x t^{1/3})); 0 when that ell is negative. An ell
/// beyond cutoff+1 is clamped to cutoff+1, where the law has converged.
double scaled_cdf(double t, double x, const OpucData& opuc);

struct DistEntry {
  double log_p = 0.0;
  double p = 0.0;
};

struct DistTable {
  ModelSpec model;
  std::map<int, DistEntry> entries;
  int cutoff = 0;
  double tail_bound = 0.0;
  std::string method;
  std::string precision;
};

/// Exact table for ell = 0..ell_max (odd ell only for the triangle; f-S via
/// the orthogonal group for ell <= 8).
DistTable dist_table(const ModelSpec& model, int ell_max, Precision precision = Precision::Auto);

}  // namespace lpp
