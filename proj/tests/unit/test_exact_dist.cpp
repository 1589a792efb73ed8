#include <boost/math/special_functions/bessel.hpp>
#include <cmath>

#include "doctest.h"
#include "lpp/error.hpp"
#include "lpp/exact_dist.hpp"
#include "oracles/partitions.hpp"

using namespace lpp;

namespace {

double as_double(const oracle::Mp& x) { return static_cast<double>(x); }

// Hook-length counts reach N = 40; at t <= 1.5 the omitted terms are < 1e-20.
double square_oracle(double t, int ell) {
  return as_double(oracle::poissonized_square(t, 40, [&](int N) { return oracle::lis_count_rsk(N, ell); }));
}

std::vector<double> geometric_sites(const std::vector<double>& rows, const std::vector<double>& cols,
                                    std::vector<std::vector<double>>& prob) {
  prob.clear();
  for (double qi : rows)
    for (double qj : cols) prob.push_back(oracle::geometric_pmf(qi * qj));
  return {};
}

}  // namespace

TEST_CASE("RSK counts reproduce brute-force LIS counts for N <= 8") {
  for (int N = 1; N <= 8; ++N) {
    const auto counts = oracle::lis_counts_brute(N);
    long long cum = 0;
    for (int ell = 1; ell <= N; ++ell) {
      cum += counts[static_cast<std::size_t>(ell)];
      CHECK(as_double(oracle::lis_count_rsk(N, ell)) == static_cast<double>(cum));
    }
  }
  // Small cases by hand.
  CHECK(oracle::lis_counts_brute(2)[1] == 1);
  CHECK(oracle::lis_counts_brute(3)[3] == 1);
}

TEST_CASE("square: trivial and single-row values") {
  const OpucData z = square_opuc(0.0);
  for (int ell = 0; ell <= 5; ++ell) CHECK(prob_square(0.0, ell, z) == doctest::Approx(1.0).epsilon(1e-15));

  const OpucData d = square_opuc(1.0);
  const double phi0 = boost::math::cyl_bessel_i(0, 2.0);
  CHECK(std::abs(prob_square(1.0, 1, d) - std::exp(-1.0) * phi0) < 1e-14);
  CHECK(prob_square(1.0, 0, d) == doctest::Approx(std::exp(-1.0)));
  CHECK_THROWS_AS(prob_square(1.0, -1, d), ValidationError);
  CHECK_THROWS_AS(prob_square(1.0, d.cutoff + 2, d), ValidationError);
}

TEST_CASE("square: Poissonized RSK sum") {
  for (double t : {0.5, 1.0, 1.5}) {
    const OpucData d = square_opuc(t);
    for (int ell = 1; ell <= 6; ++ell) {
      CAPTURE(t);
      CAPTURE(ell);
      CHECK(std::abs(prob_square(t, ell, d) - square_oracle(t, ell)) < 1e-12);
    }
  }
}

TEST_CASE("square: the S_N <= 8 brute-force sum alone misses a tail of order 1e-6 at t = 1") {
  const OpucData d = square_opuc(1.0);
  std::vector<std::vector<std::int64_t>> counts;
  for (int N = 0; N <= 8; ++N) counts.push_back(N == 0 ? std::vector<std::int64_t>{1} : oracle::lis_counts_brute(N));
  for (int ell = 1; ell <= 5; ++ell) {
    const double brute = as_double(oracle::poissonized_square(1.0, 8, [&](int N) {
      long long c = 0;
      for (std::size_t k = 0; k < counts[static_cast<std::size_t>(N)].size() && static_cast<int>(k) <= ell; ++k)
        c += counts[static_cast<std::size_t>(N)][k];
      return oracle::Mp(c);
    }));
    const double gap = prob_square(1.0, ell, d) - brute;
    CAPTURE(ell);
    CHECK(gap >= -1e-15);
    // Bounded by the whole N >= 9 Poisson mass sum_{N>=9} e^{-1}/N!.
    CHECK(gap < 1.1e-6);
  }
}

TEST_CASE("square: determinant and product forms agree within the tail bound") {
  for (double t : {0.5, 1.0, 3.0, 6.0}) {
    const OpucData d = square_opuc(t);
    for (int ell = 0; ell <= d.cutoff; ell += 3) {
      const ProductForm pf = prob_square_product(ell, d);
      CAPTURE(t);
      CAPTURE(ell);
      CHECK(std::abs(pf.log_p - log_prob_square(t, ell, d)) < pf.tail_bound + 1e-11);
      CHECK(pf.tail_bound < 1e-12);
    }
  }
}

TEST_CASE("triangle: odd formula against the Poissonized involution sum") {
  for (double t : {0.5, 1.0, 2.0}) {
    const OpucData d = square_opuc(t, Precision::Auto, triangle_cutoff(t, 4));
    for (double alpha : {0.0, 0.5, 1.5}) {
      for (int m = 0; m <= 3; ++m) {
        const double exact = prob_triangle_odd(t, alpha, m, d).p;
        const double oracle = as_double(oracle::poissonized_triangle(t, alpha, 2 * m + 1, 48));
        CAPTURE(t);
        CAPTURE(alpha);
        CAPTURE(m);
        CHECK(std::abs(exact - oracle) < 1e-11);
      }
    }
  }
}

TEST_CASE("triangle: reference values, closed form at ell = 1, monotonicity") {
  const OpucData d = square_opuc(1.0, Precision::Auto, triangle_cutoff(1.0, 4));
  CHECK(prob_triangle_odd(1.0, 0.5, 0, d).p == doctest::Approx(0.7838338208091532).epsilon(1e-12));
  CHECK(prob_triangle_odd(1.0, 0.5, 1, d).p == doctest::Approx(0.993382899915362).epsilon(1e-12));
  CHECK(prob_triangle_odd(1.0, 0.5, 2, d).p == doctest::Approx(0.999934091371704).epsilon(1e-12));
  CHECK(prob_triangle_odd(1.0, 0.0, 0, d).p == doctest::Approx(0.9359257154242789).epsilon(1e-12));
  CHECK(prob_triangle_odd(1.0, 1.5, 0, d).p == doctest::Approx(0.4474025343723369).epsilon(1e-12));
  for (double alpha : {0.0, 0.5, 2.0}) {
    const double closed = std::exp(-alpha - 0.5) * (std::cosh(1.0) + alpha * std::sinh(1.0));
    CHECK(prob_triangle_odd(1.0, alpha, 0, d).p == doctest::Approx(closed).epsilon(1e-12));
    double prev = 0.0;
    for (int m = 0; m <= 4; ++m) {
      const double p = prob_triangle_odd(1.0, alpha, m, d).p;
      CHECK(p >= prev);
      CHECK(p <= 1.0 + 1e-14);
      prev = p;
    }
  }
  // t -> 0: empty process.
  const OpucData small = square_opuc(1e-8, Precision::Auto, triangle_cutoff(1e-8, 2));
  CHECK(prob_triangle_odd(1e-8, 0.0, 0, small).p == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("triangle: truncation bound is enforced") {
  const double t = 6.0;
  const OpucData d = square_opuc(t, Precision::Auto, triangle_cutoff(t, 1));
  const TriangleResult full = prob_triangle_odd(t, 0.5, 1, d);
  CHECK(full.tail_bound < 1e-12);
  CHECK_THROWS_AS(prob_triangle_odd(t, 0.5, 1, d, 2), NumericalError);
  CHECK_THROWS_AS(prob_triangle_odd(t, 0.5, 1, d, d.cutoff), ValidationError);
  const TriangleResult kept = prob_triangle_odd(t, 0.5, 1, d, full.factors - 3);
  CHECK(std::abs(kept.p - full.p) < 1e-12);
}

TEST_CASE("triangle: even-ell bracket contains the involution sum") {
  const OpucData d = square_opuc(1.0, Precision::Auto, triangle_cutoff(1.0, 4));
  for (int m = 0; m <= 3; ++m) {
    const Bracket b = triangle_even_bounds(1.0, 0.5, m, d);
    const double even = as_double(oracle::poissonized_triangle(1.0, 0.5, 2 * m, 48));
    CAPTURE(m);
    CHECK(b.lower <= even);
    CHECK(even <= b.upper);
  }
}

TEST_CASE("orthogonal group: Weyl quadrature") {
  SymbolSpec one;
  for (int ell = 0; ell <= 6; ++ell) CHECK(orthogonal_group_expectation(one, ell) == doctest::Approx(1.0).epsilon(1e-13));

  for (double alpha : {0.0, 0.5, 1.5}) {
    const double o1 = 0.5 * ((1 + alpha) * std::exp(1.0) + (1 - alpha) * std::exp(-1.0));
    SymbolSpec psi;
    psi.exp_plus_t = 1.0;
    psi.zeros_plus = {alpha};
    CHECK(orthogonal_group_expectation(psi, 1) == doctest::Approx(o1).epsilon(1e-14));
  }

  // Odd and even ell against the involution sum; the even values have no
  // other exact route.
  for (double alpha : {0.0, 0.5, 1.5}) {
    for (int ell = 0; ell <= 8; ++ell) {
      const double oracle = as_double(oracle::poissonized_triangle(1.0, alpha, ell, 48));
      CAPTURE(alpha);
      CAPTURE(ell);
      CHECK(std::abs(prob_triangle_fs_via_ogroup(1.0, alpha, ell) - oracle) < 1e-11);
    }
  }
  CHECK(prob_triangle_fs_via_ogroup(1e-9, 0.0, 3) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("orthogonal group: large ell approaches the normalization") {
  const ModelSpec a = ModelSpec::symmetric_lattice(ModelKind::SymmetricLatticeA, 0.6, {0.5, 0.3, 0.4});
  const ModelSpec c = ModelSpec::symmetric_lattice(ModelKind::SymmetricLatticeC, 0.6, {0.5, 0.3, 0.4});
  CHECK(prob_via_ogroup(a, 24) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(prob_via_ogroup(c, 40) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(prob_via_ogroup(a, 3) < prob_via_ogroup(a, 4));
  CHECK(prob_via_ogroup(a, 0) == doctest::Approx(std::exp(-normalization_log_z(a))));
}

TEST_CASE("triangle: odd formula and orthogonal group agree for odd ell <= 7") {
  for (double t : {0.5, 1.0, 2.0}) {
    const OpucData d = square_opuc(t, Precision::Auto, triangle_cutoff(t, 3));
    for (double alpha : {0.0, 0.5, 1.5})
      for (int m = 0; m <= 3; ++m)
        CHECK(std::abs(prob_triangle_odd(t, alpha, m, d).p - prob_triangle_fs_via_ogroup(t, alpha, 2 * m + 1)) <
              1e-10);
  }
}

TEST_CASE("external: reduces to the square at zero rates") {
  const OpucData d = square_opuc(1.0);
  for (int ell = 0; ell <= 8; ++ell) CHECK(std::abs(prob_external(1.0, 0.0, 0.0, ell, d) - prob_square(1.0, ell, d)) < 1e-12);
  CHECK(prob_external(1.0, 0.3, 0.6, 0, d) == doctest::Approx(std::exp(-1.0 - 0.9)).epsilon(1e-13));
}

TEST_CASE("external: Schur-measure oracle") {
  for (auto [t, ap, am] : {std::tuple{1.0, 0.3, 0.6}, std::tuple{0.7, 0.9, 0.5}, std::tuple{1.2, 0.0, 0.8}}) {
    const OpucData d = square_opuc(t);
    for (int ell = 0; ell <= 5; ++ell) {
      const double oracle = as_double(oracle::poissonized_external(t, ap, am, ell, 36));
      CAPTURE(t);
      CAPTURE(ap);
      CAPTURE(ell);
      CHECK(std::abs(prob_external(t, ap, am, ell, d) - oracle) < 1e-11);
    }
  }
}

TEST_CASE("external: l'Hopital branch at a+ a- = 1") {
  const OpucData d = square_opuc(1.0);
  for (int ell = 1; ell <= 6; ++ell) {
    const double limit = prob_external(1.0, 2.0, 0.5, ell, d);
    const double left = prob_external(1.0, 2.0, 0.5 - 1e-3, ell, d);
    const double right = prob_external(1.0, 2.0, 0.5 + 1e-3, ell, d);
    CAPTURE(ell);
    CHECK(std::abs(limit - 0.5 * (left + right)) < 1e-5 * std::abs(limit));
    // Inside the switch at |1 - a+ a-| = 1e-4 the expansion matches the
    // quadratic through three direct evaluations just outside it.
    const double inside = prob_external(1.0, 2.0, 0.5 + 0.2e-4, ell, d);
    const double f1 = prob_external(1.0, 2.0, 0.5 + 1e-4, ell, d);
    const double f2 = prob_external(1.0, 2.0, 0.5 + 2e-4, ell, d);
    const double f3 = prob_external(1.0, 2.0, 0.5 + 3e-4, ell, d);
    // Lagrange weights at s = -0.8 for nodes s = 0, 1, 2 (unit 1e-4).
    const double s = -0.8;
    const double quad = f1 * (s - 1) * (s - 2) / 2 - f2 * s * (s - 2) + f3 * s * (s - 1) / 2;
    CHECK(std::abs(inside - quad) < 1e-7);
    CHECK(limit >= 0.0);
    CHECK(limit <= 1.0);
  }
  double prev = 0.0;
  for (int ell = 0; ell <= 10; ++ell) {
    const double p = prob_external(1.0, 2.0, 0.5, ell, d);
    CHECK(p >= prev - 1e-12);
    prev = p;
  }
}

TEST_CASE("lattice: single-site closed forms") {
  const ModelSpec a = ModelSpec::lattice(ModelKind::LatticeA, {0.5}, {0.4});
  CHECK(prob_lattice(a, 0) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(prob_lattice(a, 1) == doctest::Approx(0.96).epsilon(1e-12));
  for (int ell = 0; ell <= 6; ++ell) CHECK(std::abs(prob_lattice(a, ell) - (1 - std::pow(0.2, ell + 1))) < 1e-10);

  const ModelSpec b = ModelSpec::lattice(ModelKind::LatticeB, {0.5}, {0.4});
  CHECK(prob_lattice(b, 0) == doctest::Approx(1.0 / 1.2).epsilon(1e-12));
  CHECK(prob_lattice(b, 1) == doctest::Approx(1.0).epsilon(1e-12));

  // Strict/strict: a single site contributes at most one.
  const ModelSpec c = ModelSpec::lattice(ModelKind::LatticeC, {0.5}, {0.4});
  CHECK(prob_lattice(c, 0) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(prob_lattice(c, 1) == doctest::Approx(1.0).epsilon(1e-12));

  // One Poisson line: weakly-right collects every point, strictly-right one.
  const ModelSpec dl = ModelSpec::poisson_lines(ModelKind::PoissonLinesD, 1.5, {0.8});
  const ModelSpec el = ModelSpec::poisson_lines(ModelKind::PoissonLinesE, 1.5, {0.8});
  double pois = 0.0, term = std::exp(-1.2);
  for (int ell = 0; ell <= 6; ++ell) {
    pois += term;
    term *= 1.2 / (ell + 1);
    CHECK(std::abs(prob_lattice(dl, ell) - pois) < 1e-12);
  }
  CHECK(prob_lattice(el, 0) == doctest::Approx(std::exp(-1.2)).epsilon(1e-12));
  CHECK(prob_lattice(el, 1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("lattice: 2x2 exhaustive enumeration") {
  const std::vector<double> rows{0.5, 0.3}, cols{0.4, 0.6};
  std::vector<std::vector<double>> geo;
  geometric_sites(rows, cols, geo);

  SUBCASE("weak/weak, geometric") {
    const auto mass = oracle::lattice_distribution(geo, 2, 2, {true, true, false}, 6);
    const ModelSpec m = ModelSpec::lattice(ModelKind::LatticeA, rows, cols);
    for (int ell = 0; ell <= 6; ++ell) CHECK(std::abs(prob_lattice(m, ell) - mass[static_cast<std::size_t>(ell)]) < 1e-12);
  }
  SUBCASE("weak-up/strict-right, Bernoulli with P(0) = 1/(1+q)") {
    std::vector<std::vector<double>> bern;
    for (double qi : rows)
      for (double qj : cols) bern.push_back({1.0 / (1.0 + qi * qj), qi * qj / (1.0 + qi * qj)});
    const auto mass = oracle::lattice_distribution(bern, 2, 2, {true, false, false}, 4);
    const ModelSpec m = ModelSpec::lattice(ModelKind::LatticeB, rows, cols);
    for (int ell = 0; ell <= 4; ++ell) CHECK(std::abs(prob_lattice(m, ell) - mass[static_cast<std::size_t>(ell)]) < 1e-12);
  }
  SUBCASE("strict/strict, geometric sites counted once") {
    const auto mass = oracle::lattice_distribution(geo, 2, 2, {false, false, true}, 3);
    const ModelSpec m = ModelSpec::lattice(ModelKind::LatticeC, rows, cols);
    for (int ell = 0; ell <= 3; ++ell) CHECK(std::abs(prob_lattice(m, ell) - mass[static_cast<std::size_t>(ell)]) < 1e-12);
  }
  SUBCASE("1x3 weak-up/strict-right is the row sum") {
    const std::vector<double> r{0.7}, cl{0.5, 0.9, 1.3};
    std::vector<std::vector<double>> bern;
    for (double qj : cl) bern.push_back({1.0 / (1.0 + 0.7 * qj), 0.7 * qj / (1.0 + 0.7 * qj)});
    const auto mass = oracle::lattice_distribution(bern, 1, 3, {true, false, false}, 3);
    const ModelSpec m = ModelSpec::lattice(ModelKind::LatticeB, r, cl);
    for (int ell = 0; ell <= 3; ++ell) CHECK(std::abs(prob_lattice(m, ell) - mass[static_cast<std::size_t>(ell)]) < 1e-12);
  }
}

TEST_CASE("dist tables: probabilities in [0,1] and monotone") {
  const std::vector<ModelSpec> models{
      ModelSpec::poisson_square(2.0),
      ModelSpec::poisson_triangle(2.0, 0.5),
      ModelSpec::poisson_external(1.0, 0.3, 0.6),
      ModelSpec::poisson_external(1.0, 1.5, 0.9),
      ModelSpec::lattice(ModelKind::LatticeA, {0.5, 0.3, 0.2}, {0.4, 0.6}),
      ModelSpec::lattice(ModelKind::LatticeB, {0.5, 0.3}, {0.9, 1.4}),
      ModelSpec::lattice(ModelKind::LatticeC, {1.5, 0.3}, {0.4, 0.6}),
      ModelSpec::poisson_lines(ModelKind::PoissonLinesD, 2.0, {0.5, 1.0}),
      ModelSpec::poisson_lines(ModelKind::PoissonLinesE, 2.0, {0.5, 0.7}),
      ModelSpec::symmetric_lattice(ModelKind::SymmetricLatticeA, 0.5, {0.4, 0.3}),
      ModelSpec::symmetric_lattice(ModelKind::SymmetricLatticeC, 0.5, {0.4, 0.3}),
  };
  for (const ModelSpec& m : models) {
    const DistTable tab = dist_table(m, 12);
    CAPTURE(to_string(m.kind));
    double prev = 0.0;
    for (const auto& [ell, e] : tab.entries) {
      CHECK(e.p >= prev - 1e-12);
      CHECK(e.p >= -1e-14);
      CHECK(e.p <= 1.0 + 1e-12);
      prev = e.p;
    }
    CHECK(prev > 0.99);
  }
  const DistTable tri = dist_table(ModelSpec::poisson_triangle(1.0, 0.5), 7);
  CHECK(tri.entries.size() == 4);
  for (const auto& [ell, e] : tri.entries) CHECK(ell % 2 == 1);
  const DistTable sq = dist_table(ModelSpec::poisson_square(0.0), 3);
  for (const auto& [ell, e] : sq.entries) CHECK(e.p == doctest::Approx(1.0));
}

TEST_CASE("scaled CDF") {
  const double t = 4.0;
  const OpucData d = square_opuc(t);
  CHECK(scaled_cdf(t, -10.0, d) == 0.0);
  CHECK(scaled_cdf(t, 50.0, d) == doctest::Approx(1.0).epsilon(1e-14));
  double prev = 0.0;
  for (double x = -5.0; x <= 6.0; x += 0.125) {
    const double p = scaled_cdf(t, x, d);
    CHECK(p >= prev);
    prev = p;
  }
  CHECK_THROWS_AS(scaled_cdf(0.0, 0.0, d), ValidationError);
}
