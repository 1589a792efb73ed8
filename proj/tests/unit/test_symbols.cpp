#include <boost/math/special_functions/bessel.hpp>
#include <cmath>

#include "doctest.h"
#include "lpp/error.hpp"
#include "lpp/symbols.hpp"

using namespace lpp;

TEST_CASE("build_symbol follows the model catalog") {
  const SymbolSpec sq = build_symbol(ModelSpec::poisson_square(1.0));
  CHECK(sq.exp_plus_t == 1.0);
  CHECK(sq.exp_minus_t == 1.0);
  CHECK(sq.zeros_plus.empty());
  CHECK(sq.poles_minus.empty());

  const SymbolSpec a = build_symbol(ModelSpec::lattice(ModelKind::LatticeA, {0.5}, {0.4}));
  CHECK(a.zeros_plus == std::vector<double>{0.5});
  CHECK(a.zeros_minus == std::vector<double>{0.4});

  const SymbolSpec d = build_symbol(ModelSpec::poisson_lines(ModelKind::PoissonLinesD, 2.0, {0.3}));
  CHECK(d.exp_plus_t == 2.0);
  CHECK(d.zeros_minus == std::vector<double>{0.3});

  const SymbolSpec e = build_symbol(ModelSpec::poisson_lines(ModelKind::PoissonLinesE, 2.0, {0.3}));
  CHECK(e.poles_minus == std::vector<double>{0.3});

  const SymbolSpec b = build_symbol(ModelSpec::lattice(ModelKind::LatticeB, {0.5}, {0.4}));
  CHECK(b.zeros_plus == std::vector<double>{0.5});
  CHECK(b.poles_minus == std::vector<double>{0.4});

  const SymbolSpec c = build_symbol(ModelSpec::lattice(ModelKind::LatticeC, {0.5, 0.2}, {0.4}));
  CHECK(c.poles_plus.size() == 2);
  CHECK(c.poles_minus.size() == 1);
}

TEST_CASE("constraint violations name the constraint") {
  const auto bad = ModelSpec::lattice(ModelKind::LatticeC, {1.2}, {1.0});
  try {
    build_symbol(bad);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("q_i*q_j") != std::string::npos);
  }
  CHECK_THROWS_AS(build_symbol(ModelSpec::poisson_square(-1.0)), ValidationError);
  CHECK_THROWS_AS(build_symbol(ModelSpec::symmetric_lattice(ModelKind::SymmetricLatticeA, 0.5, {0.3})),
                  ValidationError);
}

TEST_CASE("large lattice parameters are rebalanced by z -> cz") {
  // q = 1.5, q' = 0.4 has product 0.6; the Toeplitz determinants only see it.
  const SymbolSpec s = build_symbol(ModelSpec::lattice(ModelKind::LatticeC, {1.5}, {0.4}));
  CHECK(s.poles_plus[0] < 1.0);
  CHECK(s.poles_minus[0] < 1.0);
  CHECK(s.poles_plus[0] * s.poles_minus[0] == doctest::Approx(0.6).epsilon(1e-14));
}

TEST_CASE("normalization constants") {
  CHECK(normalization_log_z(ModelSpec::poisson_square(2.0)) == doctest::Approx(4.0));
  ModelSpec fs = ModelSpec::poisson_triangle(1.0, 0.5);
  fs.kind = ModelKind::TrianglePoissonFS;
  CHECK(normalization_log_z(fs) == doctest::Approx(1.0));
  CHECK(normalization_log_z(ModelSpec::lattice(ModelKind::LatticeA, {0.5}, {0.4})) ==
        doctest::Approx(-std::log(0.8)));
  CHECK(normalization_log_z(ModelSpec::lattice(ModelKind::LatticeB, {0.5}, {0.4})) ==
        doctest::Approx(std::log(1.2)));
  CHECK(normalization_log_z(ModelSpec::poisson_external(1.0, 0.3, 0.6)) ==
        doctest::Approx(1.9));
}

TEST_CASE("quadrature Fourier coefficients") {
  SUBCASE("constant symbol") {
    const FourierTable f = fourier_coeffs(SymbolSpec{}, 4);
    CHECK(f[0] == doctest::Approx(1.0).epsilon(1e-15));
    for (int j = 1; j <= 4; ++j) {
      CHECK(std::abs(f[j]) < 1e-15);
      CHECK(std::abs(f[-j]) < 1e-15);
    }
  }
  SUBCASE("square symbol gives modified Bessel values") {
    const FourierTable f = fourier_coeffs(build_symbol(ModelSpec::poisson_square(1.0)), 8, 512);
    CHECK(f[0] == doctest::Approx(2.279585302336067).epsilon(1e-14));
    for (int j = -8; j <= 8; ++j) {
      CHECK(f[j] == doctest::Approx(boost::math::cyl_bessel_i(std::abs(j), 2.0)).epsilon(1e-13));
    }
  }
  SUBCASE("lattice A 1x1 expands by hand") {
    const FourierTable f =
        fourier_coeffs(build_symbol(ModelSpec::lattice(ModelKind::LatticeA, {0.5}, {0.4})), 3);
    CHECK(f[0] == doctest::Approx(1.2).epsilon(1e-14));
    CHECK(f[1] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(f[-1] == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(std::abs(f[2]) < 1e-14);
    CHECK(std::abs(f[-2]) < 1e-14);
  }
  SUBCASE("too few nodes rejected") {
    CHECK_THROWS_AS(fourier_coeffs(SymbolSpec{}, 10, 40), ValidationError);
  }
  SUBCASE("serial and parallel agree") {
    const SymbolSpec s = build_symbol(ModelSpec::lattice(ModelKind::LatticeC, {0.7, 0.3}, {0.6}));
    const FourierTable p = fourier_coeffs(s, 20, 0, Execution::Parallel);
    const FourierTable q = fourier_coeffs(s, 20, 0, Execution::Serial);
    CHECK(p.coeffs == q.coeffs);
  }
}

TEST_CASE("node doubling from the default changes coefficients by < 1e-12 at desk scale") {
  const std::vector<SymbolSpec> symbols = {
      build_symbol(ModelSpec::poisson_square(12.0)),
      build_symbol(ModelSpec::lattice(ModelKind::LatticeC, {0.9, 0.9}, {0.9})),
      build_symbol(ModelSpec::lattice(ModelKind::LatticeA, {0.9, 0.9}, {0.9, 0.9})),
      build_symbol(ModelSpec::poisson_lines(ModelKind::PoissonLinesE, 12.0, {0.9})),
  };
  const int J = 40;
  for (const auto& s : symbols) {
    const int m = default_quadrature_nodes(s, J);
    CHECK(m >= 8 * J);
    const FourierTable a = fourier_coeffs(s, J, m);
    const FourierTable b = fourier_coeffs(s, J, 2 * m);
    const double scale = *std::max_element(a.coeffs.begin(), a.coeffs.end());
    for (int j = -J; j <= J; ++j) CHECK(std::abs(a[j] - b[j]) < 1e-12 * std::max(1.0, scale));
  }
}

TEST_CASE("series coefficients match quadrature") {
  const std::vector<SymbolSpec> symbols = {
      build_symbol(ModelSpec::poisson_square(3.0)),
      build_symbol(ModelSpec::lattice(ModelKind::LatticeA, {0.6, 0.2}, {0.5, 0.3, 0.1})),
      build_symbol(ModelSpec::lattice(ModelKind::LatticeB, {0.6, 0.8}, {0.5})),
      build_symbol(ModelSpec::lattice(ModelKind::LatticeC, {0.7}, {0.6, 0.5})),
      build_symbol(ModelSpec::poisson_lines(ModelKind::PoissonLinesD, 2.0, {0.3, 0.5})),
      build_symbol(ModelSpec::poisson_lines(ModelKind::PoissonLinesE, 2.0, {0.3, 0.5})),
  };
  for (const auto& s : symbols) {
    const FourierTable q = fourier_coeffs(s, 12);
    const FourierTable r = series_fourier_table(s, 12);
    for (int j = -12; j <= 12; ++j) CHECK(r[j] == doctest::Approx(q[j]).epsilon(1e-12));
    const auto hi = series_coeffs<HighReal>(s, 12);
    CHECK(static_cast<double>(hi[12]) == doctest::Approx(q[0]).epsilon(1e-13));
  }
}

TEST_CASE("strong Szego constant") {
  for (double t : {0.5, 3.0, 12.0}) {
    const SzegoConstant c = strong_szego_log_dinf(build_symbol(ModelSpec::poisson_square(t)));
    CHECK(std::abs(c.log_d_inf - t * t) < 1e-12 * std::max(1.0, t * t));
  }
  CHECK(std::abs(strong_szego_log_dinf(SymbolSpec{}).log_d_inf) < 1e-15);
  const SzegoConstant a =
      strong_szego_log_dinf(build_symbol(ModelSpec::lattice(ModelKind::LatticeA, {0.5}, {0.4})));
  CHECK(a.log_d_inf == doctest::Approx(-std::log(0.8)).epsilon(1e-13));

  SymbolSpec winding;
  winding.zeros_plus = {1.5};
  CHECK_THROWS_AS(strong_szego_log_dinf(winding), NumericalError);
}

TEST_CASE("exp(Szego constant) equals Z for the Toeplitz catalog") {
  const std::vector<ModelSpec> models = {
      ModelSpec::poisson_square(2.0),
      ModelSpec::lattice(ModelKind::LatticeA, {0.6, 0.2}, {0.5, 0.3}),
      ModelSpec::lattice(ModelKind::LatticeB, {0.6, 0.8}, {0.5}),
      ModelSpec::lattice(ModelKind::LatticeC, {0.7}, {0.6, 0.5}),
      ModelSpec::poisson_lines(ModelKind::PoissonLinesD, 2.0, {0.3, 0.5}),
      ModelSpec::poisson_lines(ModelKind::PoissonLinesE, 2.0, {0.3, 0.5}),
  };
  for (const auto& m : models) {
    const SzegoConstant c = strong_szego_log_dinf(build_symbol(m), 128);
    CHECK(std::abs(c.log_d_inf - normalization_log_z(m)) < 1e-10);
  }
}
