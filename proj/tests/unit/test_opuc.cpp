#include <boost/math/special_functions/bessel.hpp>
#include <cmath>

#include "doctest.h"
#include "lpp/error.hpp"
#include "lpp/opuc.hpp"
#include "oracles/dense.hpp"

using namespace lpp;

namespace {

double bessel_coeff(double t, int j) { return boost::math::cyl_bessel_i(std::abs(j), 2.0 * t); }

OpucData square_data(double t, int K) {
  return levinson(fourier_coeffs(build_symbol(ModelSpec::poisson_square(t)), K), K);
}

}  // namespace

TEST_CASE("trivial symbol") {
  const OpucData d = levinson(fourier_coeffs(SymbolSpec{}, 6), 6);
  for (int k = 1; k <= 6; ++k) CHECK(std::abs(d.b(k)) < 1e-15);
  for (int k = 0; k <= 6; ++k) CHECK(std::abs(d.log_norm(k)) < 1e-15);
  const ScaledPair p = eval_pi(d, 3, {0.7, 0.2});
  const auto z3 = std::pow(std::complex<double>(0.7, 0.2), 3);
  CHECK(std::abs(p.pi_value() - z3) < 1e-15);
  CHECK(std::abs(p.pi_star_value() - 1.0) < 1e-15);
  const YCorner y = y_corner(d, 3);
  CHECK(y.a == doctest::Approx(-1.0));
  CHECK(y.b == doctest::Approx(0.0));
  CHECK(y.d == doctest::Approx(-1.0));
  const RecurrenceReport r = recurrence_checks(d);
  CHECK(r.a_deviation == 0.0);
  CHECK(r.d_deviation == 0.0);
}

TEST_CASE("square symbol at t = 1: first reflection coefficient and norms") {
  const OpucData d = square_data(1.0, 12);
  const double phi0 = bessel_coeff(1.0, 0);
  const double phi1 = bessel_coeff(1.0, 1);
  CHECK(d.b(1) == doctest::Approx(phi1 / phi0).epsilon(1e-14));
  CHECK(d.b(1) == doctest::Approx(1.590636854637329 / 2.279585302336067).epsilon(1e-14));
  CHECK(d.log_norm(0) == doctest::Approx(std::log(2.279585302336067)).epsilon(1e-14));
  CHECK(toeplitz_log_det(d, 0) == 0.0);
  CHECK(toeplitz_log_det(d, 1) == doctest::Approx(std::log(phi0)).epsilon(1e-14));
  CHECK(toeplitz_log_det(d, 2) ==
        doctest::Approx(std::log(phi0 * phi0 - phi1 * phi1)).epsilon(1e-13));
  CHECK_THROWS_AS(toeplitz_log_det(d, 14), ValidationError);

  const YCorner y = y_corner(d, 1);
  CHECK(y.a == doctest::Approx(-1.0 / 2.279585302336067).epsilon(1e-14));
  CHECK(y.b == doctest::Approx(phi1 / phi0).epsilon(1e-14));
}

TEST_CASE("log determinants agree with dense pivoted elimination") {
  const std::vector<ModelSpec> models = {
      ModelSpec::poisson_square(2.0),
      ModelSpec::lattice(ModelKind::LatticeA, {0.6, 0.2}, {0.5, 0.3, 0.1}),
      ModelSpec::lattice(ModelKind::LatticeB, {0.6, 0.8}, {0.5}),
      ModelSpec::lattice(ModelKind::LatticeC, {0.7}, {0.6, 0.5}),
      ModelSpec::poisson_lines(ModelKind::PoissonLinesD, 2.0, {0.3, 0.5}),
      ModelSpec::poisson_lines(ModelKind::PoissonLinesE, 2.0, {0.3, 0.5}),
  };
  for (const auto& m : models) {
    const SymbolSpec s = build_symbol(m);
    const FourierTable f = fourier_coeffs(s, 40);
    const OpucData quad = levinson(f, 40);
    const OpucData series = levinson(s, 40, Precision::Standard);
    const OpucData high = levinson(s, 40, Precision::High);
    std::function<oracle::Mp(int)> phi = [&](int j) { return oracle::Mp(f[j]); };
    for (int ell = 1; ell <= 12; ++ell) {
      const double dense = static_cast<double>(oracle::log_abs_det(oracle::toeplitz(phi, ell), ell));
      const double tol = 1e-8 * std::max(1.0, std::abs(dense));
      CHECK(std::abs(toeplitz_log_det(quad, ell) - dense) < tol);
      CHECK(std::abs(toeplitz_log_det(series, ell) - dense) < tol);
      CHECK(std::abs(toeplitz_log_det(high, ell) - dense) < tol);
    }
    CHECK(recurrence_checks(quad).a_deviation < 1e-10);
    CHECK(recurrence_checks(series).d_deviation < 1e-10);
  }
}

TEST_CASE("eval_pi matches Gram-Schmidt polynomials") {
  const double t = 1.0;
  const OpucData d = square_data(t, 8);
  std::function<double(int)> phi = [&](int j) { return bessel_coeff(t, j); };
  for (int k = 0; k <= 6; ++k) {
    const auto c = oracle::monic_opuc(phi, k);
    for (std::complex<double> z : {std::complex<double>(-0.3, 0.0), std::complex<double>(0.4, 0.9),
                                   std::complex<double>(-1.5, 0.0)}) {
      const ScaledPair p = eval_pi(d, k, z);
      const auto ref = oracle::poly(c, z);
      CHECK(std::abs(p.pi_value() - ref) < 1e-12 * std::max(1.0, std::abs(ref)));
      // pi*_k(z) = z^k pi_k(1/z)
      std::vector<double> rev(c.rbegin(), c.rend());
      const auto ref_star = oracle::poly(rev, z);
      CHECK(std::abs(p.pi_star_value() - ref_star) < 1e-12 * std::max(1.0, std::abs(ref_star)));
    }
  }
  // z = 0 gives (pi_k(0), 1) with pi_k(0) = -b(k).
  for (int k = 1; k <= 8; ++k) {
    const ScaledPair p = eval_pi(d, k, 0.0);
    CHECK(p.pi_value().real() == doctest::Approx(-d.b(k)).epsilon(1e-14));
    CHECK(p.pi_star_value().real() == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("non-symmetric symbols: both polynomial families from the dense solve") {
  const SymbolSpec s = build_symbol(ModelSpec::lattice(ModelKind::LatticeA, {0.6}, {0.5}));
  const FourierTable f = fourier_coeffs(s, 10);
  const OpucData d = levinson(f, 10);
  std::function<double(int)> phi = [&](int j) { return f[j]; };
  std::function<double(int)> phi_t = [&](int j) { return f[-j]; };
  for (int k = 1; k <= 6; ++k) {
    CHECK(-oracle::monic_opuc(phi, k)[0] == doctest::Approx(d.b(k)).epsilon(1e-12));
    CHECK(-oracle::monic_opuc(phi_t, k)[0] == doctest::Approx(d.b_dual(k)).epsilon(1e-12));
  }
  CHECK(d.b(1) != doctest::Approx(d.b_dual(1)));
}

TEST_CASE("discrete Painleve II holds for the square symbol") {
  for (double t : {0.5, 1.0, 2.0, 3.0}) {
    const OpucData d = square_data(t, 30);
    for (int k = 2; k <= 25; ++k) CHECK(std::abs(dpii_residual(d, t, k)) < 1e-8);
    const RecurrenceReport r = recurrence_checks(d);
    CHECK(r.a_deviation < 1e-9);
    CHECK(r.d_deviation < 1e-9);
    CHECK(r.unimodular_deviation < 1e-10);
  }
  CHECK_THROWS_AS(dpii_residual(square_data(1.0, 10), 0.0, 3), ValidationError);
  // Negative control: a lattice symbol does not satisfy the equation.
  const OpucData lat = levinson(
      fourier_coeffs(build_symbol(ModelSpec::lattice(ModelKind::LatticeA, {0.6}, {0.6})), 10), 10);
  CHECK(std::abs(dpii_residual(lat, 1.0, 3)) > 1e-3);
}

TEST_CASE("recurrence checks on a non-exponential symbol") {
  const OpucData d = levinson(
      fourier_coeffs(build_symbol(ModelSpec::lattice(ModelKind::LatticeA, {0.6}, {0.5})), 10), 10);
  const RecurrenceReport r = recurrence_checks(d);
  CHECK(r.a_deviation < 1e-9);
  CHECK(r.d_deviation < 1e-9);
}

TEST_CASE("square symbol edge behaviour") {
  for (double t : {1.0, 3.0, 6.0}) {
    const int K = static_cast<int>(2 * t + 10 * std::cbrt(t) + 30);
    const OpucData d = levinson(build_symbol(ModelSpec::poisson_square(t)), K);
    const double edge = 2 * t + 10 * std::cbrt(t) + 10;
    int sign = 0;
    for (int k = 1; k <= K; ++k) {
      if (k > edge) CHECK(std::abs(d.b(k)) < 1e-6);
      const double s = ((k % 2) ? -1.0 : 1.0) * d.b(k);
      if (s != 0.0) {
        const int sk = s > 0 ? 1 : -1;
        if (sign == 0) sign = sk;
        CHECK(sk == sign);
      }
    }
    CHECK(d.log_norm(K) == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("high precision recursion agrees with standard where both are accurate") {
  const SymbolSpec s = build_symbol(ModelSpec::poisson_square(2.0));
  const OpucData a = levinson(s, 30, Precision::Standard);
  const OpucData b = levinson(s, 30, Precision::High);
  for (int k = 1; k <= 30; ++k) CHECK(std::abs(a.b(k) - b.b(k)) < 1e-14);
  CHECK(resolve_precision(build_symbol(ModelSpec::poisson_square(10.0)), Precision::Auto) ==
        Precision::High);
  CHECK(resolve_precision(build_symbol(ModelSpec::poisson_square(1.0)), Precision::Auto) ==
        Precision::Standard);
}

TEST_CASE("breakdown is reported") {
  FourierTable f;
  f.half_width = 2;
  f.coeffs = {0.0, 1.0, 1.0, 1.0, 0.0};  // singular 2x2 moment matrix
  CHECK_THROWS_AS(levinson(f, 2), NumericalError);
}
