#pragma once

#include <vector>

#include "lpp/opuc.hpp"

namespace lpp {

/// Hastings-McLeod solution of u'' = 2u^3 + xu, u ~ -Ai(x) as x -> +inf,
/// sampled on an ascending grid.
///
/// v(x) = int_inf^x u^2 (<= 0), I(x) = int_x^inf u, log_f(x) = log F_GUE(x)
/// = int_x^inf v. Values between nodes come from quintic Hermite
/// interpolation using the ODE for the second derivatives.
struct PiiSolution {
  std::vector<double> grid;
  std::vector<double> u;
  std::vector<double> du;
  std::vector<double> v;
  std::vector<double> I;
  std::vector<double> log_f;
  double x_right = 8.0;   // top of the grid; Airy tail formulas beyond
  double x_start = 20.0;  // where the Airy data are imposed
  double tol = 0.0;
  long steps = 0;
  long rejected = 0;
  // |u(x_right) + Ai(x_right)|: distance from the linear Airy asymptote.
  double boundary_defect = 0.0;

  double x_min() const { return grid.front(); }
};

constexpr double kDefaultPiiTolerance = 1e-24;
constexpr double kPiiGridStep = 1.0 / 64.0;

/// Integrates backward in float128 from x_start = max(x_max, 20), where
/// exact Airy data (-Ai, -Ai') are accurate to working precision, down to
/// x_min. `tol` is the relative local error per step.
///
/// The branch is a separatrix: a relative error delta in the amplitude of the
/// Airy data leaves the solution near x ~ -(2.1 ln(1/delta))^{2/3}, which is
/// why the integration runs in float128 at a tight tolerance.
PiiSolution solve_hastings_mcleod(double x_min = -12.0, double x_max = 8.0,
                                  double tol = kDefaultPiiTolerance);

struct PiiPoint {
  double u = 0.0;
  double du = 0.0;
  double v = 0.0;
  double I = 0.0;
  double log_f = 0.0;
};

/// Throws ValidationError for x below the grid.
PiiPoint pii_eval(const PiiSolution& sol, double x);

double log_f_gue(const PiiSolution& sol, double x);
double f_gue(const PiiSolution& sol, double x);
/// exp(I/2) F_GUE^{1/2}
double f_goe(const PiiSolution& sol, double x);
/// (exp(I/2) + exp(-I/2))/2 F_GUE^{1/2}
double f_gse(const PiiSolution& sol, double x);

/// Edge scaling 2t/k = 1 - x / (2^{1/3} k^{2/3}).
double edge_scaling_x(double t, int k);
double edge_scaling_t(double x, int k);

struct CornerReport {
  int k = 0;
  double t = 0.0;
  double x = 0.0;
  double y21_deviation = 0.0;  // |-Y21(0;k) - 1 - 2^{1/3} k^{-1/3} v(x)|
  double y11_deviation = 0.0;  // |Y11(0;k) + (-1)^k 2^{1/3} k^{-1/3} u(x)|
  double y21_constant = 0.0;   // deviation * k^{2/3}
  double y11_constant = 0.0;
};

/// Compares the corner of Y(0;k) with its Painleve II prediction. Requires
/// |x| <= 3; outside that window the exponential-decay (x > 3) or the
/// large-deviation (x < -3) regimes apply instead.
CornerReport corner_asymptotics_check(const OpucData& data, double t, int k,
                                      const PiiSolution& sol);

struct CornerStudy {
  double x = 0.0;
  std::vector<CornerReport> rows;
  double y21_slope = 0.0;  // least-squares slope of log deviation vs log k
  double y11_slope = 0.0;
};

/// Runs corner_asymptotics_check along k at fixed x (t from the edge
/// scaling), building the OPUC data at the precision the size requires.
CornerStudy corner_asymptotics_study(double x, const std::vector<int>& ks,
                                     const PiiSolution& sol);

struct TailFit {
  double exponent = 0.0;  // p in log(tail) = A - c |x|^p
  double coefficient = 0.0;
  double offset = 0.0;
  double rms = 0.0;
};

/// Fits log(1 - F_GUE(x)) over [x0, x1] (right tail, x0 > 0) and
/// log F_GUE(x) over [x0, x1] (left tail, x1 < 0) with three free parameters.
TailFit fit_right_tail(const PiiSolution& sol, double x0 = 2.0, double x1 = 8.0, int samples = 61);
TailFit fit_left_tail(const PiiSolution& sol, double x0 = -10.0, double x1 = -4.0,
                      int samples = 61);

}  // namespace lpp
