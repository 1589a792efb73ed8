#include "lpp/painleve.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/airy.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <sstream>

#include "lpp/dop853.hpp"
#include "lpp/error.hpp"

namespace lpp {

namespace {

constexpr double kAiryStart = 20.0;
constexpr double kBlowUpGuard = 1e3;

// Tail values for x beyond the grid, where u = -Ai up to O(Ai^3).
template <class Real>
std::array<Real, 5> airy_state(Real x, double int_ai) {
  const Real ai = boost::math::airy_ai(x);
  const Real aip = boost::math::airy_ai_prime(x);
  const Real v = x * ai * ai - aip * aip;
  const Real w = -(2 * x * x * ai * ai - 2 * x * aip * aip - ai * aip) / 3;
  return {-ai, -aip, v, Real(-int_ai), w};
}

double integral_of_ai(double x) {
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate([x](double s) { return boost::math::airy_ai(x + s); });
}

double quintic_hermite(double a, double b, double x, double fa, double da, double sa, double fb,
                       double db, double sb) {
  const double h = b - a;
  const double s = (x - a) / h;
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
  const double h0 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
  const double h1 = s - 6 * s3 + 8 * s4 - 3 * s5;
  const double h2 = 0.5 * (s2 - 3 * s3 + 3 * s4 - s5);
  const double h3 = 0.5 * (s3 - 2 * s4 + s5);
  const double h4 = -4 * s3 + 7 * s4 - 3 * s5;
  const double h5 = 10 * s3 - 15 * s4 + 6 * s5;
  return fa * h0 + h * da * h1 + h * h * sa * h2 + fb * h5 + h * db * h4 + h * h * sb * h3;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// y ~ A - c |x|^p: for fixed p the best (A, c) is linear least squares.
TailFit fit_power_tail(const std::vector<double>& xs, const std::vector<double>& ys) {
  auto solve = [&](double p, TailFit& fit) {
    std::vector<double> z(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) z[i] = std::pow(std::abs(xs[i]), p);
    const double slope = least_squares_slope(z, ys);
    double mz = 0, my = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      mz += z[i];
      my += ys[i];
    }
    mz /= static_cast<double>(z.size());
    my /= static_cast<double>(z.size());
    fit.exponent = p;
    fit.coefficient = -slope;
    fit.offset = my - slope * mz;
    double ss = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double r = ys[i] - (fit.offset + slope * z[i]);
      ss += r * r;
    }
    fit.rms = std::sqrt(ss / static_cast<double>(z.size()));
    return fit.rms;
  };
  TailFit fit;
  const auto best = boost::math::tools::brent_find_minima(
      [&](double p) {
        TailFit tmp;
        return solve(p, tmp);
      },
      0.5, 5.0, 40);
  solve(best.first, fit);
  return fit;
}

}  // namespace

PiiSolution solve_hastings_mcleod(double x_min, double x_max, double tol) {
  if (!(x_max >= 6.0)) throw ValidationError("solve_hastings_mcleod: x_max must be >= 6");
  if (!(x_min >= -12.0)) throw ValidationError("solve_hastings_mcleod: x_min must be >= -12");
  if (!(x_min < x_max)) throw ValidationError("solve_hastings_mcleod: x_min must be < x_max");
  if (!(tol > 0.0 && tol < 1e-6)) throw ValidationError("solve_hastings_mcleod: tol outside (0, 1e-6)");

  using Q = QuadReal;
  using State = std::array<Q, 5>;
  // State (u, u', v, I, W): v' = u^2, I' = -u, W' = -v.
  auto rhs = [](const Q& x, const State& y, State& dy) {
    dy[0] = y[1];
    dy[1] = 2 * y[0] * y[0] * y[0] + x * y[0];
    dy[2] = y[0] * y[0];
    dy[3] = -y[0];
    dy[4] = -y[2];
  };
  Dop853<Q, 5, decltype(rhs)> ode(rhs, Q(tol), Q(tol) * Q(1e-40));

  const double x_start = std::max(x_max, kAiryStart);
  Q x(x_start);
  State y = airy_state<Q>(x, integral_of_ai(x_start));
  ode.set_initial_step(Q(-1e-3));

  std::vector<double> nodes;
  for (int i = 0;; ++i) {
    const double xi = x_max - i * kPiiGridStep;
    if (xi <= x_min) {
      nodes.push_back(x_min);
      break;
    }
    nodes.push_back(xi);
  }

  PiiSolution sol;
  sol.x_right = x_max;
  sol.x_start = x_start;
  sol.tol = tol;
  const std::size_t n = nodes.size();
  sol.grid.resize(n);
  sol.u.resize(n);
  sol.du.resize(n);
  sol.v.resize(n);
  sol.I.resize(n);
  sol.log_f.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!ode.advance_to(x, y, Q(nodes[i]))) {
      std::ostringstream os;
      os << "Painleve II integration stalled near x = " << static_cast<double>(x);
      throw NumericalError(os.str());
    }
    if (abs(y[0]) > Q(kBlowUpGuard)) {
      std::ostringstream os;
      os << "Painleve II solution blew up near x = " << nodes[i]
         << " (|u| > " << kBlowUpGuard << "; wrong branch or tolerance too loose)";
      throw NumericalError(os.str());
    }
    const std::size_t j = n - 1 - i;
    sol.grid[j] = nodes[i];
    sol.u[j] = static_cast<double>(y[0]);
    sol.du[j] = static_cast<double>(y[1]);
    sol.v[j] = static_cast<double>(y[2]);
    sol.I[j] = static_cast<double>(y[3]);
    sol.log_f[j] = static_cast<double>(y[4]);
  }
  sol.steps = ode.steps();
  sol.rejected = ode.rejected();
  sol.boundary_defect = std::abs(sol.u.back() + boost::math::airy_ai(x_max));
  return sol;
}

PiiPoint pii_eval(const PiiSolution& sol, double x) {
  if (sol.grid.empty()) throw ValidationError("empty Painleve II solution");
  if (x < sol.grid.front()) {
    std::ostringstream os;
    os << "x = " << x << " below the solution grid (x_min = " << sol.grid.front() << ")";
    throw ValidationError(os.str());
  }
  PiiPoint p;
  if (x >= sol.x_right) {
    if (x == sol.x_right) {
      const std::size_t j = sol.grid.size() - 1;
      return {sol.u[j], sol.du[j], sol.v[j], sol.I[j], sol.log_f[j]};
    }
    if (std::isinf(x)) return p;
    const auto s = airy_state<double>(x, integral_of_ai(x));
    return {s[0], s[1], s[2], s[3], s[4]};
  }
  auto it = std::upper_bound(sol.grid.begin(), sol.grid.end(), x);
  std::size_t hi = static_cast<std::size_t>(it - sol.grid.begin());
  if (hi >= sol.grid.size()) hi = sol.grid.size() - 1;
  const std::size_t lo = hi - 1;
  const double a = sol.grid[lo], b = sol.grid[hi];
  auto d2u = [&](std::size_t i) {
    const double u = sol.u[i];
    return 2 * u * u * u + sol.grid[i] * u;
  };
  p.u = quintic_hermite(a, b, x, sol.u[lo], sol.du[lo], d2u(lo), sol.u[hi], sol.du[hi], d2u(hi));
  // u' interpolated from (u', u'', u''') with u''' = (6u^2 + x) u' + u.
  auto d3u = [&](std::size_t i) {
    const double u = sol.u[i];
    return (6 * u * u + sol.grid[i]) * sol.du[i] + u;
  };
  p.du = quintic_hermite(a, b, x, sol.du[lo], d2u(lo), d3u(lo), sol.du[hi], d2u(hi), d3u(hi));
  p.v = quintic_hermite(a, b, x, sol.v[lo], sol.u[lo] * sol.u[lo], 2 * sol.u[lo] * sol.du[lo],
                        sol.v[hi], sol.u[hi] * sol.u[hi], 2 * sol.u[hi] * sol.du[hi]);
  p.I = quintic_hermite(a, b, x, sol.I[lo], -sol.u[lo], -sol.du[lo], sol.I[hi], -sol.u[hi],
                        -sol.du[hi]);
  p.log_f = quintic_hermite(a, b, x, sol.log_f[lo], -sol.v[lo], -sol.u[lo] * sol.u[lo],
                            sol.log_f[hi], -sol.v[hi], -sol.u[hi] * sol.u[hi]);
  return p;
}

double log_f_gue(const PiiSolution& sol, double x) { return pii_eval(sol, x).log_f; }

double f_gue(const PiiSolution& sol, double x) { return std::exp(log_f_gue(sol, x)); }

double f_goe(const PiiSolution& sol, double x) {
  const PiiPoint p = pii_eval(sol, x);
  return std::exp(0.5 * p.I + 0.5 * p.log_f);
}

double f_gse(const PiiSolution& sol, double x) {
  const PiiPoint p = pii_eval(sol, x);
  // In log space: near the right edge both factors round to 1 and their
  // product loses monotonicity otherwise.
  const double y = 0.5 * std::abs(p.I);
  const double log_cosh =
      y < 1e-3 ? 0.5 * y * y - y * y * y * y / 12.0 : y + std::log1p(std::exp(-2.0 * y)) - std::log(2.0);
  return std::exp(log_cosh + 0.5 * p.log_f);
}

double edge_scaling_x(double t, int k) {
  return std::cbrt(2.0) * std::pow(static_cast<double>(k), 2.0 / 3.0) * (1.0 - 2.0 * t / k);
}

double edge_scaling_t(double x, int k) {
  const double kk = static_cast<double>(k);
  return 0.5 * kk * (1.0 - x / (std::cbrt(2.0) * std::pow(kk, 2.0 / 3.0)));
}

CornerReport corner_asymptotics_check(const OpucData& data, double t, int k,
                                      const PiiSolution& sol) {
  CornerReport r;
  r.k = k;
  r.t = t;
  r.x = edge_scaling_x(t, k);
  if (std::abs(r.x) > 3.0 + 1e-12) {
    std::ostringstream os;
    os << "scaled x = " << r.x
       << " outside [-3, 3]; for x > 3 the corner deviation decays like k^{-1/3} e^{-c x^{3/2}}, "
          "for x < -3 the large-deviation regime applies";
    throw ValidationError(os.str());
  }
  const YCorner y = y_corner(data, k);
  const PiiPoint p = pii_eval(sol, r.x);
  const double scale = std::cbrt(2.0) / std::cbrt(static_cast<double>(k));
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  // Y21(0;k) = a = -1/N_{k-1}, Y11(0;k) = pi_k(0) = -b(k).
  r.y21_deviation = std::abs(-y.a - 1.0 - scale * p.v);
  r.y11_deviation = std::abs(-y.b + sign * scale * p.u);
  const double k23 = std::pow(static_cast<double>(k), 2.0 / 3.0);
  r.y21_constant = r.y21_deviation * k23;
  r.y11_constant = r.y11_deviation * k23;
  return r;
}

CornerStudy corner_asymptotics_study(double x, const std::vector<int>& ks,
                                     const PiiSolution& sol) {
  if (ks.size() < 2) throw ValidationError("corner study needs at least two k values");
  CornerStudy study;
  study.x = x;
  std::vector<double> lk, l21, l11;
  for (int k : ks) {
    const double t = edge_scaling_t(x, k);
    const OpucData data = levinson(build_symbol(ModelSpec::poisson_square(t)), k + 1);
    study.rows.push_back(corner_asymptotics_check(data, t, k, sol));
    lk.push_back(std::log(static_cast<double>(k)));
    l21.push_back(std::log(study.rows.back().y21_deviation));
    l11.push_back(std::log(study.rows.back().y11_deviation));
  }
  study.y21_slope = least_squares_slope(lk, l21);
  study.y11_slope = least_squares_slope(lk, l11);
  return study;
}

TailFit fit_right_tail(const PiiSolution& sol, double x0, double x1, int samples) {
  if (!(x0 > 0.0 && x1 > x0) || samples < 4) throw ValidationError("bad right-tail fit window");
  std::vector<double> xs, ys;
  for (int i = 0; i < samples; ++i) {
    const double x = x0 + (x1 - x0) * i / (samples - 1);
    xs.push_back(x);
    ys.push_back(std::log(-std::expm1(log_f_gue(sol, x))));
  }
  return fit_power_tail(xs, ys);
}

TailFit fit_left_tail(const PiiSolution& sol, double x0, double x1, int samples) {
  if (!(x1 < 0.0 && x0 < x1) || samples < 4) throw ValidationError("bad left-tail fit window");
  std::vector<double> xs, ys;
  for (int i = 0; i < samples; ++i) {
    const double x = x0 + (x1 - x0) * i / (samples - 1);
    xs.push_back(x);
    ys.push_back(log_f_gue(sol, x));
  }
  return fit_power_tail(xs, ys);
}

}  // namespace lpp
