#pragma once

// Dormand-Prince 8(5,3) embedded pair with Hairer's error estimator, generic
// in the scalar type so it can run in float128.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <type_traits>

namespace lpp {

template <class Real>
Real parse_literal(const char* s) {
  if constexpr (std::is_floating_point_v<Real>) {
    return static_cast<Real>(std::strtold(s, nullptr));
  } else {
    return Real(s);
  }
}

template <class Real>
struct Dop853Tableau {
  Real c2, c3, c4, c5, c6, c7, c8, c9, c10, c11;
  Real b1, b6, b7, b8, b9, b10, b11, b12;
  Real a21, a31, a32, a41, a43, a51, a53, a54, a61, a64, a65, a71, a74, a75, a76;
  Real a81, a84, a85, a86, a87, a91, a94, a95, a96, a97, a98;
  Real a101, a104, a105, a106, a107, a108, a109;
  Real a111, a114, a115, a116, a117, a118, a119, a1110;
  Real a121, a124, a125, a126, a127, a128, a129, a1210, a1211;
  Real bhh1, bhh2, bhh3;
  Real er1, er6, er7, er8, er9, er10, er11, er12;

  static const Dop853Tableau& get() {
    static const Dop853Tableau t = make();
    return t;
  }

 private:
  static Dop853Tableau make() {
    auto L = parse_literal<Real>;
    Dop853Tableau t;
    t.c2 = L("0.526001519587677318785587544488E-01");
    t.c3 = L("0.789002279381515978178381316732E-01");
    t.c4 = L("0.118350341907227396726757197510E+00");
    t.c5 = L("0.281649658092772603273242802490E+00");
    t.c6 = L("0.333333333333333333333333333333333E+00");
    t.c7 = L("0.25E+00");
    t.c8 = L("0.307692307692307692307692307692307E+00");
    t.c9 = L("0.651282051282051282051282051282051E+00");
    t.c10 = L("0.6E+00");
    t.c11 = L("0.857142857142857142857142857142857E+00");
    t.b1 = L("5.42937341165687622380535766363E-2");
    t.b6 = L("4.45031289275240888144113950566E0");
    t.b7 = L("1.89151789931450038304281599044E0");
    t.b8 = L("-5.8012039600105847814672114227E0");
    t.b9 = L("3.1116436695781989440891606237E-1");
    t.b10 = L("-1.52160949662516078556178806805E-1");
    t.b11 = L("2.01365400804030348374776537501E-1");
    t.b12 = L("4.47106157277725905176885569043E-2");
    t.a21 = L("5.26001519587677318785587544488E-2");
    t.a31 = L("1.97250569845378994544595329183E-2");
    t.a32 = L("5.91751709536136983633785987549E-2");
    t.a41 = L("2.95875854768068491816892993775E-2");
    t.a43 = L("8.87627564304205475450678981324E-2");
    t.a51 = L("2.41365134159266685502369798665E-1");
    t.a53 = L("-8.84549479328286085344864962717E-1");
    t.a54 = L("9.24834003261792003115737966543E-1");
    t.a61 = L("3.7037037037037037037037037037037E-2");
    t.a64 = L("1.70828608729473871279604482173E-1");
    t.a65 = L("1.25467687566822425016691814123E-1");
    t.a71 = L("3.7109375E-2");
    t.a74 = L("1.70252211019544039314978060272E-1");
    t.a75 = L("6.02165389804559606850219397283E-2");
    t.a76 = L("-1.7578125E-2");
    t.a81 = L("3.70920001185047927108779319836E-2");
    t.a84 = L("1.70383925712239993810214054705E-1");
    t.a85 = L("1.07262030446373284651809199168E-1");
    t.a86 = L("-1.53194377486244017527936158236E-2");
    t.a87 = L("8.27378916381402288758473766002E-3");
    t.a91 = L("6.24110958716075717114429577812E-1");
    t.a94 = L("-3.36089262944694129406857109825E0");
    t.a95 = L("-8.68219346841726006818189891453E-1");
    t.a96 = L("2.75920996994467083049415600797E1");
    t.a97 = L("2.01540675504778934086186788979E1");
    t.a98 = L("-4.34898841810699588477366255144E1");
    t.a101 = L("4.77662536438264365890433908527E-1");
    t.a104 = L("-2.48811461997166764192642586468E0");
    t.a105 = L("-5.90290826836842996371446475743E-1");
    t.a106 = L("2.12300514481811942347288949897E1");
    t.a107 = L("1.52792336328824235832596922938E1");
    t.a108 = L("-3.32882109689848629194453265587E1");
    t.a109 = L("-2.03312017085086261358222928593E-2");
    t.a111 = L("-9.3714243008598732571704021658E-1");
    t.a114 = L("5.18637242884406370830023853209E0");
    t.a115 = L("1.09143734899672957818500254654E0");
    t.a116 = L("-8.14978701074692612513997267357E0");
    t.a117 = L("-1.85200656599969598641566180701E1");
    t.a118 = L("2.27394870993505042818970056734E1");
    t.a119 = L("2.49360555267965238987089396762E0");
    t.a1110 = L("-3.0467644718982195003823669022E0");
    t.a121 = L("2.27331014751653820792359768449E0");
    t.a124 = L("-1.05344954667372501984066689879E1");
    t.a125 = L("-2.00087205822486249909675718444E0");
    t.a126 = L("-1.79589318631187989172765950534E1");
    t.a127 = L("2.79488845294199600508499808837E1");
    t.a128 = L("-2.85899827713502369474065508674E0");
    t.a129 = L("-8.87285693353062954433549289258E0");
    t.a1210 = L("1.23605671757943030647266201528E1");
    t.a1211 = L("6.43392746015763530355970484046E-1");
    t.bhh1 = L("0.244094488188976377952755905512E+00");
    t.bhh2 = L("0.733846688281611857341361741547E+00");
    t.bhh3 = L("0.220588235294117647058823529412E-01");
    t.er1 = L("0.1312004499419488073250102996E-01");
    t.er6 = L("-0.1225156446376204440720569753E+01");
    t.er7 = L("-0.4957589496572501915214079952E+00");
    t.er8 = L("0.1664377182454986536961530415E+01");
    t.er9 = L("-0.3503288487499736816886487290E+00");
    t.er10 = L("0.3341791187130174790297318841E+00");
    t.er11 = L("0.8192320648511571246570742613E-01");
    t.er12 = L("-0.2235530786388629525884427845E-01");
    return t;
  }
};

/// One adaptive integrator instance for y' = f(x, y) with N components.
/// `advance_to` lands exactly on the requested abscissa, so callers can
/// sample a fixed grid without dense output.
template <class Real, std::size_t N, class F>
class Dop853 {
 public:
  using State = std::array<Real, N>;

  Dop853(F f, Real rtol, Real atol) : f_(std::move(f)), rtol_(rtol), atol_(atol) {}

  void set_initial_step(Real h) { h_ = h; }
  long steps() const { return accepted_; }
  long rejected() const { return rejected_; }

  /// Integrates y from x to x_end (either direction). Throws via the
  /// callback type's own checks; returns false if the step size underflows.
  bool advance_to(Real& x, State& y, Real x_end) {
    using std::abs;
    using std::max;
    using std::min;
    using std::pow;
    const Real dir = x_end > x ? Real(1) : Real(-1);
    if (h_ == Real(0)) h_ = dir * Real(1e-3);
    if (h_ * dir < Real(0)) h_ = -h_;
    const Real safe(0.9), facc1(3), facc2(6);
    while ((x_end - x) * dir > Real(0)) {
      bool last = false;
      Real h = h_;
      if ((x + h - x_end) * dir >= Real(0)) {
        h = x_end - x;
        last = true;
      }
      if (abs(h) < abs(x) * Real(1e-30) + Real(1e-40)) return false;
      State y_new;
      const Real err = attempt(x, y, h, y_new);
      Real fac11 = pow(err, Real(0.125));
      if (err <= Real(1)) {
        ++accepted_;
        x = last ? x_end : x + h;
        y = y_new;
        Real fac = max(Real(1) / facc2, min(facc1, fac11 / safe));
        Real hn = h / fac;
        if (rejected_last_) hn = dir * min(abs(hn), abs(h));
        rejected_last_ = false;
        // A step clipped to land on x_end keeps the earlier, larger proposal
        // unless the error estimate asks for a smaller one.
        if (!last || fac > Real(1)) h_ = hn;
      } else {
        ++rejected_;
        rejected_last_ = true;
        h_ = h / min(facc1, fac11 / safe);
      }
    }
    return true;
  }

 private:
  Real attempt(Real x, const State& y, Real h, State& y_new) {
    using std::abs;
    using std::max;
    using std::sqrt;
    const auto& T = Dop853Tableau<Real>::get();
    State k1, k2, k3, k4, k5, k6, k7, k8, k9, k10, w;
    f_(x, y, k1);
    for (std::size_t i = 0; i < N; ++i) w[i] = y[i] + h * T.a21 * k1[i];
    f_(x + T.c2 * h, w, k2);
    for (std::size_t i = 0; i < N; ++i) w[i] = y[i] + h * (T.a31 * k1[i] + T.a32 * k2[i]);
    f_(x + T.c3 * h, w, k3);
    for (std::size_t i = 0; i < N; ++i) w[i] = y[i] + h * (T.a41 * k1[i] + T.a43 * k3[i]);
    f_(x + T.c4 * h, w, k4);
    for (std::size_t i = 0; i < N; ++i)
      w[i] = y[i] + h * (T.a51 * k1[i] + T.a53 * k3[i] + T.a54 * k4[i]);
    f_(x + T.c5 * h, w, k5);
    for (std::size_t i = 0; i < N; ++i)
      w[i] = y[i] + h * (T.a61 * k1[i] + T.a64 * k4[i] + T.a65 * k5[i]);
    f_(x + T.c6 * h, w, k6);
    for (std::size_t i = 0; i < N; ++i)
      w[i] = y[i] + h * (T.a71 * k1[i] + T.a74 * k4[i] + T.a75 * k5[i] + T.a76 * k6[i]);
    f_(x + T.c7 * h, w, k7);
    for (std::size_t i = 0; i < N; ++i)
      w[i] = y[i] + h * (T.a81 * k1[i] + T.a84 * k4[i] + T.a85 * k5[i] + T.a86 * k6[i] +
                         T.a87 * k7[i]);
    f_(x + T.c8 * h, w, k8);
    for (std::size_t i = 0; i < N; ++i)
      w[i] = y[i] + h * (T.a91 * k1[i] + T.a94 * k4[i] + T.a95 * k5[i] + T.a96 * k6[i] +
                         T.a97 * k7[i] + T.a98 * k8[i]);
    f_(x + T.c9 * h, w, k9);
    for (std::size_t i = 0; i < N; ++i)
      w[i] = y[i] + h * (T.a101 * k1[i] + T.a104 * k4[i] + T.a105 * k5[i] + T.a106 * k6[i] +
                         T.a107 * k7[i] + T.a108 * k8[i] + T.a109 * k9[i]);
    f_(x + T.c10 * h, w, k10);
    // Stage 11 goes into k2 and stage 12 into k3, as in Hairer's layout.
    for (std::size_t i = 0; i < N; ++i)
      w[i] = y[i] + h * (T.a111 * k1[i] + T.a114 * k4[i] + T.a115 * k5[i] + T.a116 * k6[i] +
                         T.a117 * k7[i] + T.a118 * k8[i] + T.a119 * k9[i] + T.a1110 * k10[i]);
    f_(x + T.c11 * h, w, k2);
    for (std::size_t i = 0; i < N; ++i)
      w[i] = y[i] + h * (T.a121 * k1[i] + T.a124 * k4[i] + T.a125 * k5[i] + T.a126 * k6[i] +
                         T.a127 * k7[i] + T.a128 * k8[i] + T.a129 * k9[i] + T.a1210 * k10[i] +
                         T.a1211 * k2[i]);
    f_(x + h, w, k3);
    for (std::size_t i = 0; i < N; ++i) {
      k4[i] = T.b1 * k1[i] + T.b6 * k6[i] + T.b7 * k7[i] + T.b8 * k8[i] + T.b9 * k9[i] +
              T.b10 * k10[i] + T.b11 * k2[i] + T.b12 * k3[i];
      y_new[i] = y[i] + h * k4[i];
    }

    Real err(0), err2(0);
    for (std::size_t i = 0; i < N; ++i) {
      const Real sk = Real(1) / (atol_ + rtol_ * max(abs(y[i]), abs(y_new[i])));
      Real s = (k4[i] - T.bhh1 * k1[i] - T.bhh2 * k9[i] - T.bhh3 * k3[i]) * sk;
      err2 += s * s;
      s = (T.er1 * k1[i] + T.er6 * k6[i] + T.er7 * k7[i] + T.er8 * k8[i] + T.er9 * k9[i] +
           T.er10 * k10[i] + T.er11 * k2[i] + T.er12 * k3[i]) *
          sk;
      err += s * s;
    }
    Real deno = err + Real(0.01) * err2;
    if (deno <= Real(0)) deno = Real(1);
    return abs(h) * err * sqrt(Real(1) / (deno * Real(static_cast<double>(N))));
  }

  F f_;
  Real rtol_;
  Real atol_;
  Real h_{0};
  long accepted_ = 0;
  long rejected_ = 0;
  bool rejected_last_ = false;
};

}  // namespace lpp
