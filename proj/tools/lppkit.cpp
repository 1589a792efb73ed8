#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include <Eigen/Dense>

#include "CLI11.hpp"
#include "lpp/error.hpp"
#include "lpp/exact_dist.hpp"
#include "lpp/fredholm.hpp"
#include "lpp/io.hpp"
#include "lpp/montecarlo.hpp"
#include "lpp/opuc.hpp"
#include "lpp/painleve.hpp"

namespace fs = std::filesystem;
using namespace lpp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitVerification = 3;

struct Globals {
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  int workers = 1;
  std::string precision = "auto";

  Precision profile() const { return parse_precision(precision); }
};

// Collects output files and writes manifest_<tag>.json next to them.
class Run {
 public:
  Run(const Globals& g, std::string command, std::string tag)
      : dir_(g.out_dir), command_(std::move(command)), tag_(std::move(tag)) {
    fs::create_directories(dir_);
  }

  void param(const std::string& key, json value) { params_[key] = std::move(value); }
  void seed(std::uint64_t s) { seed_ = s; }
  void note(const std::string& key, json value) { notes_[key] = std::move(value); }

  void write(const std::string& name, const std::string& content) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + (dir_ / name).string());
    out << content;
    out.close();
    outputs_.push_back(name);
  }

  void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

  void finish() const {
    json outs = json::array();
    for (const auto& name : outputs_) {
      outs.push_back(json{{"path", name}, {"sha256", sha256_file(dir_ / name)}});
    }
    json m{{"command", command_},
           {"parameters", params_},
           {"versions", {{"code", kCodeVersion}, {"cache_format", kCacheFormatVersion}}},
           {"seed", seed_ ? json(*seed_) : json(nullptr)},
           {"outputs", outs}};
    if (!notes_.empty()) m["notes"] = notes_;
    std::ofstream out(dir_ / ("manifest_" + tag_ + ".json"), std::ios::binary);
    out << m.dump(2) << "\n";
  }

 private:
  fs::path dir_;
  std::string command_;
  std::string tag_;
  json params_ = json::object();
  json notes_ = json::object();
  std::optional<std::uint64_t> seed_;
  std::vector<std::string> outputs_;
};

// Every option of the subcommand chain, as given or defaulted, root first.
void record_options(Run& run, const CLI::App* app) {
  if (app->get_parent() != nullptr) record_options(run, app->get_parent());
  for (const CLI::Option* opt : app->get_options()) {
    const std::string name = opt->get_name(false, true);
    if (name.empty() || name == "--help" || name == "--config") continue;
    auto res = opt->reduced_results();
    std::string key = opt->get_lnames().empty() ? name : opt->get_lnames().front();
    if (key.empty()) key = opt->get_single_name();
    if (res.empty()) {
      const std::string d = opt->get_default_str();
      if (d.empty()) continue;
      run.param(key, d);
    } else if (res.size() == 1) {
      run.param(key, res.front());
    } else {
      run.param(key, res);
    }
  }
}

struct ModelFlags {
  std::string model = "square";
  double t = 0.0;
  double alpha = 0.0;
  double alpha_plus = 0.0;
  double alpha_minus = 0.0;
  std::vector<double> q;
  std::vector<double> qp;
  std::vector<double> rates;
  int M = 0;
  int N = 0;

  void add(CLI::App* app) {
    app->add_option("--t", t, "Poisson intensity parameter t");
    app->add_option("--alpha", alpha, "diagonal source rate (triangle, symmetric lattices)");
    app->add_option("--ap,--alpha-plus", alpha_plus, "source rate on the bottom edge");
    app->add_option("--am,--alpha-minus", alpha_minus, "source rate on the left edge");
    app->add_option("--q", q, "row parameters q_i (lattices), or q for symmetric lattices");
    app->add_option("--qp", qp, "column parameters q'_j (lattices)");
    app->add_option("--rates", rates, "line rates (Poisson-line models)");
    app->add_option("--M", M, "repeat a single --q value M times");
    app->add_option("--N", N, "repeat a single --qp (or --q, --rates) value N times");
  }

  static std::vector<double> repeat(std::vector<double> v, int n, const char* flag) {
    if (n > 0 && v.size() == 1) return std::vector<double>(static_cast<std::size_t>(n), v.front());
    if (n > 0 && static_cast<int>(v.size()) != n) {
      throw ValidationError(std::string(flag) + " has " + std::to_string(v.size()) +
                            " values but the size flag asks for " + std::to_string(n));
    }
    return v;
  }

  ModelSpec build() const {
    const ModelKind kind = parse_model_kind(model);
    ModelSpec m;
    switch (kind) {
      case ModelKind::PoissonSquare:
        m = ModelSpec::poisson_square(t);
        break;
      case ModelKind::PoissonTriangle:
      case ModelKind::TrianglePoissonFS:
        m = ModelSpec::poisson_triangle(t, alpha);
        m.kind = kind;
        break;
      case ModelKind::PoissonExternal:
        m = ModelSpec::poisson_external(t, alpha_plus, alpha_minus);
        break;
      case ModelKind::LatticeA:
      case ModelKind::LatticeB:
      case ModelKind::LatticeC:
        m = ModelSpec::lattice(kind, repeat(q, M, "--q"), repeat(qp, N, "--qp"));
        break;
      case ModelKind::PoissonLinesD:
      case ModelKind::PoissonLinesE:
        m = ModelSpec::poisson_lines(kind, t, repeat(rates.empty() ? q : rates, N, "--rates"));
        break;
      case ModelKind::SymmetricLatticeA:
      case ModelKind::SymmetricLatticeC:
        m = ModelSpec::symmetric_lattice(kind, alpha, repeat(q, N, "--q"));
        break;
    }
    return validated(m);
  }
};

std::string csv_row(std::initializer_list<std::string> cells) {
  std::string s;
  for (const auto& c : cells) {
    if (!s.empty()) s += ',';
    s += c;
  }
  return s + '\n';
}

std::string f(double x) { return format_double(x); }

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  std::string relation = "<";  // value < threshold, or "|.-c|<=" for windows
  bool pass = false;
};

json checks_json(const std::vector<Check>& cs) {
  json a = json::array();
  for (const auto& c : cs) {
    a.push_back(json{{"name", c.name},
                     {"value", c.value},
                     {"relation", c.relation},
                     {"threshold", c.threshold},
                     {"pass", c.pass}});
  }
  return a;
}

Check below(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, "<", value < threshold};
}

Check within(std::string name, double value, double target, double half_width) {
  Check c{std::move(name), value, half_width, "|value - " + format_double(target) + "| <=", false};
  c.pass = std::abs(value - target) <= half_width;
  return c;
}

bool all_pass(const std::vector<Check>& cs) {
  for (const auto& c : cs) {
    if (!c.pass) return false;
  }
  return true;
}

OpucData square_data(double t, Precision p, int cutoff, Run& run) {
  bool hit = false;
  OpucData d = cached_levinson(build_symbol(ModelSpec::poisson_square(t)),
                               cutoff < 0 ? default_square_cutoff(t) : cutoff, p, &hit);
  run.note("opuc_cache_t=" + format_double(t), hit ? "hit" : "miss");
  return d;
}

PiiSolution pii(Run& run) {
  bool hit = false;
  PiiSolution s = cached_hastings_mcleod(-12.0, 8.0, kDefaultPiiTolerance, &hit);
  run.note("pii_cache", hit ? "hit" : "miss");
  return s;
}

// --- dist -------------------------------------------------------------------

int cmd_dist(const Globals& g, const ModelFlags& mf, int lmax, const CLI::App* app) {
  const ModelSpec model = mf.build();
  Run run(g, "dist", "dist_" + mf.model);
  record_options(run, app);
  const DistTable table = dist_table(model, lmax, g.profile());
  std::ostringstream csv;
  write_dist_csv(csv, table);
  run.write("dist_" + mf.model + ".csv", csv.str());
  run.write_json("dist_" + mf.model + ".json", json(table));
  run.finish();
  return kExitOk;
}

// --- tw ---------------------------------------------------------------------

int cmd_tw(const Globals& g, const std::string& which, double xmin, double xmax, double step,
           bool export_pii, const CLI::App* app) {
  if (which != "gue" && which != "goe" && which != "gse") {
    throw ValidationError("--which must be gue, goe or gse");
  }
  if (!(step > 0.0) || !(xmax >= xmin)) throw ValidationError("need step > 0 and xmax >= xmin");
  if (xmin < -12.0) throw ValidationError("x below -12 is outside the solver range");
  Run run(g, "tw", "tw_" + which);
  record_options(run, app);
  const PiiSolution sol = pii(run);
  std::string csv = "x,F\n";
  const long n = std::lround(std::floor((xmax - xmin) / step + 1e-9));
  for (long i = 0; i <= n; ++i) {
    const double x = xmin + static_cast<double>(i) * step;
    const double v = which == "gue" ? f_gue(sol, x) : which == "goe" ? f_goe(sol, x) : f_gse(sol, x);
    csv += csv_row({f(x), f(v)});
  }
  run.write("tw_" + which + ".csv", csv);
  if (export_pii) {
    std::ostringstream os;
    write_pii_csv(os, sol);
    run.write("pii_solution.csv", os.str());
  }
  run.finish();
  return kExitOk;
}

// --- verify -----------------------------------------------------------------

int finish_verify(Run& run, const std::string& suite, json report, const std::vector<Check>& checks) {
  const bool pass = all_pass(checks);
  json out{{"suite", suite}, {"pass", pass}, {"checks", checks_json(checks)}};
  for (auto& [k, v] : report.items()) out[k] = v;
  run.write_json("verify_" + suite + ".json", out);
  run.finish();
  std::cout << "verify " << suite << ": " << (pass ? "PASS" : "FAIL") << "\n";
  for (const auto& c : checks) {
    if (!c.pass) std::cout << "  failed: " << c.name << " = " << format_double(c.value) << "\n";
  }
  return pass ? kExitOk : kExitVerification;
}

int cmd_verify_dpii(const Globals& g, const std::vector<double>& ts, int kmax, const CLI::App* app) {
  Run run(g, "verify dpii", "verify_dpii");
  record_options(run, app);
  std::vector<Check> checks;
  json per_t = json::array();
  for (double t : ts) {
    const OpucData d = square_data(t, g.profile(), -1, run);
    const int k_hi = std::min(kmax, d.cutoff - 1);
    json rows = json::array();
    double worst = 0.0;
    for (int k = 2; k <= k_hi; ++k) {
      const double r = t > 0.0 ? std::abs(dpii_residual(d, t, k)) : 0.0;
      worst = std::max(worst, r);
      rows.push_back(json{{"k", k}, {"b", d.b(k)}, {"residual", r}});
    }
    const RecurrenceReport rec = recurrence_checks(d);
    const std::string tag = "t=" + format_double(t);
    checks.push_back(below("dpii_residual " + tag, worst, 1e-8));
    checks.push_back(below("a_recurrence " + tag, rec.a_deviation, 1e-9));
    checks.push_back(below("d_recurrence " + tag, rec.d_deviation, 1e-9));
    checks.push_back(below("unimodular " + tag, rec.unimodular_deviation, 1e-10));
    per_t.push_back(json{{"t", t}, {"cutoff", d.cutoff}, {"k_max", k_hi}, {"recurrence", rec}, {"rows", rows}});
  }
  return finish_verify(run, "dpii", json{{"per_t", per_t}}, checks);
}

int cmd_verify_fredholm(const Globals& g, const std::vector<double>& ts, int kmax, int nodes,
                        const CLI::App* app) {
  Run run(g, "verify fredholm", "verify_fredholm");
  record_options(run, app);
  std::vector<Check> checks;
  json per_t = json::array();
  for (double t : ts) {
    const OpucData d = square_data(t, g.profile(), std::max(kmax, default_square_cutoff(t)), run);
    const FredholmReport r = identity_checks(t, kmax, d, nodes);
    const std::string tag = "t=" + format_double(t);
    checks.push_back(below("product_identity " + tag, r.max_product_residual, 1e-6));
    checks.push_back(below("ratio_identity " + tag, r.max_ratio_residual, 1e-6));
    json edge = json::array();
    double worst_edge = 0.0;
    const int k0 = static_cast<int>(std::ceil(2.0 * t + 15.0));
    for (int k = k0; k <= k0 + 4; ++k) {
      const double ld = fredholm_log_det(IntegrableKernelSpec::square(t, k, nodes)).real();
      const double dev = std::abs(std::exp(ld - k * std::log(2.0)) - 1.0);
      worst_edge = std::max(worst_edge, dev);
      edge.push_back(json{{"k", k}, {"log_det", ld}, {"deviation", dev}});
    }
    checks.push_back(below("edge_normalization " + tag, worst_edge, 1e-6));
    per_t.push_back(json{{"report", r}, {"edge", edge}});
  }
  return finish_verify(run, "fredholm", json{{"per_t", per_t}}, checks);
}

int cmd_verify_corner(const Globals& g, const std::vector<double>& xs, const std::vector<int>& ks,
                      const CLI::App* app) {
  Run run(g, "verify corner-asymptotics", "verify_corner-asymptotics");
  record_options(run, app);
  const PiiSolution sol = pii(run);
  std::vector<Check> checks;
  json studies = json::array();
  for (double x : xs) {
    const CornerStudy s = corner_asymptotics_study(x, ks, sol);
    const std::string tag = "x=" + format_double(x);
    checks.push_back(within("y21_slope " + tag, s.y21_slope, -2.0 / 3.0, 0.2));
    checks.push_back(within("y11_slope " + tag, s.y11_slope, -2.0 / 3.0, 0.2));
    studies.push_back(s);
  }
  return finish_verify(run, "corner-asymptotics", json{{"studies", studies}}, checks);
}

int cmd_verify_mc_cross(const Globals& g, const ModelFlags& mf, long trials, int lmax, const CLI::App* app) {
  const ModelSpec model = mf.build();
  Run run(g, "verify mc-cross", "verify_mc-cross");
  record_options(run, app);
  run.seed(g.seed);
  const EmpiricalCdf emp = simulate(SimConfig{model, trials, g.seed, g.workers});
  const int top = lmax >= 0 ? lmax : emp.max_value() + 1;
  const DistTable table = dist_table(model, top, g.profile());
  std::map<int, double> exact;
  for (const auto& [ell, e] : table.entries) exact[ell] = e.p;
  const CdfComparison cmp = compare_cdf(emp, exact);
  std::string csv = "ell,exact,empirical,stderr,z,checked\n";
  for (const auto& r : cmp.rows) {
    csv += csv_row({std::to_string(r.ell), f(r.exact), f(r.empirical), f(r.std_error), f(r.z),
                    r.checked ? "1" : "0"});
  }
  run.write("mc_cross.csv", csv);
  Check c = below("max_abs_z", cmp.max_abs_z, 3.0);
  c.relation = "<=";
  c.pass = cmp.pass;
  return finish_verify(run, "mc-cross",
                       json{{"model", model}, {"trials", trials}, {"comparison", cmp}, {"empirical", emp}},
                       {c});
}

// Poissonized LIS law from the exact counts over S_N, N <= 8.
std::vector<double> poissonized_brute_force(double t, int ell_max, double* tail) {
  std::vector<double> p(static_cast<std::size_t>(ell_max + 1), 0.0);
  double weight = std::exp(-t * t);  // e^{-t^2} t^{2N} / N!
  double mass = 0.0;
  for (int n = 0; n <= 8; ++n) {
    if (n > 0) weight *= t * t / n;
    mass += weight;
    const auto counts = brute_force_lis_distribution(n);
    double total = 0.0;
    for (auto c : counts) total += static_cast<double>(c);
    double acc = 0.0;
    for (int ell = 0; ell <= ell_max; ++ell) {
      if (ell < static_cast<int>(counts.size())) acc += static_cast<double>(counts[static_cast<std::size_t>(ell)]);
      p[static_cast<std::size_t>(ell)] += weight * acc / total;
    }
  }
  *tail = 1.0 - mass;
  return p;
}

int cmd_verify_oracles(const Globals& g, const CLI::App* app) {
  Run run(g, "verify oracles", "verify_oracles");
  record_options(run, app);
  std::vector<Check> checks;
  json detail;

  {  // Poissonized permutations
    const double t = 1.0;
    const OpucData d = square_data(t, g.profile(), -1, run);
    double tail = 0.0;
    const auto brute = poissonized_brute_force(t, 5, &tail);
    double worst = 0.0;
    json rows = json::array();
    for (int ell = 1; ell <= 5; ++ell) {
      const double exact = prob_square(t, ell, d);
      const double gap = std::abs(exact - brute[static_cast<std::size_t>(ell)]);
      worst = std::max(worst, gap);
      rows.push_back(json{{"ell", ell}, {"toeplitz", exact}, {"brute_force", brute[static_cast<std::size_t>(ell)]}});
    }
    // The sum stops at N = 8; the omitted Poisson mass bounds the gap.
    checks.push_back(below("square_vs_permutations", worst, tail + 1e-12));
    detail["permutations"] = json{{"t", t}, {"omitted_mass", tail}, {"rows", rows}};
  }
  {  // dense Toeplitz determinants
    const double t = 1.5;
    const OpucData d = square_data(t, g.profile(), -1, run);
    const SymbolSpec sym = build_symbol(ModelSpec::poisson_square(t));
    const FourierTable ft = fourier_coeffs(sym, 12);
    double worst = 0.0;
    for (int ell = 1; ell <= 12; ++ell) {
      Eigen::MatrixXd a(ell, ell);
      for (int i = 0; i < ell; ++i) {
        for (int j = 0; j < ell; ++j) a(i, j) = ft[i - j];
      }
      const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
      double ld = 0.0;
      for (int i = 0; i < ell; ++i) ld += std::log(std::abs(lu.matrixLU()(i, i)));
      worst = std::max(worst, std::abs(ld - toeplitz_log_det(d, ell)));
    }
    checks.push_back(below("levinson_vs_dense_log_det", worst, 1e-10));
  }
  {  // 1 x 1 lattices
    const double q = 0.6, qp = 0.7;
    double worst = 0.0;
    for (int ell = 0; ell <= 6; ++ell) {
      const double r = q * qp;
      const double a = prob_lattice(ModelSpec::lattice(ModelKind::LatticeA, {q}, {qp}), ell);
      worst = std::max(worst, std::abs(a - (1.0 - std::pow(r, ell + 1))));
      const double c = prob_lattice(ModelSpec::lattice(ModelKind::LatticeC, {q}, {qp}), ell);
      worst = std::max(worst, std::abs(c - (ell >= 1 ? 1.0 : 1.0 - r)));
      const double b = prob_lattice(ModelSpec::lattice(ModelKind::LatticeB, {q}, {qp}), ell);
      worst = std::max(worst, std::abs(b - (ell >= 1 ? 1.0 : 1.0 / (1.0 + r))));
    }
    checks.push_back(below("lattice_1x1_closed_forms", worst, 1e-12));
  }
  {  // orthogonal group vs OPUC triangle formula
    const double t = 1.0, alpha = 0.5;
    const OpucData d = square_data(t, g.profile(), triangle_cutoff(t, 3), run);
    double worst = 0.0;
    for (int m = 0; m <= 3; ++m) {
      const double a = prob_triangle_odd(t, alpha, m, d).p;
      const double b = prob_triangle_fs_via_ogroup(t, alpha, 2 * m + 1);
      worst = std::max(worst, std::abs(a - b));
    }
    checks.push_back(below("triangle_opuc_vs_orthogonal_group", worst, 1e-6));
  }
  {  // Fredholm at k = 0
    const double t = 1.0;
    const auto ld = fredholm_log_det(IntegrableKernelSpec::square(t, 0, 128));
    checks.push_back(below("fredholm_k0_closed_form", std::abs(ld.real() + t * t), 1e-8));
  }
  return finish_verify(run, "oracles", detail, checks);
}

// --- converge ---------------------------------------------------------------

int cmd_converge(const Globals& g, const std::vector<double>& ts, double xmin, double xmax, double step,
                 const CLI::App* app) {
  if (!(step > 0.0) || !(xmax >= xmin)) throw ValidationError("need step > 0 and xmax >= xmin");
  if (xmin < -12.0) throw ValidationError("x below -12 is outside the solver range");
  for (double t : ts) {
    if (!(t > 0.0 && t <= 12.0)) throw ValidationError("converge: t must lie in (0, 12]");
  }
  Run run(g, "converge", "converge");
  record_options(run, app);
  const PiiSolution sol = pii(run);
  std::string csv = "t,x,ell,scaled_cdf,f_gue,difference\n";
  json summary = json::array();
  std::vector<double> sups;
  const long n = std::lround(std::floor((xmax - xmin) / step + 1e-9));
  for (double t : ts) {
    const OpucData d = square_data(t, g.profile(), -1, run);
    double sup = 0.0;
    for (long i = 0; i <= n; ++i) {
      const double x = xmin + static_cast<double>(i) * step;
      const double s = scaled_cdf(t, x, d);
      const double fg = f_gue(sol, x);
      const long ell = std::lround(std::floor(2.0 * t + x * std::cbrt(t)));
      sup = std::max(sup, std::abs(s - fg));
      csv += csv_row({f(t), f(x), std::to_string(ell), f(s), f(fg), f(s - fg)});
    }
    sups.push_back(sup);
    summary.push_back(json{{"t", t}, {"sup_norm", sup}});
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < sups.size(); ++i) decreasing = decreasing && sups[i] < sups[i - 1];
  run.write("converge.csv", csv);
  run.write_json("converge_summary.json",
                 json{{"x_min", xmin}, {"x_max", xmax}, {"step", step}, {"sup_norms", summary},
                      {"strictly_decreasing", decreasing}});
  run.finish();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    std::cout << "t = " << format_double(ts[i]) << "  sup |scaled_cdf - F_GUE| = " << format_double(sups[i]) << "\n";
  }
  if (!decreasing) {
    std::cout << "sup-norms do not decrease along the t list\n";
    return kExitVerification;
  }
  return kExitOk;
}

// --- mc ---------------------------------------------------------------------

int cmd_mc(const Globals& g, const ModelFlags& mf, long trials, const CLI::App* app) {
  const ModelSpec model = mf.build();
  Run run(g, "mc", "mc_" + mf.model);
  record_options(run, app);
  run.seed(g.seed);
  const EmpiricalCdf emp = simulate(SimConfig{model, trials, g.seed, g.workers});
  std::ostringstream csv;
  emp.write_csv(csv);
  run.write("mc_" + mf.model + ".csv", csv.str());
  run.write_json("mc_" + mf.model + ".json",
                 json{{"model", model}, {"trials", trials}, {"seed", g.seed}, {"mean", emp.mean()}, {"empirical", emp}});
  run.finish();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lppkit: exact and simulated last-passage percolation laws"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI key = value file with option values");
  Globals g;
  app.add_option("--out-dir", g.out_dir, "directory for output files")->capture_default_str();
  app.add_option("--seed", g.seed, "Monte Carlo seed")->capture_default_str();
  app.add_option("--workers", g.workers, "OpenMP threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--precision-profile", g.precision, "auto, standard or high")->capture_default_str();

  ModelFlags dist_model;
  int lmax = 10;
  auto* dist = app.add_subcommand("dist", "exact distribution table");
  dist->add_option("model", dist_model.model, "model name")->required();
  dist_model.add(dist);
  dist->add_option("--lmax", lmax, "largest ell")->capture_default_str();

  std::string which = "gue";
  double tw_xmin = -8.0, tw_xmax = 4.0, tw_step = 0.125;
  bool export_pii = false;
  auto* tw = app.add_subcommand("tw", "Tracy-Widom distribution values");
  tw->add_option("which", which, "gue, goe or gse")->capture_default_str();
  tw->add_option("--xmin", tw_xmin)->capture_default_str();
  tw->add_option("--xmax", tw_xmax)->capture_default_str();
  tw->add_option("--step", tw_step)->capture_default_str();
  tw->add_flag("--export-pii", export_pii, "also write the Painleve II table");

  auto* verify = app.add_subcommand("verify", "verification suites");
  verify->require_subcommand(1);
  std::vector<double> dpii_t{0.5, 1.0, 2.0, 3.0};
  int dpii_kmax = 25;
  auto* v_dpii = verify->add_subcommand("dpii", "discrete Painleve II and norm recurrences");
  v_dpii->add_option("--t", dpii_t)->capture_default_str();
  v_dpii->add_option("--kmax", dpii_kmax)->capture_default_str();
  std::vector<double> fred_t{1.0, 2.0};
  int fred_kmax = 8, fred_nodes = 128;
  auto* v_fred = verify->add_subcommand("fredholm", "Toeplitz / Fredholm identities");
  v_fred->add_option("--t", fred_t)->capture_default_str();
  v_fred->add_option("--kmax", fred_kmax)->capture_default_str();
  v_fred->add_option("--nodes", fred_nodes)->capture_default_str();
  std::vector<double> corner_x{0.0, 1.0};
  std::vector<int> corner_k{40, 60, 90, 135};
  auto* v_corner = verify->add_subcommand("corner-asymptotics", "Y(0;k) corner vs Painleve II");
  v_corner->add_option("--x", corner_x)->capture_default_str();
  v_corner->add_option("--k", corner_k)->capture_default_str();
  ModelFlags cross_model;
  long cross_trials = 200000;
  int cross_lmax = -1;
  auto* v_mc = verify->add_subcommand("mc-cross", "Monte Carlo vs exact law");
  v_mc->add_option("--model", cross_model.model)->capture_default_str();
  cross_model.add(v_mc);
  v_mc->add_option("--trials", cross_trials)->capture_default_str();
  v_mc->add_option("--lmax", cross_lmax, "largest ell of the exact table (default: sample max + 1)");
  auto* v_oracles = verify->add_subcommand("oracles", "exact formulas vs independent oracles");

  std::vector<double> conv_t{4.0, 7.0, 10.0};
  double conv_xmin = -5.0, conv_xmax = 2.0, conv_step = 0.25;
  auto* converge = app.add_subcommand("converge", "scaled square law vs F_GUE");
  converge->add_option("--t", conv_t)->capture_default_str();
  converge->add_option("--xmin", conv_xmin)->capture_default_str();
  converge->add_option("--xmax", conv_xmax)->capture_default_str();
  converge->add_option("--step", conv_step)->capture_default_str();

  ModelFlags mc_model;
  long mc_trials = 100000;
  auto* mc = app.add_subcommand("mc", "Monte Carlo empirical CDF");
  mc->add_option("model", mc_model.model, "model name")->required();
  mc_model.add(mc);
  mc->add_option("--trials", mc_trials)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    omp_set_num_threads(g.workers);
    g.profile();
    if (*dist) return cmd_dist(g, dist_model, lmax, dist);
    if (*tw) return cmd_tw(g, which, tw_xmin, tw_xmax, tw_step, export_pii, tw);
    if (*v_dpii) return cmd_verify_dpii(g, dpii_t, dpii_kmax, v_dpii);
    if (*v_fred) return cmd_verify_fredholm(g, fred_t, fred_kmax, fred_nodes, v_fred);
    if (*v_corner) return cmd_verify_corner(g, corner_x, corner_k, v_corner);
    if (*v_mc) return cmd_verify_mc_cross(g, cross_model, cross_trials, cross_lmax, v_mc);
    if (*v_oracles) return cmd_verify_oracles(g, v_oracles);
    if (*converge) return cmd_converge(g, conv_t, conv_xmin, conv_xmax, conv_step, converge);
    if (*mc) return cmd_mc(g, mc_model, mc_trials, mc);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitValidation;
}
