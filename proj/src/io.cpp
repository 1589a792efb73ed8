#include "lpp/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include <openssl/evp.h>
#include <unistd.h>

#include "lpp/error.hpp"

namespace lpp {

namespace {

double num(const json& j, double if_null = std::numeric_limits<double>::quiet_NaN()) {
  return j.is_null() ? if_null : j.get<double>();
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::vector<double> nums(const json& j) {
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(num(x));
  return out;
}

}  // namespace

void to_json(json& j, const SymbolSpec& s) {
  j = json{{"exp_plus_t", s.exp_plus_t},   {"exp_minus_t", s.exp_minus_t},
           {"zeros_plus", s.zeros_plus},   {"zeros_minus", s.zeros_minus},
           {"poles_plus", s.poles_plus},   {"poles_minus", s.poles_minus}};
}

void from_json(const json& j, SymbolSpec& s) {
  s.exp_plus_t = j.at("exp_plus_t").get<double>();
  s.exp_minus_t = j.at("exp_minus_t").get<double>();
  s.zeros_plus = j.at("zeros_plus").get<std::vector<double>>();
  s.zeros_minus = j.at("zeros_minus").get<std::vector<double>>();
  s.poles_plus = j.at("poles_plus").get<std::vector<double>>();
  s.poles_minus = j.at("poles_minus").get<std::vector<double>>();
}

void to_json(json& j, const ModelSpec& m) {
  j = json{{"kind", to_string(m.kind)},
           {"t", m.t},
           {"alpha", m.alpha},
           {"alpha_plus", m.alpha_plus},
           {"alpha_minus", m.alpha_minus},
           {"row_params", m.row_params},
           {"col_params", m.col_params},
           {"M", m.M},
           {"N", m.N}};
}

void from_json(const json& j, ModelSpec& m) {
  m.kind = parse_model_kind(j.at("kind").get<std::string>());
  m.t = j.at("t").get<double>();
  m.alpha = j.at("alpha").get<double>();
  m.alpha_plus = j.at("alpha_plus").get<double>();
  m.alpha_minus = j.at("alpha_minus").get<double>();
  m.row_params = j.at("row_params").get<std::vector<double>>();
  m.col_params = j.at("col_params").get<std::vector<double>>();
  m.M = j.at("M").get<int>();
  m.N = j.at("N").get<int>();
}

void to_json(json& j, const FourierTable& f) {
  j = json{{"coeffs", f.coeffs},
           {"half_width", f.half_width},
           {"nodes", f.nodes},
           {"symbol", f.symbol},
           {"method", f.method}};
}

void from_json(const json& j, FourierTable& f) {
  f.coeffs = nums(j.at("coeffs"));
  f.half_width = j.at("half_width").get<int>();
  f.nodes = j.at("nodes").get<int>();
  f.symbol = j.at("symbol").get<SymbolSpec>();
  f.method = j.at("method").get<std::string>();
}

void to_json(json& j, const OpucData& d) {
  j = json{{"reflection", d.reflection},
           {"dual_reflection", d.dual_reflection},
           {"log_norms", d.log_norms},
           {"cutoff", d.cutoff},
           {"symbol", d.symbol},
           {"method", d.method},
           {"nodes", d.nodes},
           {"precision", to_string(d.precision)}};
}

void from_json(const json& j, OpucData& d) {
  d.reflection = nums(j.at("reflection"));
  d.dual_reflection = nums(j.at("dual_reflection"));
  d.log_norms = nums(j.at("log_norms"));
  d.cutoff = j.at("cutoff").get<int>();
  d.symbol = j.at("symbol").get<SymbolSpec>();
  d.method = j.at("method").get<std::string>();
  d.nodes = j.at("nodes").get<int>();
  d.precision = parse_precision(j.at("precision").get<std::string>());
}

void to_json(json& j, const PiiSolution& s) {
  j = json{{"x", s.grid},
           {"u", s.u},
           {"du", s.du},
           {"v", s.v},
           {"I", s.I},
           {"log_f", s.log_f},
           {"x_right", s.x_right},
           {"x_start", s.x_start},
           {"tol", s.tol},
           {"steps", s.steps},
           {"rejected", s.rejected},
           {"boundary_defect", s.boundary_defect}};
}

void from_json(const json& j, PiiSolution& s) {
  s.grid = nums(j.at("x"));
  s.u = nums(j.at("u"));
  s.du = nums(j.at("du"));
  s.v = nums(j.at("v"));
  s.I = nums(j.at("I"));
  s.log_f = nums(j.at("log_f"));
  s.x_right = j.at("x_right").get<double>();
  s.x_start = j.at("x_start").get<double>();
  s.tol = j.at("tol").get<double>();
  s.steps = j.at("steps").get<long>();
  s.rejected = j.at("rejected").get<long>();
  s.boundary_defect = j.at("boundary_defect").get<double>();
  const std::size_t n = s.grid.size();
  if (n < 2 || s.u.size() != n || s.du.size() != n || s.v.size() != n || s.I.size() != n ||
      s.log_f.size() != n) {
    throw ValidationError("PiiSolution JSON: column lengths differ");
  }
}

void to_json(json& j, const DistTable& t) {
  json rows = json::array();
  for (const auto& [ell, e] : t.entries) {
    rows.push_back(json{{"ell", ell}, {"p", finite_or_null(e.p)}, {"log_p", finite_or_null(e.log_p)}});
  }
  j = json{{"model", t.model},         {"cutoff", t.cutoff}, {"tail_bound", finite_or_null(t.tail_bound)},
           {"method", t.method},       {"precision", t.precision}, {"entries", rows}};
}

void from_json(const json& j, DistTable& t) {
  t.model = j.at("model").get<ModelSpec>();
  t.cutoff = j.at("cutoff").get<int>();
  t.tail_bound = num(j.at("tail_bound"));
  t.method = j.at("method").get<std::string>();
  t.precision = j.at("precision").get<std::string>();
  t.entries.clear();
  for (const auto& r : j.at("entries")) {
    t.entries[r.at("ell").get<int>()] =
        DistEntry{num(r.at("log_p"), -std::numeric_limits<double>::infinity()), num(r.at("p"))};
  }
}

void to_json(json& j, const FredholmReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back(json{{"k", row.k},
                        {"log_det", row.log_det},
                        {"log_det_imag", row.log_det_imag},
                        {"product_residual", row.product_residual},
                        {"ratio_residual", row.ratio_residual}});
  }
  j = json{{"t", r.t},
           {"nodes", r.nodes},
           {"log_d_inf", r.log_d_inf},
           {"rows", rows},
           {"max_product_residual", r.max_product_residual},
           {"max_ratio_residual", r.max_ratio_residual},
           {"max_imag", r.max_imag}};
}

void to_json(json& j, const CornerStudy& s) {
  json rows = json::array();
  for (const auto& r : s.rows) {
    rows.push_back(json{{"k", r.k},
                        {"t", r.t},
                        {"x", r.x},
                        {"y21_deviation", r.y21_deviation},
                        {"y11_deviation", r.y11_deviation},
                        {"y21_constant", r.y21_constant},
                        {"y11_constant", r.y11_constant}});
  }
  j = json{{"x", s.x}, {"rows", rows}, {"y21_slope", s.y21_slope}, {"y11_slope", s.y11_slope}};
}

void to_json(json& j, const EmpiricalCdf& e) {
  json counts = json::array();
  for (const auto& [v, c] : e.counts) counts.push_back(json::array({v, c}));
  j = json{{"trials", e.trials}, {"counts", counts}};
}

void from_json(const json& j, EmpiricalCdf& e) {
  e.trials = j.at("trials").get<long>();
  e.counts.clear();
  for (const auto& vc : j.at("counts")) e.counts[vc.at(0).get<int>()] = vc.at(1).get<long>();
}

void to_json(json& j, const CdfComparison& c) {
  json rows = json::array();
  for (const auto& r : c.rows) {
    rows.push_back(json{{"ell", r.ell},
                        {"exact", r.exact},
                        {"empirical", r.empirical},
                        {"std_error", r.std_error},
                        {"z", r.z},
                        {"checked", r.checked}});
  }
  j = json{{"rows", rows}, {"max_abs_z", c.max_abs_z}, {"pass", c.pass}};
}

void to_json(json& j, const RecurrenceReport& r) {
  j = json{{"a_deviation", r.a_deviation},
           {"d_deviation", r.d_deviation},
           {"unimodular_deviation", r.unimodular_deviation},
           {"worst_a_k", r.worst_a_k},
           {"worst_d_k", r.worst_d_k}};
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_dist_csv(std::ostream& os, const DistTable& t) {
  os << "ell,p,log_p\n";
  for (const auto& [ell, e] : t.entries) {
    os << ell << ',' << format_double(e.p) << ',' << format_double(e.log_p) << '\n';
  }
}

void write_pii_csv(std::ostream& os, const PiiSolution& s) {
  os << "x,u,du,v,I,log_f\n";
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    os << format_double(s.grid[i]) << ',' << format_double(s.u[i]) << ',' << format_double(s.du[i])
       << ',' << format_double(s.v[i]) << ',' << format_double(s.I[i]) << ','
       << format_double(s.log_f[i]) << '\n';
  }
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw NumericalError("SHA-256 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

std::filesystem::path cache_root() {
  if (const char* dir = std::getenv("LPPKIT_CACHE_DIR"); dir && *dir) return dir;
  if (const char* home = std::getenv("HOME"); home && *home) {
    return std::filesystem::path(home) / ".cache" / "lppkit";
  }
  return ".lppkit-cache";
}

namespace {

std::filesystem::path cache_path(const std::string& kind, const json& key) {
  return cache_root() / (kind + "-" + sha256_hex(key.dump()).substr(0, 16) + ".json");
}

}  // namespace

std::optional<json> cache_load(const std::string& kind, const json& key) {
  std::ifstream in(cache_path(kind, key));
  if (!in) return std::nullopt;
  json entry = json::parse(in, nullptr, false);
  if (entry.is_discarded() || !entry.is_object()) return std::nullopt;
  if (entry.value("format_version", -1) != kCacheFormatVersion) return std::nullopt;
  if (entry.value("kind", "") != kind || entry.value("key", json()) != key) return std::nullopt;
  if (!entry.contains("data")) return std::nullopt;
  return entry.at("data");
}

void cache_store(const std::string& kind, const json& key, const json& data) {
  std::error_code ec;
  std::filesystem::create_directories(cache_root(), ec);
  if (ec) return;
  const auto path = cache_path(kind, key);
  auto tmp = path;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) return;
    const json entry{{"format_version", kCacheFormatVersion}, {"kind", kind}, {"key", key}, {"data", data}};
    out << entry.dump();
    if (!out) return;
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) std::filesystem::remove(tmp, ec);
}

PiiSolution cached_hastings_mcleod(double x_min, double x_max, double tol, bool* hit) {
  const json key{{"x_min", x_min}, {"x_max", x_max}, {"tol", tol}, {"grid_step", kPiiGridStep}};
  if (auto data = cache_load("pii", key)) {
    try {
      PiiSolution s = data->get<PiiSolution>();
      if (hit) *hit = true;
      return s;
    } catch (const std::exception&) {
      // malformed entry: fall through and overwrite it
    }
  }
  if (hit) *hit = false;
  PiiSolution s = solve_hastings_mcleod(x_min, x_max, tol);
  cache_store("pii", key, s);
  return s;
}

OpucData cached_levinson(const SymbolSpec& symbol, int K, Precision precision, bool* hit) {
  symbol.validate();
  const Precision p = resolve_precision(symbol, precision);
  const json key{{"symbol", symbol}, {"K", K}, {"precision", to_string(p)}, {"method", "series"}};
  if (auto data = cache_load("opuc", key)) {
    try {
      OpucData d = data->get<OpucData>();
      if (d.cutoff == K) {
        if (hit) *hit = true;
        return d;
      }
    } catch (const std::exception&) {
    }
  }
  if (hit) *hit = false;
  OpucData d = levinson(symbol, K, p);
  cache_store("opuc", key, d);
  return d;
}

}  // namespace lpp
