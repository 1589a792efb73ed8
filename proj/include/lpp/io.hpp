#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "json.hpp"
#include "lpp/exact_dist.hpp"
#include "lpp/fredholm.hpp"
#include "lpp/montecarlo.hpp"
#include "lpp/opuc.hpp"
#include "lpp/painleve.hpp"
#include "lpp/symbols.hpp"

namespace lpp {

using json = nlohmann::ordered_json;

constexpr const char* kCodeVersion = "0.1.0";
// Bumped whenever a serialized shape changes; cache entries with another
// version are ignored and overwritten.
constexpr int kCacheFormatVersion = 1;

// JSON shapes use the struct field names. Non-finite doubles are written as
// null (JSON has no infinities); log_p = null reads back as -inf.
void to_json(json& j, const SymbolSpec& s);
void from_json(const json& j, SymbolSpec& s);
void to_json(json& j, const ModelSpec& m);
void from_json(const json& j, ModelSpec& m);
void to_json(json& j, const FourierTable& f);
void from_json(const json& j, FourierTable& f);
void to_json(json& j, const OpucData& d);
void from_json(const json& j, OpucData& d);
void to_json(json& j, const PiiSolution& s);
void from_json(const json& j, PiiSolution& s);
void to_json(json& j, const DistTable& t);
void from_json(const json& j, DistTable& t);
void to_json(json& j, const FredholmReport& r);
void to_json(json& j, const CornerStudy& s);
void to_json(json& j, const EmpiricalCdf& e);
void from_json(const json& j, EmpiricalCdf& e);
void to_json(json& j, const CdfComparison& c);
void to_json(json& j, const RecurrenceReport& r);

/// %.17g, with inf/-inf/nan spelled out.
std::string format_double(double x);

/// ell,p,log_p
void write_dist_csv(std::ostream& os, const DistTable& t);
/// x,u,du,v,I,log_f on the solver grid.
void write_pii_csv(std::ostream& os, const PiiSolution& s);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

/// $LPPKIT_CACHE_DIR, else $HOME/.cache/lppkit, else ./.lppkit-cache.
std::filesystem::path cache_root();

/// Entries live at <root>/<kind>-<sha256(key)[0:16]>.json as
/// {"format_version", "kind", "key", "data"}. A load returns nothing when the
/// file is missing, unreadable, or carries another format version or key.
std::optional<json> cache_load(const std::string& kind, const json& key);
/// Writes through a temporary file and a rename, so a concurrent reader never
/// sees a partial entry. Failures to write are ignored.
void cache_store(const std::string& kind, const json& key, const json& data);

/// solve_hastings_mcleod through the cache; the key is (x_min, x_max, tol).
PiiSolution cached_hastings_mcleod(double x_min, double x_max, double tol, bool* hit = nullptr);

/// levinson(symbol, K, precision) through the cache; the key is the symbol,
/// K, and the resolved precision.
OpucData cached_levinson(const SymbolSpec& symbol, int K, Precision precision, bool* hit = nullptr);

}  // namespace lpp
