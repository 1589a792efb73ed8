#include "lpp/policy.hpp"

#include "lpp/error.hpp"

namespace lpp {

std::string to_string(Precision p) {
  switch (p) {
    case Precision::Auto:
      return "auto";
    case Precision::Standard:
      return "standard";
    case Precision::High:
      return "high";
  }
  return "auto";
}

Precision parse_precision(std::string_view name) {
  if (name == "auto") return Precision::Auto;
  if (name == "standard") return Precision::Standard;
  if (name == "high") return Precision::High;
  throw ValidationError("unknown precision profile '" + std::string(name) +
                        "' (expected auto, standard or high)");
}

}  // namespace lpp
