#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/float128.hpp>

namespace lpp {

/// Selects the OpenMP kernel or its serial reference twin. Both produce the
/// same result (bit-identical for integer outputs, to rounding otherwise).
enum class Execution { Serial, Parallel };

/// Working precision for Toeplitz/OPUC computations.
///
/// Standard: double Fourier coefficients, long double recursion.
/// High:     200-digit binary float for coefficients and recursion. Needed once
///           the exponential part of the symbol is large, because the early
///           norms N_k grow like e^{2t} while the late ones tend to 1.
/// Auto:     High when the symbol's exponential weight exceeds a threshold.
enum class Precision { Auto, Standard, High };

using HighReal = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<200>>;
using QuadReal = boost::multiprecision::float128;

std::string to_string(Precision p);
Precision parse_precision(std::string_view name);

}  // namespace lpp
