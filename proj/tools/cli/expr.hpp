#pragma once

#include "w9/siegel.hpp"

#include <complex>
#include <string>
#include <string_view>
#include <vector>

namespace w9::cli {

using lcplx = std::complex<long double>;

/// Evaluates +, -, *, /, ^ (integer exponents), parentheses, sqrt(...), pi,
/// the imaginary unit i and decimal literals in long double. A literal or
/// closing parenthesis followed by i, a name or '(' multiplies, so "5/3i"
/// is (5/3)i. Throws ParameterError naming the offending position.
lcplx eval_expression(std::string_view text);

/// Throws ParameterError when the value has a nonzero imaginary part.
double eval_real(std::string_view text);

/// Comma-separated expressions (commas inside parentheses do not split).
std::vector<cplx> eval_list(std::string_view text);

/// "[[a, b], [c, d]]" with expression entries.
ComplexMatrix parse_matrix_text(std::string_view text);

}  // namespace w9::cli
