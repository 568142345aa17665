#pragma once

#include "w9/siegel.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace w9::cli {

using json = nlohmann::ordered_json;

json to_json(cplx z);
json to_json(const ComplexMatrix& m);

/// Accepts {"re": x, "im": y}, a number, or an expression string.
cplx complex_from_json(const json& j);
ComplexMatrix matrix_from_json(const json& j);

/// An inline "[[...]]" matrix, or a JSON file holding a top-level array or an
/// object with one of the keys "Zhat", "Z", "matrix" (first found wins).
ComplexMatrix load_matrix(const std::string& arg);

/// Shortest decimal that reads back to the same double.
std::string shortest(double x);

/// Quotes a CSV field when it holds a comma, quote or newline.
std::string csv_field(std::string_view s);

/// Lower-case hex SHA-256 of a file. Throws ParameterError when unreadable.
std::string sha256_file(const std::string& path);

}  // namespace w9::cli
