#include "io.hpp"

#include "expr.hpp"
#include "w9/errors.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

namespace w9::cli {

json to_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

cplx complex_from_json(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const lcplx v = eval_expression(j.get<std::string>());
        return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
    }
    if (j.is_object() && j.contains("re") && j.contains("im")) return {j.at("re").get<double>(), j.at("im").get<double>()};
    throw ParameterError("matrix entry must be a number, an expression string or {\"re\", \"im\"}: " + j.dump());
}

ComplexMatrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw ParameterError("matrix must be a non-empty array of rows");
    const std::size_t n = j.size();
    ComplexMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        const json& row = j[r];
        if (!row.is_array() || row.size() != n) throw DimensionError("matrix must be square");
        for (std::size_t c = 0; c < n; ++c) m(r, c) = complex_from_json(row[c]);
    }
    return m;
}

ComplexMatrix load_matrix(const std::string& arg) {
    if (!std::filesystem::is_regular_file(arg)) return parse_matrix_text(arg);
    std::ifstream in(arg);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ParameterError("matrix file " + arg + ": " + e.what());
    }
    if (j.is_object()) {
        for (const char* key : {"Zhat", "Z", "matrix"}) {
            if (j.contains(key)) return matrix_from_json(j.at(key));
        }
        throw ParameterError("matrix file " + arg + ": no \"Zhat\", \"Z\" or \"matrix\" key");
    }
    return matrix_from_json(j);
}

std::string shortest(double x) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParameterError("cannot read " + path);
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw ParameterError("sha256: init failed");
    std::array<char, 1 << 14> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
    std::ostringstream hex;
    static const char* digits = "0123456789abcdef";
    for (unsigned int k = 0; k < len; ++k) hex << digits[md[k] >> 4] << digits[md[k] & 15];
    return hex.str();
}

}  // namespace w9::cli
