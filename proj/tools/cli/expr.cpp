#include "expr.hpp"

#include "w9/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

namespace w9::cli {

namespace {

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    lcplx parse() {
        const lcplx v = sum();
        skip();
        if (pos_ != s_.size()) fail("unexpected character");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        std::ostringstream msg;
        msg << "expression \"" << s_ << "\": " << what << " at position " << pos_ + 1;
        throw ParameterError(msg.str());
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    // True when the next token can start an implicit factor.
    bool implicit_next() {
        skip();
        if (pos_ >= s_.size()) return false;
        const char c = s_[pos_];
        return c == '(' || std::isalpha(static_cast<unsigned char>(c));
    }

    lcplx sum() {
        lcplx v = product();
        for (;;) {
            if (eat('+')) {
                v += product();
            } else if (eat('-')) {
                v -= product();
            } else {
                return v;
            }
        }
    }

    lcplx product() {
        lcplx v = unary();
        for (;;) {
            if (eat('*')) {
                v *= unary();
            } else if (eat('/')) {
                const lcplx d = unary();
                if (d == lcplx(0)) fail("division by zero");
                v /= d;
            } else if (implicit_next()) {
                v *= power();
            } else {
                return v;
            }
        }
    }

    lcplx unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }

    lcplx power() {
        const lcplx base = primary();
        if (!eat('^')) return base;
        const lcplx e = unary();
        if (e.imag() != 0 || e.real() != std::round(e.real()) || std::abs(e.real()) > 64) {
            fail("exponent must be a small integer");
        }
        const long n = std::lround(static_cast<double>(e.real()));
        lcplx r = 1;
        for (long k = 0; k < std::labs(n); ++k) r *= base;
        if (n < 0) {
            if (r == lcplx(0)) fail("division by zero");
            r = lcplx(1) / r;
        }
        return r;
    }

    lcplx primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            const lcplx v = sum();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            const std::string_view name = s_.substr(start, pos_ - start);
            if (name == "i") return {0, 1};
            if (name == "pi") return std::numbers::pi_v<long double>;
            if (name == "sqrt") {
                if (!eat('(')) fail("expected '(' after sqrt");
                lcplx v = sum();
                if (!eat(')')) fail("expected ')'");
                if (v.imag() == 0 && v.real() >= 0) return std::sqrt(v.real());
                // Unary minus leaves -0 in the imaginary part; keep sqrt on the principal branch.
                if (v.imag() == 0) v = lcplx(v.real(), 0.0L);
                return std::sqrt(v);
            }
            pos_ = start;
            fail("unknown name \"" + std::string(name) + "\"");
        }
        fail("unexpected character");
    }

    lcplx number() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
            if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
                pos_ = p;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            }
        }
        const std::string lit(s_.substr(start, pos_ - start));
        char* end = nullptr;
        const long double v = std::strtold(lit.c_str(), &end);
        if (end != lit.c_str() + lit.size()) {
            pos_ = start;
            fail("malformed number");
        }
        return v;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

// Splits on commas at bracket/parenthesis depth zero.
std::vector<std::string_view> split_top(std::string_view s) {
    std::vector<std::string_view> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (s[k] == '(' || s[k] == '[') ++depth;
        if (s[k] == ')' || s[k] == ']') --depth;
        if (s[k] == ',' && depth == 0) {
            out.push_back(s.substr(start, k - start));
            start = k + 1;
        }
    }
    out.push_back(s.substr(start));
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string_view unbracket(std::string_view s, const char* what) {
    s = trim(s);
    if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
        throw ParameterError(std::string("matrix: expected a bracketed ") + what + ", got \"" + std::string(s) + "\"");
    }
    return s.substr(1, s.size() - 2);
}

}  // namespace

lcplx eval_expression(std::string_view text) { return Parser(text).parse(); }

double eval_real(std::string_view text) {
    const lcplx v = eval_expression(text);
    if (v.imag() != 0) throw ParameterError("expression \"" + std::string(text) + "\" is not real");
    return static_cast<double>(v.real());
}

std::vector<cplx> eval_list(std::string_view text) {
    std::vector<cplx> out;
    for (std::string_view item : split_top(text)) {
        item = trim(item);
        if (item.empty()) throw ParameterError("list \"" + std::string(text) + "\" has an empty entry");
        const lcplx v = eval_expression(item);
        out.emplace_back(static_cast<double>(v.real()), static_cast<double>(v.imag()));
    }
    return out;
}

ComplexMatrix parse_matrix_text(std::string_view text) {
    std::vector<std::vector<cplx>> rows;
    for (std::string_view row : split_top(unbracket(text, "matrix"))) rows.push_back(eval_list(unbracket(row, "row")));
    const std::size_t n = rows.size();
    ComplexMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        if (rows[r].size() != n) throw DimensionError("matrix: expected a square matrix");
        for (std::size_t c = 0; c < n; ++c) m(r, c) = rows[r][c];
    }
    return m;
}

}  // namespace w9::cli
