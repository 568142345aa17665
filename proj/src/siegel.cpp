#include "w9/siegel.hpp"

#include "w9/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace w9 {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows * cols) {
        throw DimensionError("ComplexMatrix: entry count does not match rows x cols");
    }
    if (!all_finite()) throw DomainError("ComplexMatrix: non-finite entry");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw DimensionError("ComplexMatrix: ragged initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

std::vector<double> ComplexMatrix::real_part() const {
    std::vector<double> out(data_.size());
    std::transform(data_.begin(), data_.end(), out.begin(), [](cplx v) { return v.real(); });
    return out;
}

std::vector<double> ComplexMatrix::imag_part() const {
    std::vector<double> out(data_.size());
    std::transform(data_.begin(), data_.end(), out.begin(), [](cplx v) { return v.imag(); });
    return out;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
}

bool ComplexMatrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix sum: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix difference: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    for (auto& v : data_) v *= s;
    return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionError("matrix product: inner dimensions differ");
    ComplexMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

std::vector<cplx> operator*(const ComplexMatrix& a, std::span<const cplx> v) {
    if (a.cols() != v.size()) throw DimensionError("matrix-vector product: dimension mismatch");
    std::vector<cplx> out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out[i] += a(i, j) * v[j];
    return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.entries().size(); ++i)
        m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
    return m;
}

namespace {

struct LU {
    ComplexMatrix lu;
    std::vector<std::size_t> perm;
    int sign = 1;
};

LU factor(const ComplexMatrix& a) {
    if (!a.square()) throw DimensionError("LU: matrix is not square");
    const std::size_t n = a.rows();
    LU f{a, std::vector<std::size_t>(n), 1};
    for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;
    const double threshold = kSingularPivotRatio * std::max(a.max_abs(), 1e-300);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(f.lu(i, k)) > std::abs(f.lu(p, k))) p = i;
        if (std::abs(f.lu(p, k)) < threshold) {
            std::ostringstream os;
            os << "matrix is numerically singular (pivot " << std::abs(f.lu(p, k)) << " below "
               << threshold << ")";
            throw SingularityError(os.str());
        }
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(p, j));
            std::swap(f.perm[k], f.perm[p]);
            f.sign = -f.sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            f.lu(i, k) /= f.lu(k, k);
            for (std::size_t j = k + 1; j < n; ++j) f.lu(i, j) -= f.lu(i, k) * f.lu(k, j);
        }
    }
    return f;
}

}  // namespace

ComplexMatrix inverse(const ComplexMatrix& a) {
    const LU f = factor(a);
    const std::size_t n = a.rows();
    ComplexMatrix inv(n, n);
    for (std::size_t col = 0; col < n; ++col) {
        std::vector<cplx> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = (f.perm[i] == col) ? 1.0 : 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < i; ++j) x[i] -= f.lu(i, j) * x[j];
        for (std::size_t i = n; i-- > 0;) {
            for (std::size_t j = i + 1; j < n; ++j) x[i] -= f.lu(i, j) * x[j];
            x[i] /= f.lu(i, i);
        }
        for (std::size_t i = 0; i < n; ++i) inv(i, col) = x[i];
    }
    return inv;
}

ComplexMatrix right_divide(const ComplexMatrix& a, const ComplexMatrix& b) { return a * inverse(b); }

cplx determinant(const ComplexMatrix& a) {
    LU f;
    try {
        f = factor(a);
    } catch (const SingularityError&) {
        return 0.0;
    }
    cplx d = static_cast<double>(f.sign);
    for (std::size_t i = 0; i < a.rows(); ++i) d *= f.lu(i, i);
    return d;
}

IntMatrix::IntMatrix(std::size_t n) : n_(n), data_(n * n, 0) {}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long long>> rows) : n_(rows.size()) {
    data_.reserve(n_ * n_);
    for (const auto& r : rows) {
        if (r.size() != n_) throw DimensionError("IntMatrix: initializer is not square");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix t(n_);
    for (std::size_t r = 0; r < n_; ++r)
        for (std::size_t c = 0; c < n_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

IntMatrix IntMatrix::block(std::size_t r0, std::size_t c0, std::size_t n) const {
    IntMatrix b(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
    return b;
}

ComplexMatrix IntMatrix::to_complex() const {
    ComplexMatrix m(n_, n_);
    for (std::size_t r = 0; r < n_; ++r)
        for (std::size_t c = 0; c < n_; ++c) m(r, c) = static_cast<double>((*this)(r, c));
    return m;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.size() != b.size()) throw DimensionError("IntMatrix product: size mismatch");
    const std::size_t n = a.size();
    IntMatrix c(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) c(i, j) += a(i, k) * b(k, j);
    return c;
}

IntMatrix standard_symplectic_form(std::size_t g) {
    IntMatrix j(2 * g);
    for (std::size_t i = 0; i < g; ++i) {
        j(i, g + i) = -1;
        j(g + i, i) = 1;
    }
    return j;
}

bool symplectic_check(const IntMatrix& m) {
    if (m.size() % 2 != 0) throw DimensionError("symplectic_check: odd dimension");
    const IntMatrix j = standard_symplectic_form(m.size() / 2);
    return m.transpose() * j * m == j;
}

SymplecticMatrix::SymplecticMatrix(IntMatrix m) : m_(std::move(m)) {
    if (!symplectic_check(m_)) throw ContractError("matrix is not symplectic");
}

SymplecticMatrix SymplecticMatrix::inverse() const {
    const IntMatrix j = standard_symplectic_form(genus());
    IntMatrix inv = j * m_.transpose() * j;
    for (std::size_t r = 0; r < inv.size(); ++r)
        for (std::size_t c = 0; c < inv.size(); ++c) inv(r, c) = -inv(r, c);
    return SymplecticMatrix(std::move(inv));
}

SymplecticMatrix operator*(const SymplecticMatrix& a, const SymplecticMatrix& b) {
    return SymplecticMatrix(a.matrix() * b.matrix());
}

namespace {

double symmetry_residual(const ComplexMatrix& z) {
    double r = 0.0;
    for (std::size_t i = 0; i < z.rows(); ++i)
        for (std::size_t j = i + 1; j < z.cols(); ++j) r = std::max(r, std::abs(z(i, j) - z(j, i)));
    return r;
}

// Im part of a square matrix, symmetrised.
std::vector<double> symmetric_imag(const ComplexMatrix& z) {
    const std::size_t n = z.rows();
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i * n + j] = 0.5 * (z(i, j).imag() + z(j, i).imag());
    return a;
}

double char_poly3(std::span<const double> a, double x) {
    const double a00 = a[0] - x, a11 = a[4] - x, a22 = a[8] - x;
    return a00 * (a11 * a22 - a[5] * a[7]) - a[1] * (a[3] * a22 - a[5] * a[6]) +
           a[2] * (a[3] * a[7] - a11 * a[6]);
}

// Bisection on det(A - x I) inside a small bracket around an estimate; a no-op
// when the estimate sits on an even-multiplicity root.
double polish3(std::span<const double> a, double est, double scale) {
    double lo = est - 1e-7 * scale, hi = est + 1e-7 * scale;
    double flo = char_poly3(a, lo), fhi = char_poly3(a, hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0) == (fhi < 0)) return est;
    for (int it = 0; it < 200 && hi - lo > 4 * std::numeric_limits<double>::epsilon() * scale; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = char_poly3(a, mid);
        if (fm == 0.0) return mid;
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> symmetric_eigenvalues(std::span<const double> a, std::size_t n) {
    if (a.size() != n * n) throw DimensionError("symmetric_eigenvalues: size mismatch");
    if (n == 0) return {};
    if (n == 1) return {a[0]};
    if (n == 2) {
        const double mean = 0.5 * (a[0] + a[3]);
        const double r = std::hypot(0.5 * (a[0] - a[3]), 0.5 * (a[1] + a[2]));
        const double hi = mean + r;
        double lo = mean - r;
        const double det = a[0] * a[3] - 0.25 * (a[1] + a[2]) * (a[1] + a[2]);
        // Recover the small root from the determinant when mean and r nearly cancel.
        if (hi > 0 && std::abs(lo) < 1e-3 * std::abs(hi)) lo = det / hi;
        return {lo, hi};
    }
    if (n != 3) throw DimensionError("symmetric_eigenvalues: only n <= 3 is supported");

    std::array<double, 9> s{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) s[i * 3 + j] = 0.5 * (a[i * 3 + j] + a[j * 3 + i]);
    const double p1 = s[1] * s[1] + s[2] * s[2] + s[5] * s[5];
    const double q = (s[0] + s[4] + s[8]) / 3.0;
    const double p2 = (s[0] - q) * (s[0] - q) + (s[4] - q) * (s[4] - q) + (s[8] - q) * (s[8] - q) + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    if (p == 0.0) return {q, q, q};
    std::array<double, 9> b{};
    for (std::size_t i = 0; i < 9; ++i) b[i] = s[i] / p;
    b[0] -= q / p;
    b[4] -= q / p;
    b[8] -= q / p;
    const double r = std::clamp(char_poly3(b, 0.0) / 2.0, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    double l_max = q + 2.0 * p * std::cos(phi);
    double l_min = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
    double l_mid = 3.0 * q - l_max - l_min;
    const double scale = std::max({std::abs(l_max), std::abs(l_min), 1e-300});
    l_max = polish3(s, l_max, scale);
    l_mid = polish3(s, l_mid, scale);
    l_min = polish3(s, l_min, scale);
    std::vector<double> out{l_min, l_mid, l_max};
    std::sort(out.begin(), out.end());
    return out;
}

bool is_riemann_matrix(const ComplexMatrix& z, double tol) {
    if (!z.square()) throw DimensionError("is_riemann_matrix: matrix is not square");
    if (!z.all_finite()) return false;
    if (symmetry_residual(z) > tol) return false;
    const auto eig = symmetric_eigenvalues(symmetric_imag(z), z.rows());
    return eig.front() > tol;
}

double min_eig_im(const ComplexMatrix& z) {
    if (!z.square()) throw DimensionError("min_eig_im: matrix is not square");
    return symmetric_eigenvalues(symmetric_imag(z), z.rows()).front();
}

double min_eig_im(const RiemannMatrix& z) { return min_eig_im(z.matrix()); }

RiemannMatrix::RiemannMatrix(ComplexMatrix z, double sym_tol) : z_(std::move(z)) {
    if (!z_.square()) throw DimensionError("RiemannMatrix: matrix is not square");
    if (z_.rows() == 0 || z_.rows() > 3) throw DimensionError("RiemannMatrix: genus must be 1, 2 or 3");
    if (!z_.all_finite()) throw DomainError("RiemannMatrix: non-finite entry");
    const double res = symmetry_residual(z_);
    if (res > sym_tol) {
        std::ostringstream os;
        os << "RiemannMatrix: symmetry residual " << res << " exceeds " << sym_tol;
        throw DomainError(os.str());
    }
    for (std::size_t i = 0; i < z_.rows(); ++i)
        for (std::size_t j = i + 1; j < z_.cols(); ++j) {
            const cplx avg = 0.5 * (z_(i, j) + z_(j, i));
            z_(i, j) = avg;
            z_(j, i) = avg;
        }
    const double lmin = min_eig_im(z_);
    if (!(lmin > 0.0)) {
        std::ostringstream os;
        os << "RiemannMatrix: imaginary part is not positive definite (min eigenvalue " << lmin << ")";
        throw DomainError(os.str());
    }
}

RiemannMatrix siegel_action(const SymplecticMatrix& m, const RiemannMatrix& z) {
    if (m.genus() != z.genus()) throw DimensionError("siegel_action: genus mismatch");
    const ComplexMatrix& zz = z.matrix();
    const ComplexMatrix num = m.alpha().to_complex() * zz + m.beta().to_complex();
    const ComplexMatrix den = m.gamma().to_complex() * zz + m.delta().to_complex();
    ComplexMatrix out = right_divide(num, den);
    const double tol = 1e-9 * std::max(1.0, out.max_abs());
    return RiemannMatrix(std::move(out), tol);
}

RiemannMatrix base_change(const RiemannMatrix& z, const SymplecticMatrix& m) {
    return siegel_action(m.transpose(), z);
}

}  // namespace w9
