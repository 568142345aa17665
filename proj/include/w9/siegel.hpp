#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace w9 {

using cplx = std::complex<double>;

/// Dense row-major complex matrix. Sized for g <= 3 period matrices and
/// their 2g x 2g companions; no attempt is made at blocking.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
    ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static ComplexMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    std::span<const cplx> entries() const noexcept { return data_; }

    ComplexMatrix transpose() const;
    /// Real and imaginary parts as row-major doubles.
    std::vector<double> real_part() const;
    std::vector<double> imag_part() const;
    double max_abs() const;
    bool all_finite() const;

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(cplx s);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, ComplexMatrix a);
std::vector<cplx> operator*(const ComplexMatrix& a, std::span<const cplx> v);

/// Largest entrywise modulus of a - b. Dimensions must agree.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Relative pivot threshold of the LU factorisation: a pivot smaller than
/// this times the max-norm of the input is treated as singular.
inline constexpr double kSingularPivotRatio = 1e-13;

/// Inverse by LU with partial pivoting. Throws SingularityError.
ComplexMatrix inverse(const ComplexMatrix& a);
/// a * b^{-1} without forming the inverse explicitly.
ComplexMatrix right_divide(const ComplexMatrix& a, const ComplexMatrix& b);
cplx determinant(const ComplexMatrix& a);

/// Square integer matrix, used for symplectic base changes.
class IntMatrix {
public:
    IntMatrix() = default;
    explicit IntMatrix(std::size_t n);
    IntMatrix(std::initializer_list<std::initializer_list<long long>> rows);
    static IntMatrix identity(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    long long& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
    long long operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }

    IntMatrix transpose() const;
    IntMatrix block(std::size_t r0, std::size_t c0, std::size_t n) const;
    ComplexMatrix to_complex() const;
    bool operator==(const IntMatrix& o) const = default;

private:
    std::size_t n_ = 0;
    std::vector<long long> data_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);

/// J = (0, -I; I, 0) of size 2g.
IntMatrix standard_symplectic_form(std::size_t g);

/// True iff transpose(M) J M == J exactly. Throws DimensionError on odd size.
bool symplectic_check(const IntMatrix& m);

/// Integer symplectic matrix, split into g x g blocks (alpha beta; gamma delta).
class SymplecticMatrix {
public:
    /// Throws ContractError when `m` is not symplectic.
    explicit SymplecticMatrix(IntMatrix m);

    std::size_t genus() const noexcept { return m_.size() / 2; }
    const IntMatrix& matrix() const noexcept { return m_; }
    IntMatrix alpha() const { return m_.block(0, 0, genus()); }
    IntMatrix beta() const { return m_.block(0, genus(), genus()); }
    IntMatrix gamma() const { return m_.block(genus(), 0, genus()); }
    IntMatrix delta() const { return m_.block(genus(), genus(), genus()); }

    SymplecticMatrix transpose() const { return SymplecticMatrix(m_.transpose()); }
    /// M^{-1} = -J M^T J, exact over the integers.
    SymplecticMatrix inverse() const;

    static SymplecticMatrix identity(std::size_t g) { return SymplecticMatrix(IntMatrix::identity(2 * g)); }
    static SymplecticMatrix J(std::size_t g) { return SymplecticMatrix(standard_symplectic_form(g)); }

private:
    IntMatrix m_;
};

SymplecticMatrix operator*(const SymplecticMatrix& a, const SymplecticMatrix& b);

inline constexpr double kDefaultSymmetryTol = 1e-10;

/// Symmetric g x g complex matrix with positive definite imaginary part.
class RiemannMatrix {
public:
    /// Validates with is_riemann_matrix(z, sym_tol) and symmetrises the
    /// stored entries. Throws DomainError on failure.
    explicit RiemannMatrix(ComplexMatrix z, double sym_tol = kDefaultSymmetryTol);

    std::size_t genus() const noexcept { return z_.rows(); }
    const ComplexMatrix& matrix() const noexcept { return z_; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return z_(r, c); }

private:
    ComplexMatrix z_;
};

/// Eigenvalues (ascending) of a real symmetric n x n matrix, n <= 3, from
/// the characteristic polynomial with bisection polish.
std::vector<double> symmetric_eigenvalues(std::span<const double> a, std::size_t n);

/// Symmetry residual <= tol and every eigenvalue of Im(Z) > tol.
/// Throws DimensionError when z is not square.
bool is_riemann_matrix(const ComplexMatrix& z, double tol);

/// Smallest eigenvalue of Im(Z).
double min_eig_im(const RiemannMatrix& z);
double min_eig_im(const ComplexMatrix& z);

/// (alpha Z + beta)(gamma Z + delta)^{-1}.
RiemannMatrix siegel_action(const SymplecticMatrix& m, const RiemannMatrix& z);

/// Period matrix in the basis obtained through base change M: transpose(M)(Z).
RiemannMatrix base_change(const RiemannMatrix& z, const SymplecticMatrix& m);

}  // namespace w9
