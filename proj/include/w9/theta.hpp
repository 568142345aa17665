#pragma once

#include "w9/siegel.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace w9 {

/// Order-2 characteristic, stored as the integer vectors (2m, 2n) with
/// entries in {0,1}.
class ThetaCharacteristic {
public:
    ThetaCharacteristic(std::vector<int> m, std::vector<int> n);

    /// Parses "m1m2m3;n1n2n3". Throws ParameterError with the offending
    /// position on malformed input.
    static ThetaCharacteristic parse(std::string_view text);
    static ThetaCharacteristic zero(std::size_t g);

    std::size_t genus() const noexcept { return m_.size(); }
    const std::vector<int>& m() const noexcept { return m_; }
    const std::vector<int>& n() const noexcept { return n_; }
    std::string str() const;

    bool operator==(const ThetaCharacteristic&) const = default;

private:
    std::vector<int> m_;
    std::vector<int> n_;
};

enum class Parity { even, odd };

Parity parity(const ThetaCharacteristic& ch);
const char* to_string(Parity p);

/// All 2^{2g} characteristics, m-major in binary order.
std::vector<ThetaCharacteristic> all_characteristics(std::size_t g);

struct TruncationPolicy {
    double tail_tol = 1e-14;
    int max_radius = 60;
};

struct ThetaValue {
    cplx value;
    int radius = 0;
    /// Bound on the discarded shells, see truncation_tail_bound.
    double tail_bound = 0.0;
};

/// Upper bound for the modulus of the discarded part of the lattice sum
///
///   sum over v in Z^g + c, shell(v) > radius, of exp(pi i v'Zv + 2 pi i v'w)
///
/// with c in {0, 1/2}^g, shell(v) = max_i ceil|v_i|, lambda the smallest
/// eigenvalue of Im Z and rho = |Im w|_2. A point of shell r has
/// |v|_2 >= r - 1/2 and a shell holds at most (2r+1)^g points, so the tail
/// is at most
///
///   sum_{r > radius} (2r+1)^g exp(-pi lambda (r-1/2)^2 + 2 pi rho (r-1/2)),
///
/// valid once radius + 1/2 >= rho/lambda (the per-term bound is then
/// decreasing). Returns +inf when that condition fails.
double truncation_tail_bound(double lambda, std::size_t g, double rho, int radius);

/// Smallest radius whose tail bound is below tail_tol * exp(pi rho^2 / lambda).
/// The factor is the largest possible term modulus, so for w = 0 the bound
/// is absolute. Starts from the fixed point of
/// R = ceil(sqrt(ln((2R+1)^g / tail_tol) / (pi lambda))) + 2, shifted by
/// ceil(rho/lambda). Throws TruncationError past policy.max_radius.
int truncation_radius(double lambda, std::size_t g, double rho, const TruncationPolicy& policy);

namespace kernel {

/// sum over the cube shell(v) <= radius of exp(pi i v'Zv + 2 pi i v'w),
/// v = k + shift/2 with shift bits in {0,1}. Shells are split into
/// (shell, first coordinate) work items, evaluated in parallel with
/// compensated summation and reduced in increasing shell order, so the
/// result does not depend on the thread count.
cplx lattice_sum(const ComplexMatrix& z, std::span<const int> shift, std::span<const cplx> w,
                 int radius);

/// Same sum, single-threaded, plain lexicographic loop over the cube.
cplx lattice_sum_serial(const ComplexMatrix& z, std::span<const int> shift,
                        std::span<const cplx> w, int radius);

}  // namespace kernel

/// Lattice sum over Z^g + shift/2 with the radius chosen by the policy.
/// Entries of `shift` may be any integers; only their parity matters.
ThetaValue lattice_theta(const RiemannMatrix& z, std::span<const int> shift,
                         std::span<const cplx> w, const TruncationPolicy& policy = {});

/// sum_k exp(pi i k'Zk + 2 pi i k'z).
ThetaValue riemann_theta(std::span<const cplx> z, const RiemannMatrix& zm,
                         const TruncationPolicy& policy = {});

/// sum_k exp(pi i (k+m/2)'Z(k+m/2) + 2 pi i (k+m/2)'(z + n/2)).
ThetaValue theta_char(const ThetaCharacteristic& ch, std::span<const cplx> z,
                      const RiemannMatrix& zm, const TruncationPolicy& policy = {});

/// Same series for arbitrary integer vectors m, n (not reduced mod 2).
ThetaValue theta_char(std::span<const int> m, std::span<const int> n, std::span<const cplx> z,
                      const RiemannMatrix& zm, const TruncationPolicy& policy = {});

/// Theta-null, z = 0.
ThetaValue theta_null(const ThetaCharacteristic& ch, const RiemannMatrix& zm,
                      const TruncationPolicy& policy = {});

/// The characteristic M.ch with theta[ch](M(Z)) proportional to
/// theta[M.ch](Z):
///   m' = a'(m - p) + c'(n - q),  n' = b'(m - p) + d'(n - q)  (mod 2)
/// with (a b; c d) the blocks of M, p = diag(c d'), q = diag(a b').
/// Composition: (M1 M2).ch = M2.(M1.ch).
ThetaCharacteristic char_transform(const SymplecticMatrix& m, const ThetaCharacteristic& ch);

/// | |theta[ch'](M(z,Z))| - |det(cZ+d)|^{1/2} |exp(pi i z'(cZ+d)^{-1} c z)| |theta[ch](z,Z)| |
/// with M(z,Z) = ((cZ+d)^{-T} z, M(Z)) and ch' = char_transform(M^{-1}, ch), the
/// characteristic carried forward by M. The eighth root of unity in the
/// transformation law is not determined, hence moduli only.
double modular_magnitude_check(const SymplecticMatrix& m, const ThetaCharacteristic& ch,
                               std::span<const cplx> z, const RiemannMatrix& zm,
                               const TruncationPolicy& policy = {});

}  // namespace w9
