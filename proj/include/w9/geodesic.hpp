#pragma once

#include "w9/siegel.hpp"
#include "w9/theta.hpp"

#include <optional>
#include <string>
#include <vector>

namespace w9 {

struct SolverConfig {
    /// Tail tolerance of the truncated series.
    double series_tol = 1e-12;
    double root_tol = 1e-10;
    double scan_step = 0.05;
    /// Upper end of the scan window; <= 0 means 5t.
    double scan_max = 0.0;
    int max_bisections = 200;

    /// Throws ParameterError unless every field is positive (scan_max may be <= 0).
    void validate() const;
};

struct GeodesicPoint {
    double t = 0.0;
    double y = 0.0;
    RiemannMatrix z;
    RiemannMatrix zhat;
    /// |main_series| at y.
    double residual = 0.0;
    /// Sign changes seen in the scan window (1 unless ambiguous or warm-started).
    int sign_changes = 0;
    /// "cold_scan", "warm_start", "multiple_sign_changes".
    std::vector<std::string> flags;
};

/// [[iy, iy/2, i(t-y/2)], [iy/2, 1/2 + i(y-t/2), iy/2], [i(t-y/2), iy/2, iy]].
/// Throws DomainError unless t > 0 and y > 2t/3.
RiemannMatrix zhat_of_ty(double t, double y);

/// Diagonal 1/2 + i(y - t/2), off-diagonal 1/2 - i(y - t)/2.
RiemannMatrix zhat_prime(double t, double y);

/// The 6x6 base change taking zhat_of_ty to zhat_prime.
const SymplecticMatrix& prime_basis_change();

/// [[1 + i(2y-t), iy], [iy, i(y/2+t)]].
RiemannMatrix z_of_ty(double t, double y);

/// Sum over k in Z^3 of exp pi[(t/2 - y + i/2) sum k_l^2 + (y - t + i) sum_{l<m} k_l k_m
/// + (3i/2 - t/2) sum k_l], evaluated as a Riemann theta value. Real up to rounding.
ThetaValue main_series(double t, double y, const TruncationPolicy& policy = {});

/// exp(pi(-3t/8 + 9i/8)); theta[111;000](zhat_prime) = factor * main_series.
cplx main_series_factor(double t);

/// Root y > 2t/3 of main_series for t >= 1: scan then bisect. Throws
/// BracketError when no sign change is found below scan_max.
GeodesicPoint solve_y(double t, const SolverConfig& cfg = {});

struct TraceEntry {
    double t = 0.0;
    std::optional<GeodesicPoint> point;
    /// Set when the point failed; the entry is kept.
    std::string error;
    bool numerical_error = false;
};

/// solve_y on a uniform grid of `steps` points in [t_start, t_end], each scan
/// warm-started from the previous root, with a cold scan every 10th point.
/// t_start == t_end with steps == 1 gives a single point.
std::vector<TraceEntry> trace(double t_start, double t_end, int steps, const SolverConfig& cfg = {});

struct TyPair {
    double t;
    double y;
};

/// y = Im z1, t = Im z13 + y/2 from a shape-conforming Zhat with purely
/// imaginary z1, z13 (both checked at tol).
TyPair extract_ty_from_cover(const RiemannMatrix& zhat, double tol = 1e-6);

}  // namespace w9
