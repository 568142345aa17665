#pragma once

#include "w9/siegel.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace w9 {

/// y^2 = prod (x - x_j). With an odd number of points infinity is a branch
/// point as well.
class HyperellipticCurve {
public:
    /// Throws ParameterError on fewer than three points or a pair closer
    /// than 1e-12.
    explicit HyperellipticCurve(std::vector<cplx> branch_points);

    const std::vector<cplx>& branch_points() const noexcept { return points_; }
    std::size_t genus() const noexcept { return (points_.size() - 1) / 2; }
    bool branched_at_infinity() const noexcept { return points_.size() % 2 == 1; }
    double min_pairwise_distance() const noexcept { return min_dist_; }
    /// Paths must keep this distance from every branch point they do not end at.
    double clearance() const noexcept { return 1e-3 * min_dist_; }
    cplx eval(cplx x) const;

private:
    std::vector<cplx> points_;
    double min_dist_ = 0.0;
};

/// Piecewise-linear path; the first and last nodes are branch points.
struct ArcPath {
    std::vector<cplx> nodes;

    cplx start() const { return nodes.front(); }
    cplx end() const { return nodes.back(); }
    ArcPath reversed() const;
    /// Midpoint of the middle segment. Branch signs are fixed here.
    cplx anchor() const;
};

/// Throws PathError when an endpoint is not a branch point, or the path
/// comes within the curve's clearance of a branch point other than its
/// own endpoints.
void validate_path(const HyperellipticCurve& curve, const ArcPath& path);

struct QuadConfig {
    double tol = 1e-11;
    int min_level = 3;
    int max_level = 12;
    /// Half-width of the truncated tanh-sinh parameter interval.
    double t_max = 4.5;
};

struct ArcIntegrals {
    /// values[k-1] = integral of x^{k-1} dx / sqrt(P), k = 1..count.
    std::vector<cplx> values;
    /// Level at which two successive levels agreed; step 2^{-level}.
    int level = 0;
};

/// Integrals of x^{k-1} dx / sqrt(P(x)), k = 1..count, along the path. The
/// branch of sqrt(P) is branch_sign times the principal root at
/// path.anchor(), continued along the path. Throws PathError, AccuracyError
/// or TrackingError.
ArcIntegrals integrate_arc_all(const HyperellipticCurve& curve, const ArcPath& path, std::size_t count,
                               int branch_sign, const QuadConfig& quad = {});

cplx integrate_arc(const HyperellipticCurve& curve, const ArcPath& path, std::size_t k, int branch_sign,
                   const QuadConfig& quad = {});

struct BranchSample {
    cplx x;
    cplx sqrt_p;
};

/// The continued branch used by integrate_arc at `count` points spread
/// over the open path.
std::vector<BranchSample> sample_branch(const HyperellipticCurve& curve, const ArcPath& path, int branch_sign,
                                        std::size_t count);

/// Continues sqrt(P) from `from` (value `value`) to `to` along the polyline
/// `via`. Steps are capped at a quarter of the distance to the nearest
/// branch point. Throws TrackingError when |sqrt P| drops below 1e-13.
cplx continue_sqrt(const HyperellipticCurve& curve, cplx value, const std::vector<cplx>& via);

enum class Layout { real_mcurve_genus2, cover_genus3, elliptic };

const char* to_string(Layout layout);
/// Accepts "genus2_w9", "real_mcurve_genus2", "cover", "cover_genus3", "elliptic".
Layout parse_layout(std::string_view name);

/// Branch signs relative to the principal root at each arc's anchor, such
/// that all arcs carry one branch of sqrt(P): the reference arc gets the
/// branch that is real and positive there (times convention_sign), the
/// others are reached by continuation along a detour through the upper
/// half-plane. Arcs without a path (through infinity) get 0.
std::vector<int> sqrt_determination(const HyperellipticCurve& curve, const std::vector<std::optional<ArcPath>>& arcs,
                                    std::size_t reference_arc, int convention_sign = 1);

/// Per-layout outcome of matching the computed period matrix to the
/// s = 2 - sqrt(3) fixture: a sign per arc and an integer symmetric
/// translation S acting as A <- A + S B.
struct OrientationCalibration {
    std::vector<int> orientation;
    IntMatrix translation;
    double residual = 0.0;
};

struct CalibrationTable {
    int version = 0;
    std::string id;
    OrientationCalibration genus2;
    OrientationCalibration cover;
    OrientationCalibration elliptic;

    const OrientationCalibration& at(Layout layout) const;
};

/// Throws ParameterError on malformed input.
CalibrationTable parse_calibration(std::string_view json_text);
std::string calibration_to_json(const CalibrationTable& table);

/// The table compiled into the library and the SHA-256 (hex) of the file
/// it came from.
const CalibrationTable& builtin_calibration();
std::string_view builtin_calibration_sha256();

/// Re-derives the table at s = 2 - sqrt(3).
CalibrationTable calibrate(const QuadConfig& quad = {});

struct CyclePlan {
    Layout layout;
    /// All 2g+2 arcs in order; std::nullopt for an arc through infinity.
    std::vector<std::optional<ArcPath>> arcs;
    std::size_t reference_arc = 0;
    /// Branch sign per arc (sqrt_determination times the calibrated orientation).
    std::vector<int> arc_signs;
    /// alpha_j and beta_j as integer combinations of the arcs.
    std::vector<std::vector<int>> alpha_rows;
    std::vector<std::vector<int>> beta_rows;
    IntMatrix translation;
};

/// Intersection pairing of arc combinations with (d_j . d_{j+1}) = 1 cyclically.
int intersection(const std::vector<int>& u, const std::vector<int>& v);

/// Intersection matrix of (alpha_1..alpha_g, beta_1..beta_g).
IntMatrix intersection_matrix(const CyclePlan& plan);

/// Throws LayoutError when the points do not have the layout's shape:
/// genus 2: five real points; cover: {+-i, +-a, +-b, +-c}, 0 < a < b < c;
/// elliptic: three real points.
CyclePlan build_cycles(const HyperellipticCurve& curve, Layout layout,
                       const CalibrationTable& calibration = builtin_calibration());

struct PeriodPair {
    ComplexMatrix a;
    ComplexMatrix b;
    /// Deepest quadrature level used over all arcs.
    int level = 0;
};

/// Arc integrals for every finite arc (rows: arcs, cols: k), arcs in parallel.
std::vector<ArcIntegrals> arc_integrals(const HyperellipticCurve& curve, const CyclePlan& plan,
                                        const QuadConfig& quad = {});
std::vector<ArcIntegrals> arc_integrals_serial(const HyperellipticCurve& curve, const CyclePlan& plan,
                                               const QuadConfig& quad = {});

PeriodPair period_matrices(const HyperellipticCurve& curve, const CyclePlan& plan, const QuadConfig& quad = {});

/// A B^{-1}, symmetrised. The symmetry residual must stay below sym_tol,
/// which defaults (sym_tol <= 0) to 100 * quad.tol.
RiemannMatrix period_matrix(const HyperellipticCurve& curve, const CyclePlan& plan, const QuadConfig& quad = {},
                            double sym_tol = 0.0);

}  // namespace w9
