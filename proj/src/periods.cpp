#include "w9/errors.hpp"
#include "w9/periods.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>

namespace w9 {

namespace {

constexpr double kRealTol = 1e-12;

std::vector<cplx> sorted_reals(const HyperellipticCurve& curve, std::size_t count, const char* layout) {
    const auto& pts = curve.branch_points();
    if (pts.size() != count) {
        std::ostringstream msg;
        msg << layout << " layout expects " << count << " branch points, got " << pts.size();
        throw LayoutError(msg.str());
    }
    std::vector<cplx> out;
    for (cplx p : pts) {
        if (std::abs(p.imag()) > kRealTol) throw LayoutError(std::string(layout) + " layout expects real branch points");
        out.emplace_back(p.real(), 0.0);
    }
    std::sort(out.begin(), out.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
    return out;
}

// Positive a < b < c with the points equal to {+-i, +-a, +-b, +-c}.
std::vector<double> cover_abc(const HyperellipticCurve& curve) {
    const auto& pts = curve.branch_points();
    if (pts.size() != 8) throw LayoutError("cover layout expects 8 branch points");
    std::vector<double> pos;
    int imag_units = 0;
    for (cplx p : pts) {
        if (std::abs(p.real()) <= kRealTol && std::abs(std::abs(p.imag()) - 1.0) <= kRealTol) {
            ++imag_units;
        } else if (std::abs(p.imag()) <= kRealTol) {
            if (p.real() > 0) pos.push_back(p.real());
        } else {
            throw LayoutError("cover layout expects the points +-i, +-a, +-b, +-c");
        }
    }
    if (imag_units != 2 || pos.size() != 3) throw LayoutError("cover layout expects the points +-i, +-a, +-b, +-c");
    std::sort(pos.begin(), pos.end());
    for (double x : pos) {
        const bool has_neg = std::any_of(pts.begin(), pts.end(), [&](cplx p) { return std::abs(p + x) <= 1e-10; });
        if (!has_neg) throw LayoutError("cover layout: real branch points must come in +- pairs");
    }
    return pos;
}

std::vector<int> row(std::size_t n, std::initializer_list<std::pair<std::size_t, int>> entries) {
    std::vector<int> r(n, 0);
    for (auto [arc, c] : entries) r[arc - 1] = c;
    return r;
}

ArcPath segment(cplx a, cplx b) { return ArcPath{{a, b}}; }

}  // namespace

const char* to_string(Layout layout) {
    switch (layout) {
        case Layout::real_mcurve_genus2: return "genus2_w9";
        case Layout::cover_genus3: return "cover";
        case Layout::elliptic: return "elliptic";
    }
    return "?";
}

Layout parse_layout(std::string_view name) {
    if (name == "genus2_w9" || name == "real_mcurve_genus2") return Layout::real_mcurve_genus2;
    if (name == "cover" || name == "cover_genus3") return Layout::cover_genus3;
    if (name == "elliptic") return Layout::elliptic;
    throw ParameterError("unknown basis \"" + std::string(name) + "\" (expected genus2_w9, cover or elliptic)");
}

std::vector<int> sqrt_determination(const HyperellipticCurve& curve, const std::vector<std::optional<ArcPath>>& arcs,
                                    std::size_t reference_arc, int convention_sign) {
    if (convention_sign != 1 && convention_sign != -1) throw ParameterError("convention sign must be +1 or -1");
    if (reference_arc >= arcs.size() || !arcs[reference_arc]) {
        throw ParameterError("sqrt_determination: reference arc is missing");
    }
    const cplx a = arcs[reference_arc]->anchor();
    cplx ref = std::sqrt(curve.eval(a));
    if (std::abs(ref.imag()) > 1e-8 * std::abs(ref)) {
        throw LayoutError("sqrt_determination: P is not positive on the reference arc");
    }
    if (ref.real() < 0) ref = -ref;
    ref *= static_cast<double>(convention_sign);

    // Detour height: half the smallest |Im| over non-real branch points,
    // or half the spread when all are real.
    double h = std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (cplx p : curve.branch_points()) {
        if (std::abs(p.imag()) > kRealTol) h = std::min(h, 0.5 * std::abs(p.imag()));
        lo = std::min(lo, p.real());
        hi = std::max(hi, p.real());
    }
    if (!std::isfinite(h)) h = 0.5 * (hi - lo);

    std::vector<int> signs(arcs.size(), 0);
    for (std::size_t j = 0; j < arcs.size(); ++j) {
        if (!arcs[j]) continue;
        validate_path(curve, *arcs[j]);
        const cplx b = arcs[j]->anchor();
        const std::vector<cplx> via{a, cplx(a.real(), h), cplx(b.real(), h), b};
        const cplx v = continue_sqrt(curve, ref, via);
        const cplx ratio = v / std::sqrt(curve.eval(b));
        const int s = ratio.real() > 0 ? 1 : -1;
        if (std::abs(ratio - static_cast<double>(s)) > 1e-6) {
            throw TrackingError("sqrt_determination: continued value disagrees with the principal root");
        }
        signs[j] = s;
    }
    return signs;
}

const OrientationCalibration& CalibrationTable::at(Layout layout) const {
    switch (layout) {
        case Layout::real_mcurve_genus2: return genus2;
        case Layout::cover_genus3: return cover;
        case Layout::elliptic: return elliptic;
    }
    throw ParameterError("unknown layout");
}

int intersection(const std::vector<int>& u, const std::vector<int>& v) {
    if (u.size() != v.size()) throw DimensionError("intersection: length mismatch");
    const std::size_t n = u.size();
    int s = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t k = (j + 1) % n;
        s += u[j] * v[k] - u[k] * v[j];
    }
    return s;
}

IntMatrix intersection_matrix(const CyclePlan& plan) {
    const std::size_t g = plan.alpha_rows.size();
    std::vector<std::vector<int>> all(plan.alpha_rows);
    all.insert(all.end(), plan.beta_rows.begin(), plan.beta_rows.end());
    IntMatrix m(2 * g);
    for (std::size_t i = 0; i < 2 * g; ++i)
        for (std::size_t j = 0; j < 2 * g; ++j) m(i, j) = intersection(all[i], all[j]);
    return m;
}

CyclePlan build_cycles(const HyperellipticCurve& curve, Layout layout, const CalibrationTable& calibration) {
    CyclePlan plan;
    plan.layout = layout;
    switch (layout) {
        case Layout::real_mcurve_genus2: {
            const auto x = sorted_reals(curve, 5, "genus-2");
            for (std::size_t j = 0; j < 4; ++j) plan.arcs.emplace_back(segment(x[j], x[j + 1]));
            plan.arcs.emplace_back(std::nullopt);
            plan.arcs.emplace_back(std::nullopt);
            plan.reference_arc = 0;
            // alpha_1 = d1 - d6 with d2 + d4 + d6 = 0.
            plan.alpha_rows = {row(6, {{1, 1}, {2, 1}, {4, 1}}), row(6, {{4, 1}})};
            plan.beta_rows = {row(6, {{1, 1}}), row(6, {{3, 1}})};
            break;
        }
        case Layout::cover_genus3: {
            const auto abc = cover_abc(curve);
            const double a = abc[0], b = abc[1], c = abc[2];
            const cplx i(0.0, 1.0);
            const std::vector<cplx> x{-c, -b, -a, i, -i, a, b, c};
            for (std::size_t j = 0; j < 7; ++j) plan.arcs.emplace_back(segment(x[j], x[j + 1]));
            plan.arcs.emplace_back(std::nullopt);
            plan.reference_arc = 1;
            plan.alpha_rows = {row(8, {{1, 1}}), row(8, {{1, 1}, {3, 1}, {4, 1}}), row(8, {{7, 1}})};
            plan.beta_rows = {row(8, {{2, -1}}), row(8, {{4, -1}}), row(8, {{6, 1}})};
            break;
        }
        case Layout::elliptic: {
            const auto x = sorted_reals(curve, 3, "elliptic");
            plan.arcs = {segment(x[0], x[1]), segment(x[1], x[2]), std::nullopt, std::nullopt};
            plan.reference_arc = 0;
            // alpha_1 = -d4 = d2.
            plan.alpha_rows = {row(4, {{2, 1}})};
            plan.beta_rows = {row(4, {{1, 1}})};
            break;
        }
    }
    for (std::size_t j = 0; j < plan.arcs.size(); ++j) {
        if (plan.arcs[j]) validate_path(curve, *plan.arcs[j]);
    }

    const OrientationCalibration& cal = calibration.at(layout);
    std::size_t finite = 0;
    for (const auto& a : plan.arcs) finite += a.has_value();
    const std::size_t g = plan.alpha_rows.size();
    if (cal.orientation.size() != finite || cal.translation.size() != g) {
        throw LayoutError(std::string("calibration table does not fit the ") + to_string(layout) + " layout");
    }
    const std::vector<int> det = sqrt_determination(curve, plan.arcs, plan.reference_arc);
    plan.arc_signs.assign(plan.arcs.size(), 0);
    for (std::size_t j = 0, f = 0; j < plan.arcs.size(); ++j) {
        if (plan.arcs[j]) plan.arc_signs[j] = det[j] * cal.orientation[f++];
    }
    plan.translation = cal.translation;
    return plan;
}

namespace {

ArcIntegrals one_arc(const HyperellipticCurve& curve, const CyclePlan& plan, std::size_t j, const QuadConfig& quad) {
    if (!plan.arcs[j]) return {};
    const std::size_t g = plan.alpha_rows.size();
    return integrate_arc_all(curve, *plan.arcs[j], g, plan.arc_signs[j], quad);
}

}  // namespace

std::vector<ArcIntegrals> arc_integrals(const HyperellipticCurve& curve, const CyclePlan& plan, const QuadConfig& quad) {
    const long n = static_cast<long>(plan.arcs.size());
    std::vector<ArcIntegrals> out(plan.arcs.size());
    std::vector<std::exception_ptr> errors(plan.arcs.size());
#pragma omp parallel for schedule(dynamic)
    for (long j = 0; j < n; ++j) {
        try {
            out[j] = one_arc(curve, plan, static_cast<std::size_t>(j), quad);
        } catch (...) {
            errors[j] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

std::vector<ArcIntegrals> arc_integrals_serial(const HyperellipticCurve& curve, const CyclePlan& plan,
                                               const QuadConfig& quad) {
    std::vector<ArcIntegrals> out;
    for (std::size_t j = 0; j < plan.arcs.size(); ++j) out.push_back(one_arc(curve, plan, j, quad));
    return out;
}

PeriodPair period_matrices(const HyperellipticCurve& curve, const CyclePlan& plan, const QuadConfig& quad) {
    const std::size_t g = plan.alpha_rows.size();
    if (curve.genus() != g) throw LayoutError("period_matrices: plan and curve genus differ");
    const auto ints = arc_integrals(curve, plan, quad);
    PeriodPair out{ComplexMatrix(g, g), ComplexMatrix(g, g), 0};
    for (const auto& a : ints) out.level = std::max(out.level, a.level);
    auto assemble = [&](const std::vector<std::vector<int>>& rows, ComplexMatrix& m) {
        for (std::size_t r = 0; r < g; ++r) {
            for (std::size_t j = 0; j < rows[r].size(); ++j) {
                if (rows[r][j] == 0) continue;
                if (!plan.arcs[j]) throw LayoutError("period_matrices: cycle row uses an arc through infinity");
                const double c = rows[r][j];
                for (std::size_t k = 0; k < g; ++k) m(r, k) += c * ints[j].values[k];
            }
        }
    };
    assemble(plan.alpha_rows, out.a);
    assemble(plan.beta_rows, out.b);
    out.a += plan.translation.to_complex() * out.b;
    return out;
}

RiemannMatrix period_matrix(const HyperellipticCurve& curve, const CyclePlan& plan, const QuadConfig& quad,
                            double sym_tol) {
    const PeriodPair pp = period_matrices(curve, plan, quad);
    return RiemannMatrix(right_divide(pp.a, pp.b), sym_tol > 0.0 ? sym_tol : 100.0 * quad.tol);
}

}  // namespace w9
