#include "w9/geodesic.hpp"

#include "w9/errors.hpp"
#include "w9/w9.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace w9 {

namespace {

constexpr cplx kI{0.0, 1.0};

void check_domain(double t, double y, const char* who) {
    if (!(t > 0.0) || !std::isfinite(t) || !std::isfinite(y) || !(y > 2.0 * t / 3.0)) {
        std::ostringstream msg;
        msg << who << ": need t > 0 and y > 2t/3, got (t, y) = (" << t << ", " << y << ")";
        throw DomainError(msg.str());
    }
}

double window_top(double t, const SolverConfig& cfg) { return cfg.scan_max > 0.0 ? cfg.scan_max : 5.0 * t; }

class Series {
public:
    Series(double t, const SolverConfig& cfg) : t_(t) { policy_.tail_tol = cfg.series_tol; }
    double operator()(double y) const { return main_series(t_, y, policy_).value.real(); }
    const TruncationPolicy& policy() const { return policy_; }

private:
    double t_;
    TruncationPolicy policy_;
};

struct Bracket {
    double lo, hi, flo, fhi;
};

// Bisection to root_tol in y with |f| below root_tol / 10 as well, as far as the
// arithmetic allows.
double bisect(const Series& f, Bracket b, const SolverConfig& cfg) {
    double best = std::abs(b.flo) < std::abs(b.fhi) ? b.lo : b.hi;
    double best_f = std::min(std::abs(b.flo), std::abs(b.fhi));
    for (int it = 0; it < cfg.max_bisections; ++it) {
        const double mid = 0.5 * (b.lo + b.hi);
        if (mid <= b.lo || mid >= b.hi) break;
        const double fm = f(mid);
        if (std::abs(fm) < best_f) {
            best = mid;
            best_f = std::abs(fm);
        }
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (b.flo < 0.0)) {
            b.lo = mid;
            b.flo = fm;
        } else {
            b.hi = mid;
            b.fhi = fm;
        }
        if (b.hi - b.lo <= cfg.root_tol && best_f < 0.1 * cfg.root_tol) break;
    }
    if (b.hi - b.lo > cfg.root_tol) {
        std::ostringstream msg;
        msg << "solve_y: bisection stopped with bracket width " << (b.hi - b.lo);
        throw AccuracyError(msg.str());
    }
    return best;
}

GeodesicPoint make_point(double t, double y, double residual, int changes, std::vector<std::string> flags) {
    return {t, y, z_of_ty(t, y), zhat_of_ty(t, y), residual, changes, std::move(flags)};
}

GeodesicPoint cold_solve(double t, const SolverConfig& cfg) {
    const Series f(t, cfg);
    const double y0 = 2.0 * t / 3.0;
    const double top = window_top(t, cfg);
    std::vector<Bracket> brackets;
    double prev_y = y0 + cfg.scan_step;
    double prev_f = f(prev_y);
    for (int k = 2;; ++k) {
        const double y = y0 + cfg.scan_step * k;
        if (y > top + 1e-12) break;
        const double fy = f(y);
        if (prev_f == 0.0 || (fy < 0.0) != (prev_f < 0.0)) brackets.push_back({prev_y, y, prev_f, fy});
        prev_y = y;
        prev_f = fy;
    }
    if (brackets.empty()) {
        std::ostringstream msg;
        msg << "solve_y: no sign change of the series for y in (" << y0 << ", " << top << "] at t = " << t;
        throw BracketError(msg.str());
    }
    const double y = bisect(f, brackets.front(), cfg);
    std::vector<std::string> flags{"cold_scan"};
    if (brackets.size() > 1) flags.emplace_back("multiple_sign_changes");
    return make_point(t, y, std::abs(main_series(t, y, f.policy()).value), static_cast<int>(brackets.size()),
                      std::move(flags));
}

// Steps outward from the previous root until the sign changes.
GeodesicPoint warm_solve(double t, double y_prev, const SolverConfig& cfg) {
    const Series f(t, cfg);
    const double floor_y = 2.0 * t / 3.0 + cfg.scan_step;
    const double top = window_top(t, cfg);
    const double start = std::clamp(y_prev, floor_y, top);
    const double fs = f(start);
    for (int k = 1;; ++k) {
        const double up = start + cfg.scan_step * k;
        const double down = start - cfg.scan_step * k;
        bool moved = false;
        if (up <= top + 1e-12) {
            moved = true;
            const double fu = f(up);
            if ((fu < 0.0) != (fs < 0.0) || fs == 0.0) {
                const double lo = up - cfg.scan_step;
                const double y = bisect(f, {lo, up, f(lo), fu}, cfg);
                return make_point(t, y, std::abs(main_series(t, y, f.policy()).value), 1, {"warm_start"});
            }
        }
        if (down >= floor_y - 1e-12) {
            moved = true;
            const double fd = f(down);
            if ((fd < 0.0) != (fs < 0.0)) {
                const double hi = down + cfg.scan_step;
                const double y = bisect(f, {down, hi, fd, f(hi)}, cfg);
                return make_point(t, y, std::abs(main_series(t, y, f.policy()).value), 1, {"warm_start"});
            }
        }
        if (!moved) break;
    }
    return cold_solve(t, cfg);
}

}  // namespace

void SolverConfig::validate() const {
    if (!(series_tol > 0.0) || !(root_tol > 0.0) || !(scan_step > 0.0) || max_bisections <= 0) {
        throw ParameterError("solver config: series_tol, root_tol, scan_step and max_bisections must be positive");
    }
}

RiemannMatrix zhat_of_ty(double t, double y) {
    check_domain(t, y, "zhat_of_ty");
    const cplx a = kI * y, h = kI * (y / 2.0), c = kI * (t - y / 2.0);
    const cplx m = 0.5 + kI * (y - t / 2.0);
    return RiemannMatrix(ComplexMatrix{{a, h, c}, {h, m, h}, {c, h, a}});
}

RiemannMatrix zhat_prime(double t, double y) {
    check_domain(t, y, "zhat_prime");
    const cplx d = 0.5 + kI * (y - t / 2.0);
    const cplx e = 0.5 - kI * (0.5 * (y - t));
    return RiemannMatrix(ComplexMatrix{{d, e, e}, {e, d, e}, {e, e, d}});
}

const SymplecticMatrix& prime_basis_change() {
    static const SymplecticMatrix m(IntMatrix{{0, 0, 1, 0, 0, 0},
                                              {-1, 1, -1, 0, 0, 0},
                                              {1, 0, 0, 0, 0, 0},
                                              {1, 1, 1, 0, 1, 1},
                                              {1, 0, 1, 0, 1, 0},
                                              {1, 1, 1, 1, 1, 0}});
    return m;
}

RiemannMatrix z_of_ty(double t, double y) {
    check_domain(t, y, "z_of_ty");
    return RiemannMatrix(ComplexMatrix{{1.0 + kI * (2.0 * y - t), kI * y}, {kI * y, kI * (y / 2.0 + t)}});
}

ThetaValue main_series(double t, double y, const TruncationPolicy& policy) {
    check_domain(t, y, "main_series");
    // exp pi[k^T Q k + b^T k] = exp(pi i k^T Z k + 2 pi i k^T w) with Z = -iQ, w = -ib/2.
    const cplx qd = t / 2.0 - y + 0.5 * kI;
    const cplx qo = 0.5 * (y - t + kI);
    const cplx zd = -kI * qd, zo = -kI * qo;
    const RiemannMatrix z(ComplexMatrix{{zd, zo, zo}, {zo, zd, zo}, {zo, zo, zd}});
    const cplx w = -kI * (1.5 * kI - t / 2.0) / 2.0;
    const std::vector<cplx> ws(3, w);
    return riemann_theta(ws, z, policy);
}

cplx main_series_factor(double t) { return std::exp(std::numbers::pi * cplx(-3.0 * t / 8.0, 9.0 / 8.0)); }

GeodesicPoint solve_y(double t, const SolverConfig& cfg) {
    cfg.validate();
    if (!(t >= 1.0) || !std::isfinite(t)) {
        std::ostringstream msg;
        msg << "solve_y: need t >= 1, got " << t;
        throw DomainError(msg.str());
    }
    return cold_solve(t, cfg);
}

std::vector<TraceEntry> trace(double t_start, double t_end, int steps, const SolverConfig& cfg) {
    cfg.validate();
    const bool single = t_start == t_end && steps == 1;
    if (!single && !(t_start < t_end && steps >= 2)) {
        throw ParameterError("trace: need t_start < t_end and steps >= 2 (or t_start == t_end with steps == 1)");
    }
    if (!(t_start >= 1.0) || !std::isfinite(t_end)) throw DomainError("trace: need 1 <= t_start");
    std::vector<TraceEntry> out;
    std::optional<double> prev;
    for (int i = 0; i < steps; ++i) {
        const double t = single ? t_start : t_start + (t_end - t_start) * i / (steps - 1);
        TraceEntry e;
        e.t = t;
        try {
            e.point = (prev && i % 10 != 0) ? warm_solve(t, *prev, cfg) : solve_y(t, cfg);
            prev = e.point->y;
        } catch (const Error& err) {
            e.error = err.what();
            e.numerical_error = err.numerical();
            prev.reset();
        }
        out.push_back(std::move(e));
    }
    return out;
}

TyPair extract_ty_from_cover(const RiemannMatrix& zhat, double tol) {
    const CoverShape s = cover_shape_extract(zhat, tol);
    if (std::abs(s.z1.real()) > tol || std::abs(s.z13.real()) > tol) {
        std::ostringstream msg;
        msg << "extract_ty_from_cover: z1 and z13 must be purely imaginary (Re parts " << s.z1.real() << ", "
            << s.z13.real() << ")";
        throw ShapeMismatchError(msg.str());
    }
    const double y = s.z1.imag();
    return {s.z13.imag() + y / 2.0, y};
}

}  // namespace w9
