#include "w9/errors.hpp"
#include "w9/periods.hpp"

#include "compensated.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace w9 {

namespace {

constexpr double kTinySqrt = 1e-13;

double distance_to_segment(cplx p, cplx a, cplx b) {
    const cplx d = b - a;
    const double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(p - a);
    const double t = std::clamp(((p - a) * std::conj(d)).real() / len2, 0.0, 1.0);
    return std::abs(p - (a + t * d));
}

bool same_point(cplx a, cplx b) { return std::abs(a - b) <= 1e-12; }

// Principal square root of prod (x - r) with the sign nearest `prev` in phase.
class RootProduct {
public:
    explicit RootProduct(std::vector<cplx> roots) : roots_(std::move(roots)) {}

    cplx value(cplx x) const {
        cplx p = 1.0;
        for (cplx r : roots_) p *= x - r;
        return p;
    }

    double nearest(cplx x) const {
        double d = std::numeric_limits<double>::infinity();
        for (cplx r : roots_) d = std::min(d, std::abs(x - r));
        return d;
    }

    cplx aligned_sqrt(cplx x, cplx prev) const {
        cplx s = std::sqrt(value(x));
        if (std::abs(s) < kTinySqrt) {
            std::ostringstream msg;
            msg << "square-root tracking: |sqrt P| = " << std::abs(s) << " at x = " << x;
            throw TrackingError(msg.str());
        }
        if ((s * std::conj(prev)).real() < 0.0) s = -s;
        return s;
    }

    // Continue sqrt from (a, sa) to b along the straight segment.
    cplx walk(cplx a, cplx sa, cplx b) const {
        cplx x = a;
        cplx s = sa;
        for (int guard = 0; guard < 1000000; ++guard) {
            const double rest = std::abs(b - x);
            if (rest == 0.0) return s;
            const double d = nearest(x);
            if (!(d > 0.0)) throw TrackingError("square-root tracking: path hits a branch point");
            const double step = std::min(rest, 0.25 * d);
            x = step == rest ? b : x + (b - x) * (step / rest);
            s = aligned_sqrt(x, s);
        }
        throw TrackingError("square-root tracking: step budget exhausted");
    }

private:
    std::vector<cplx> roots_;
};

struct PathPos {
    std::size_t seg;
    double frac;
};

cplx at(const ArcPath& p, PathPos q) { return p.nodes[q.seg] + q.frac * (p.nodes[q.seg + 1] - p.nodes[q.seg]); }

// Polyline from position a to position b following the path.
std::vector<cplx> route(const ArcPath& p, PathPos a, PathPos b) {
    std::vector<cplx> pts{at(p, a)};
    if (a.seg < b.seg) {
        for (std::size_t s = a.seg + 1; s <= b.seg; ++s) pts.push_back(p.nodes[s]);
    } else if (a.seg > b.seg) {
        for (std::size_t s = a.seg; s > b.seg; --s) pts.push_back(p.nodes[s]);
    }
    pts.push_back(at(p, b));
    return pts;
}

PathPos anchor_pos(const ArcPath& p) { return {(p.nodes.size() - 2) / 2, 0.5}; }

cplx anchor_value(const HyperellipticCurve& curve, const ArcPath& path, int branch_sign) {
    if (branch_sign != 1 && branch_sign != -1) throw ParameterError("branch_sign must be +1 or -1");
    const cplx s = std::sqrt(curve.eval(path.anchor()));
    if (std::abs(s) < kTinySqrt) throw TrackingError("square-root tracking: anchor too close to a branch point");
    return static_cast<double>(branch_sign) * s;
}

// One segment, all powers k = 1..count, by tanh-sinh with the endpoint
// square-root factors divided out analytically:
//   sqrt P(x) = C (1+u)^{a/2} (1-u)^{b/2} S(u),  x = mid + half u,
// where a, b flag the endpoints that are branch points, C^2 = half^a (-half)^b
// and S^2 is the product over the remaining branch points.
class SegmentRule {
public:
    SegmentRule(const HyperellipticCurve& curve, cplx e0, cplx e1, bool sing0, bool sing1, cplx sqrt_mid,
                std::size_t count, const QuadConfig& quad)
        : mid_(0.5 * (e0 + e1)), half_(0.5 * (e1 - e0)), sing0_(sing0), sing1_(sing1), count_(count), quad_(quad),
          rest_([&] {
              std::vector<cplx> r;
              for (cplx x : curve.branch_points()) {
                  if ((sing0 && same_point(x, e0)) || (sing1 && same_point(x, e1))) continue;
                  r.push_back(x);
              }
              return r;
          }()) {
        cplx c2 = 1.0;
        if (sing0_) c2 *= half_;
        if (sing1_) c2 *= -half_;
        c_ = std::sqrt(c2);
        s0_ = sqrt_mid / c_;
    }

    ArcIntegrals run() {
        int level = quad_.min_level;
        double h = std::ldexp(1.0, -level);
        long n = static_cast<long>(std::floor(quad_.t_max / h));
        // Node index j in [-n, n] stored at j + n.
        std::vector<cplx> s(2 * n + 1);
        s[n] = s0_;
        for (long j = 1; j <= n; ++j) {
            s[n + j] = rest_.walk(x_of(node(h * (j - 1)).u), s[n + j - 1], x_of(node(h * j).u));
            s[n - j] = rest_.walk(x_of(node(-h * (j - 1)).u), s[n - j + 1], x_of(node(-h * j).u));
        }
        std::vector<cplx> sum = level_sum(h, n, s, 1);
        for (++level; level <= quad_.max_level; ++level) {
            const double hn = 0.5 * h;
            const long nn = static_cast<long>(std::floor(quad_.t_max / hn));
            std::vector<cplx> sn(2 * nn + 1);
            for (long j = -n; j <= n; ++j) sn[nn + 2 * j] = s[n + j];
            for (long j = 1; j <= nn; j += 2) {
                sn[nn + j] = rest_.walk(x_of(node(hn * (j - 1)).u), sn[nn + j - 1], x_of(node(hn * j).u));
                sn[nn - j] = rest_.walk(x_of(node(-hn * (j - 1)).u), sn[nn - j + 1], x_of(node(-hn * j).u));
            }
            std::vector<cplx> next = level_sum(hn, nn, sn, 2);
            for (std::size_t k = 0; k < count_; ++k) next[k] += 0.5 * sum[k];
            double diff = 0.0;
            for (std::size_t k = 0; k < count_; ++k) diff = std::max(diff, std::abs(next[k] - sum[k]));
            sum = std::move(next);
            s = std::move(sn);
            h = hn;
            n = nn;
            if (diff <= quad_.tol) return {sum, level};
        }
        std::ostringstream msg;
        msg << "tanh-sinh quadrature did not reach tol " << quad_.tol << " by level " << quad_.max_level
            << " on segment " << mid_ - half_ << " -> " << mid_ + half_;
        throw AccuracyError(msg.str());
    }

private:
    struct Node {
        double u;
        double weight;
    };

    Node node(double t) const {
        constexpr double hp = 0.5 * std::numbers::pi;
        const double v = hp * std::sinh(t);
        const double av = std::abs(v);
        // 1 - |u| = 2 e^{-2|v|} / (1 + e^{-2|v|}), 1 + |u| = 2 / (1 + e^{-2|v|}).
        const double e = std::exp(-2.0 * av);
        const double small = 2.0 * e / (1.0 + e);
        const double large = 2.0 / (1.0 + e);
        const double u = std::copysign(1.0 - small, v);
        const double one_plus = v >= 0 ? large : small;
        const double one_minus = v >= 0 ? small : large;
        // du/dt = hp cosh t (1 - u^2).
        double w = hp * std::cosh(t) * one_plus * one_minus;
        if (sing0_) w /= std::sqrt(one_plus);
        if (sing1_) w /= std::sqrt(one_minus);
        return {u, w};
    }

    cplx x_of(double u) const { return mid_ + half_ * u; }

    // h * sum over nodes j = first, first + stride, ... (both signs; j = 0 only when first == 1).
    std::vector<cplx> level_sum(double h, long n, const std::vector<cplx>& s, long stride) const {
        std::vector<detail::ComplexNeumaierSum> acc(count_);
        auto add = [&](long j) {
            const Node nd = node(h * j);
            if (nd.weight == 0.0) return;
            const cplx x = x_of(nd.u);
            const cplx base = half_ * nd.weight / (c_ * s[n + j]);
            cplx xp = 1.0;
            for (std::size_t k = 0; k < count_; ++k) {
                acc[k].add(base * xp);
                xp *= x;
            }
        };
        if (stride == 1) add(0);
        for (long j = 1; j <= n; j += stride) {
            add(j);
            add(-j);
        }
        std::vector<cplx> out(count_);
        for (std::size_t k = 0; k < count_; ++k) out[k] = h * acc[k].value();
        return out;
    }

    cplx mid_, half_;
    bool sing0_, sing1_;
    std::size_t count_;
    QuadConfig quad_;
    RootProduct rest_;
    cplx c_, s0_;
};

}  // namespace

HyperellipticCurve::HyperellipticCurve(std::vector<cplx> branch_points) : points_(std::move(branch_points)) {
    if (points_.size() < 3) throw ParameterError("HyperellipticCurve: need at least three branch points");
    min_dist_ = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!std::isfinite(points_[i].real()) || !std::isfinite(points_[i].imag())) {
            throw ParameterError("HyperellipticCurve: non-finite branch point");
        }
        for (std::size_t j = 0; j < i; ++j) min_dist_ = std::min(min_dist_, std::abs(points_[i] - points_[j]));
    }
    if (min_dist_ <= 1e-12) throw ParameterError("HyperellipticCurve: branch points are not distinct");
}

cplx HyperellipticCurve::eval(cplx x) const {
    cplx p = 1.0;
    for (cplx r : points_) p *= x - r;
    return p;
}

ArcPath ArcPath::reversed() const {
    ArcPath r{nodes};
    std::reverse(r.nodes.begin(), r.nodes.end());
    return r;
}

cplx ArcPath::anchor() const {
    if (nodes.size() < 2) throw PathError("ArcPath: need at least two nodes");
    return at(*this, anchor_pos(*this));
}

void validate_path(const HyperellipticCurve& curve, const ArcPath& path) {
    if (path.nodes.size() < 2) throw PathError("ArcPath: need at least two nodes");
    const auto& pts = curve.branch_points();
    auto is_branch = [&](cplx x) {
        return std::any_of(pts.begin(), pts.end(), [&](cplx p) { return same_point(p, x); });
    };
    if (!is_branch(path.start()) || !is_branch(path.end())) {
        throw PathError("ArcPath: endpoints must be branch points");
    }
    if (same_point(path.start(), path.end())) throw PathError("ArcPath: endpoints coincide");
    const double clear = curve.clearance();
    for (std::size_t s = 0; s + 1 < path.nodes.size(); ++s) {
        if (same_point(path.nodes[s], path.nodes[s + 1])) throw PathError("ArcPath: repeated node");
        for (cplx p : pts) {
            const bool own_start = s == 0 && same_point(p, path.start());
            const bool own_end = s + 2 == path.nodes.size() && same_point(p, path.end());
            if (own_start || own_end) continue;
            if (distance_to_segment(p, path.nodes[s], path.nodes[s + 1]) < clear) {
                std::ostringstream msg;
                msg << "ArcPath: segment " << path.nodes[s] << " -> " << path.nodes[s + 1]
                    << " passes within clearance " << clear << " of branch point " << p;
                throw PathError(msg.str());
            }
        }
    }
}

cplx continue_sqrt(const HyperellipticCurve& curve, cplx value, const std::vector<cplx>& via) {
    const RootProduct rp(curve.branch_points());
    cplx s = value;
    for (std::size_t i = 0; i + 1 < via.size(); ++i) s = rp.walk(via[i], s, via[i + 1]);
    return s;
}

ArcIntegrals integrate_arc_all(const HyperellipticCurve& curve, const ArcPath& path, std::size_t count,
                               int branch_sign, const QuadConfig& quad) {
    validate_path(curve, path);
    if (count == 0) throw ParameterError("integrate_arc: need at least one power");
    if (!(quad.tol > 0.0) || quad.min_level < 0 || quad.max_level < quad.min_level || !(quad.t_max > 0.0)) {
        throw ParameterError("QuadConfig: invalid settings");
    }
    const cplx sa = anchor_value(curve, path, branch_sign);
    const PathPos apos = anchor_pos(path);
    const std::size_t nseg = path.nodes.size() - 1;

    ArcIntegrals out;
    out.values.assign(count, 0.0);
    for (std::size_t seg = 0; seg < nseg; ++seg) {
        const cplx smid = continue_sqrt(curve, sa, route(path, apos, {seg, 0.5}));
        SegmentRule rule(curve, path.nodes[seg], path.nodes[seg + 1], seg == 0, seg + 1 == nseg, smid, count, quad);
        const ArcIntegrals part = rule.run();
        for (std::size_t k = 0; k < count; ++k) out.values[k] += part.values[k];
        out.level = std::max(out.level, part.level);
    }
    return out;
}

cplx integrate_arc(const HyperellipticCurve& curve, const ArcPath& path, std::size_t k, int branch_sign,
                   const QuadConfig& quad) {
    if (k == 0) throw ParameterError("integrate_arc: k starts at 1");
    if (k > std::max<std::size_t>(curve.genus(), 1)) throw ParameterError("integrate_arc: k exceeds the genus");
    return integrate_arc_all(curve, path, k, branch_sign, quad).values[k - 1];
}

std::vector<BranchSample> sample_branch(const HyperellipticCurve& curve, const ArcPath& path, int branch_sign,
                                        std::size_t count) {
    validate_path(curve, path);
    const cplx sa = anchor_value(curve, path, branch_sign);
    const PathPos apos = anchor_pos(path);
    const std::size_t nseg = path.nodes.size() - 1;
    std::vector<BranchSample> out;
    for (std::size_t i = 0; i < count; ++i) {
        const double f = (i + 0.5) / static_cast<double>(count) * static_cast<double>(nseg);
        const std::size_t seg = std::min(static_cast<std::size_t>(f), nseg - 1);
        const PathPos pos{seg, f - static_cast<double>(seg)};
        out.push_back({at(path, pos), continue_sqrt(curve, sa, route(path, apos, pos))});
    }
    return out;
}

}  // namespace w9
