#include "w9/w9.hpp"

#include "w9/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace w9 {

namespace {

const double kSqrt3 = std::sqrt(3.0);

cplx cubic_eval(cplx b, cplx c, cplx d, cplx x) { return ((x + b) * x + c) * x + d; }

cplx newton_polish(cplx b, cplx c, cplx d, cplx x) {
    for (int it = 0; it < 8; ++it) {
        const cplx f = cubic_eval(b, c, d, x);
        const cplx df = (3.0 * x + 2.0 * b) * x + c;
        if (f == 0.0 || df == 0.0) break;
        const cplx nx = x - f / df;
        if (std::abs(cubic_eval(b, c, d, nx)) >= std::abs(f)) break;
        x = nx;
    }
    return x;
}

bool is_real(cplx z) { return z.imag() == 0.0; }

ConditionResidual condition(const char* label, const char* formula, double residual, double tol) {
    return {label, formula, residual, residual < tol};
}

}  // namespace

ExtendedComplex f3(const ExtendedComplex& x) {
    if (x.infinite) return ExtendedComplex(-1.0 / kSqrt3);
    const cplx num = x.value + kSqrt3;
    const cplx den = -kSqrt3 * x.value + 1.0;
    if (std::abs(den) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(kSqrt3 * x.value))) {
        return ExtendedComplex::infinity();
    }
    return ExtendedComplex(num / den);
}

double f3_real(double x) {
    const ExtendedComplex y = f3(ExtendedComplex(x));
    if (y.infinite) throw PoleError("f3: pole at 1/sqrt(3)");
    return y.value.real();
}

double g_of_s(double s) {
    const double p = 3.0 * s + kSqrt3;
    const double m = 3.0 * s - kSqrt3;
    if (std::abs(p) <= 1e-12 || std::abs(m) <= 1e-12) throw PoleError("g(s): pole at s = +-sqrt(3)/3");
    const double q = s * s + 1.0;
    return -81.0 * q * q * q / (p * p * m * m);
}

double u_dual(double u) {
    if (std::abs(u + 9.0) <= 1e-12 * std::max(1.0, std::abs(u))) throw PoleError("u_dual: pole at u = -9");
    return -9.0 * u / (u + 9.0);
}

cplx cubic_discriminant(cplx b, cplx c, cplx d) {
    return 18.0 * b * c * d - 4.0 * b * b * b * d + b * b * c * c - 4.0 * c * c * c - 27.0 * d * d;
}

std::array<cplx, 3> cubic_roots(cplx b, cplx c, cplx d) {
    const cplx p = c - b * b / 3.0;
    const cplx q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    const cplx shift = -b / 3.0;
    std::array<cplx, 3> y{};
    const bool real_coeffs = is_real(b) && is_real(c) && is_real(d);
    if (real_coeffs && cubic_discriminant(b, c, d).real() > 0.0 && p.real() < 0.0) {
        const double pr = p.real(), qr = q.real();
        const double r = 2.0 * std::sqrt(-pr / 3.0);
        const double arg = std::clamp(3.0 * qr / (2.0 * pr) * std::sqrt(-3.0 / pr), -1.0, 1.0);
        const double phi = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k) y[k] = r * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0);
    } else {
        cplx disc = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
        cplx u3 = -q / 2.0 + disc;
        if (std::abs(-q / 2.0 - disc) > std::abs(u3)) u3 = -q / 2.0 - disc;
        if (std::abs(u3) == 0.0) {
            y = {0.0, 0.0, 0.0};
        } else {
            const cplx u = std::pow(u3, 1.0 / 3.0);
            const cplx w(-0.5, std::sqrt(3.0) / 2.0);
            cplx wk = 1.0;
            for (int k = 0; k < 3; ++k) {
                const cplx uk = u * wk;
                y[k] = uk - p / (3.0 * uk);
                wk *= w;
            }
        }
    }
    std::array<cplx, 3> out{};
    for (int k = 0; k < 3; ++k) {
        out[k] = newton_polish(b, c, d, y[k] + shift);
        if (real_coeffs && std::abs(out[k].imag()) <= 1e-14 * std::max(1.0, std::abs(out[k]))) {
            out[k] = newton_polish(b, c, d, out[k].real());
        }
    }
    return out;
}

HyperellipticCurve curve_Pu(cplx u) {
    if (std::abs(u) <= 1e-12 || std::abs(u + 9.0) <= 1e-12) {
        throw ParameterError("curve_Pu: u = 0 and u = -9 are excluded");
    }
    const cplx b = u, c = -8.0 / 3.0 * u, d = 16.0 / 9.0 * u;
    const auto roots = cubic_roots(b, c, d);
    const double scale = std::max({1.0, std::abs(roots[0]), std::abs(roots[1]), std::abs(roots[2])});
    for (const cplx r : roots) {
        const double res = std::abs(cubic_eval(b, c, d, r));
        const double ref = std::max(1.0, std::abs(r) * std::abs(r) * std::abs(r) + std::abs(b) * std::norm(r) +
                                             std::abs(c) * std::abs(r) + std::abs(d));
        if (res > 1e-13 * ref) {
            std::ostringstream msg;
            msg << "curve_Pu: cubic root residual " << res << " too large";
            throw AccuracyError(msg.str());
        }
    }
    std::vector<cplx> pts{0.0, 1.0, roots[0], roots[1], roots[2]};
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (std::abs(pts[i] - pts[j]) <= 1e-8 * scale) throw DegeneracyError("curve_Pu: repeated branch point");
    return HyperellipticCurve(std::move(pts));
}

W9Param W9Param::from_s(double s) {
    if (!(s > 0.0 && s < kSqrt3 / 3.0)) {
        std::ostringstream msg;
        msg << "s = " << s << " is outside (0, sqrt(3)/3)";
        throw ParameterError(msg.str());
    }
    const double fs = f3_real(s);
    const double ffs = f3_real(fs);
    return {s, s * s, ffs * ffs, fs * fs, g_of_s(s)};
}

HyperellipticCurve curve_Qs(double s) {
    const W9Param p = W9Param::from_s(s);
    return HyperellipticCurve({-1.0, 0.0, p.a, p.b, p.c});
}

HyperellipticCurve double_cover(const HyperellipticCurve& genus2) {
    const auto& pts = genus2.branch_points();
    if (pts.size() != 5) throw LayoutError("double_cover: expects a genus-2 curve with five finite branch points");
    bool minus_one = false, zero = false;
    std::vector<double> pos;
    for (cplx p : pts) {
        if (std::abs(p.imag()) > 1e-12) throw LayoutError("double_cover: branch points must be real");
        if (std::abs(p.real() + 1.0) <= 1e-12) {
            minus_one = true;
        } else if (std::abs(p.real()) <= 1e-12) {
            zero = true;
        } else if (p.real() > 0.0) {
            pos.push_back(p.real());
        }
    }
    if (!minus_one || !zero || pos.size() != 3) {
        throw LayoutError("double_cover: expects branch points -1, 0, a^2, b^2, c^2 with a, b, c > 0");
    }
    const cplx i(0.0, 1.0);
    std::vector<cplx> out{i, -i};
    for (double x : pos) {
        const double r = std::sqrt(x);
        out.emplace_back(r);
        out.emplace_back(-r);
    }
    return HyperellipticCurve(std::move(out));
}

ComplexMatrix CoverShape::matrix() const {
    const cplx h = 0.5 * z1;
    const cplx mid = 0.5 + 0.75 * z1 - 0.5 * z13;
    return {{z1, h, z13}, {h, mid, h}, {z13, h, z1}};
}

CoverShape cover_shape_extract(const RiemannMatrix& zhat, double tol) {
    if (zhat.genus() != 3) throw DimensionError("cover_shape_extract: expects a 3 x 3 period matrix");
    if (!(tol > 0.0)) throw ParameterError("cover_shape_extract: tol must be positive");
    CoverShape s;
    s.z1 = 0.5 * (zhat(0, 0) + zhat(2, 2));
    s.z13 = zhat(0, 2);
    s.residual = max_abs_diff(zhat.matrix(), s.matrix());
    if (s.residual > tol) {
        std::ostringstream msg;
        msg << "period matrix does not have the double-cover shape (residual " << s.residual << " > " << tol << ")";
        throw ShapeMismatchError(msg.str());
    }
    return s;
}

RiemannMatrix base_from_cover(const RiemannMatrix& zhat, double tol) {
    const CoverShape s = cover_shape_extract(zhat, tol);
    const cplx z2 = zhat(1, 1);
    const cplx z12 = 0.5 * (zhat(0, 1) + zhat(1, 2));
    ComplexMatrix z{{2.0 * z2, 2.0 * z12}, {2.0 * z12, s.z1 + s.z13}};
    try {
        return RiemannMatrix(std::move(z));
    } catch (const DomainError& e) {
        throw DomainError(std::string("base_from_cover: ") + e.what());
    }
}

const char* to_string(Group g) {
    switch (g) {
        case Group::Z2: return "Z2";
        case Group::D2: return "D2";
        case Group::D4: return "D4";
        case Group::D6: return "D6";
        case Group::G24: return "G24";
    }
    return "?";
}

AutomorphismReport cirre_classify(double a, double b, double c, double tol) {
    if (!(tol > 0.0)) throw ParameterError("cirre_classify: tol must be positive");
    if (!(0.0 < a && a < b && b < c && c < 1.0)) {
        std::ostringstream msg;
        msg << "cirre_classify: need 0 < a < b < c < 1, got (" << a << ", " << b << ", " << c << ")";
        throw ParameterError(msg.str());
    }
    AutomorphismReport r;
    r.conditions = {condition("C1", "a = bc", std::abs(a - b * c), tol),
                    condition("C2", "a = (b-c)/(c-1)", std::abs(a - (b - c) / (c - 1.0)), tol),
                    condition("C3", "a = 1+c-c/b", std::abs(a - (1.0 + c - c / b)), tol),
                    condition("C4", "a = b(c-1)/(b-1)", std::abs(a - b * (c - 1.0) / (b - 1.0)), tol)};
    const int k = r.conditions[0].holds + r.conditions[1].holds + r.conditions[2].holds;
    if (!r.conditions[3].holds) {
        const Group g = k == 0 ? Group::Z2 : (k == 1 ? Group::D2 : Group::D6);
        r.real_group = r.complex_group = g;
    } else if (k == 0) {
        r.real_group = Group::Z2;
        r.complex_group = Group::D2;
    } else if (k == 1) {
        r.real_group = Group::D2;
        r.complex_group = Group::D4;
    } else {
        r.real_group = Group::D6;
        r.complex_group = Group::G24;
    }
    return r;
}

std::array<double, 3> normalize_branch_points(std::vector<double> roots) {
    if (roots.size() != 5) throw ParameterError("normalize_branch_points: expects five real roots");
    std::sort(roots.begin(), roots.end());
    for (std::size_t i = 1; i < roots.size(); ++i) {
        if (!(roots[i] - roots[i - 1] > 1e-12)) throw ParameterError("normalize_branch_points: roots are not distinct");
    }
    const double lo = roots.front(), span = roots.back() - roots.front();
    return {(roots[1] - lo) / span, (roots[2] - lo) / span, (roots[3] - lo) / span};
}

std::vector<ConditionResidual> w9_involution_conditions(double s, double tol) {
    const W9Param p = W9Param::from_s(s);
    const double a = p.a, b = p.b, c = p.c;
    return {condition("A", "a = b - 1 + b/c", std::abs(a - (b - 1.0 + b / c)), tol),
            condition("B", "a = bc/(1+b+c)", std::abs(a - b * c / (1.0 + b + c)), tol),
            condition("C", "a = (c-b)/(1+b)", std::abs(a - (c - b) / (1.0 + b)), tol),
            condition("D", "a = b/(1-b+c)", std::abs(a - b / (1.0 - b + c)), tol)};
}

double involution_quartic(double x) {
    return (((3.0 * x + 8.0 * kSqrt3) * x + 18.0) * x + 16.0 * kSqrt3) * x - 9.0;
}

double theta_membership_check(const RiemannMatrix& zhat, const TruncationPolicy& policy, double shape_tol) {
    cover_shape_extract(zhat, shape_tol);
    return std::abs(theta_null(ThetaCharacteristic::parse("111;101"), zhat, policy).value);
}

RiemannMatrix silhol_order4_period(double lambda) {
    if (!(lambda > 0.5)) throw ParameterError("silhol_order4_period: lambda must exceed 1/2");
    const double den = 2.0 * lambda - 1.0;
    const double p = (2.0 * lambda * lambda - 2.0 * lambda + 1.0) / den;
    const double q = -2.0 * lambda * (lambda - 1.0) / den;
    const cplx i(0.0, 1.0);
    return RiemannMatrix(ComplexMatrix{{i * p, i * q}, {i * q, i * p}});
}

RiemannMatrix genus2_period_matrix(double s, const QuadConfig& quad) {
    const HyperellipticCurve curve = curve_Qs(s);
    return period_matrix(curve, build_cycles(curve, Layout::real_mcurve_genus2), quad);
}

RiemannMatrix cover_period_matrix(double s, const QuadConfig& quad) {
    const HyperellipticCurve curve = double_cover(curve_Qs(s));
    return period_matrix(curve, build_cycles(curve, Layout::cover_genus3), quad);
}

}  // namespace w9
