#pragma once

#include "w9/periods.hpp"
#include "w9/siegel.hpp"
#include "w9/theta.hpp"

#include <array>
#include <string>
#include <vector>

namespace w9 {

/// A point of the Riemann sphere.
struct ExtendedComplex {
    cplx value{};
    bool infinite = false;

    static ExtendedComplex infinity() { return {cplx{}, true}; }
    ExtendedComplex() = default;
    ExtendedComplex(cplx v, bool inf = false) : value(v), infinite(inf) {}
    ExtendedComplex(double v) : value(v) {}
};

/// x -> (x + sqrt3) / (-sqrt3 x + 1), of order 3, fixing +-i. The pole
/// 1/sqrt3 maps to infinity and infinity to -1/sqrt3.
ExtendedComplex f3(const ExtendedComplex& x);
/// Real restriction; throws PoleError at 1/sqrt3.
double f3_real(double x);

/// -81 (s^2+1)^3 / ((3s+sqrt3)^2 (3s-sqrt3)^2). Throws PoleError at +-sqrt3/3.
double g_of_s(double s);

/// -9u / (u+9), an involution. Throws PoleError at u = -9.
double u_dual(double u);

/// Roots of x^3 + b x^2 + c x + d by Cardano with Newton polish; real
/// inputs with positive discriminant use the trigonometric form and
/// return exactly real roots.
std::array<cplx, 3> cubic_roots(cplx b, cplx c, cplx d);
/// 18bcd - 4b^3 d + b^2 c^2 - 4c^3 - 27d^2.
cplx cubic_discriminant(cplx b, cplx c, cplx d);

/// y^2 = x (x-1) (x^3 + u x^2 - 8/3 u x + 16/9 u). Throws ParameterError for
/// u in {-9, 0}, DegeneracyError when the cubic has a repeated root.
HyperellipticCurve curve_Pu(cplx u);

/// The W9 parameter s in (0, sqrt3/3) with its derived quantities.
struct W9Param {
    double s;
    double a;  ///< s^2
    double b;  ///< f3(f3(s))^2
    double c;  ///< f3(s)^2
    double u;  ///< g(s)

    /// Throws ParameterError outside (0, sqrt3/3).
    static W9Param from_s(double s);
};

/// y^2 = x (x+1) (x - a(s)) (x - b(s)) (x - c(s)).
HyperellipticCurve curve_Qs(double s);

/// Genus-3 unramified double cover of y^2 = x(x+1)(x-a^2)(x-b^2)(x-c^2):
/// branch points +-i, +-a, +-b, +-c. Throws LayoutError on other shapes.
HyperellipticCurve double_cover(const HyperellipticCurve& genus2);

/// Zhat = [[z1, z1/2, z13], [z1/2, 1/2 + 3/4 z1 - 1/2 z13, z1/2], [z13, z1/2, z1]].
struct CoverShape {
    cplx z1;
    cplx z13;
    /// max entrywise deviation of the input from the pattern.
    double residual = 0.0;

    ComplexMatrix matrix() const;
};

/// Throws ShapeMismatchError when the pattern residual exceeds tol.
CoverShape cover_shape_extract(const RiemannMatrix& zhat, double tol);

/// Z = [[2 z2, 2 z12], [2 z12, z1 + z13]] read from a shape-conforming Zhat
/// (z2 the centre entry, z12 the mean of the (1,2) and (2,3) entries).
RiemannMatrix base_from_cover(const RiemannMatrix& zhat, double tol = 1e-6);

enum class Group { Z2, D2, D4, D6, G24 };
const char* to_string(Group g);

struct ConditionResidual {
    std::string label;
    std::string formula;
    double residual;
    bool holds;
};

struct AutomorphismReport {
    Group real_group;
    Group complex_group;
    std::vector<ConditionResidual> conditions;
};

/// Real and complex automorphism groups of y^2 = x(x-a)(x-b)(x-c)(x-1),
/// 0 < a < b < c < 1, from absolute residuals of
///   C1: a = bc, C2: a = (b-c)/(c-1), C3: a = 1 + c - c/b, C4: a = b(c-1)/(b-1).
/// Throws ParameterError on bad ordering or tol <= 0.
AutomorphismReport cirre_classify(double a, double b, double c, double tol = 1e-9);

/// Affine map sending the smallest root to 0 and the largest to 1; returns
/// the images of the middle three. Throws ParameterError unless there are
/// five distinct reals.
std::array<double, 3> normalize_branch_points(std::vector<double> roots);

/// Residuals at (a, b, c) = (s^2, f3(f3(s))^2, f3(s)^2) of
///   A: a = b - 1 + b/c, B: a = bc/(1+b+c), C: a = (c-b)/(1+b), D: a = b/(1-b+c).
std::vector<ConditionResidual> w9_involution_conditions(double s, double tol = 1e-9);

/// 3x^4 + 8 sqrt3 x^3 + 18 x^2 + 16 sqrt3 x - 9.
double involution_quartic(double x);

/// |theta[111;101](Zhat)| after checking the cover shape at shape_tol.
double theta_membership_check(const RiemannMatrix& zhat, const TruncationPolicy& policy = {},
                              double shape_tol = 1e-6);

/// i [[p, q], [q, p]] with p = (2l^2 - 2l + 1)/(2l - 1), q = -2l(l-1)/(2l-1).
/// Throws ParameterError for lambda <= 1/2.
RiemannMatrix silhol_order4_period(double lambda);

/// Period matrices of the family by quadrature with the calibrated bases.
RiemannMatrix genus2_period_matrix(double s, const QuadConfig& quad = {});
RiemannMatrix cover_period_matrix(double s, const QuadConfig& quad = {});

}  // namespace w9
