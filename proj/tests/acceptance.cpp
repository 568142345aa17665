// Acceptance run: one line per criterion, nonzero exit if any fails.

#include "fixtures.hpp"
#include "oracles.hpp"
#include "w9/errors.hpp"
#include "w9/geodesic.hpp"
#include "w9/periods.hpp"
#include "w9/theta.hpp"
#include "w9/w9.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

using namespace w9;
using fixture::I;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    // Records a named measurement against its tolerance.
    void below(const char* name, double value, double tol) {
        const bool ok = value < tol;
        pass = pass && ok;
        detail << ' ' << name << '=' << value << (ok ? "<" : ">=") << tol;
    }
    void require(const char* name, bool ok) {
        pass = pass && ok;
        detail << ' ' << name << '=' << (ok ? "yes" : "no");
    }
};

struct Criterion {
    int id;
    const char* title;
    double budget_s;
    std::function<void(Outcome&)> body;
};

std::vector<cplx> random_z(std::mt19937_64& rng, std::size_t g, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<cplx> z(g);
    for (auto& x : z) x = cplx(u(rng), u(rng));
    return z;
}

ThetaCharacteristic random_char(std::mt19937_64& rng, std::size_t g) {
    std::uniform_int_distribution<int> bit(0, 1);
    std::vector<int> m(g), n(g);
    for (std::size_t i = 0; i < g; ++i) {
        m[i] = bit(rng);
        n[i] = bit(rng);
    }
    return {m, n};
}

void theta_null_fixture(Outcome& o) {
    const RiemannMatrix z(fixture::zhat1());
    TruncationPolicy policy;
    policy.tail_tol = 1e-14;
    o.below("|theta[111;101]|", std::abs(theta_null(ThetaCharacteristic::parse("111;101"), z, policy).value), 1e-10);
    const double even = std::abs(theta_null(ThetaCharacteristic::zero(3), z, policy).value);
    o.require("|theta[000;000]|>0.5", even > 0.5);
    o.detail << " (" << even << ')';
}

void geodesic_root(Outcome& o) {
    const GeodesicPoint p = solve_y(1.0);
    o.below("|y-4/3|", std::abs(p.y - 4.0 / 3), 1e-8);
    o.below("|Z_t-Z1|", max_abs_diff(p.z.matrix(), fixture::z1()), 1e-8);
}

void quadrature_fixture(Outcome& o) {
    o.below("|Zhat-Zhat1|", max_abs_diff(cover_period_matrix(fixture::kS1).matrix(), fixture::zhat1()), 1e-6);
    o.below("|Z-Z1|", max_abs_diff(genus2_period_matrix(fixture::kS1).matrix(), fixture::z1()), 1e-6);
}

void sweep(Outcome& o) {
    double worst_series = 0.0, worst_base = 0.0;
    for (int k = 0; k < 10; ++k) {
        // Cell midpoints, strictly inside (0.05, 0.5).
        const double s = 0.05 + 0.45 * (k + 0.5) / 10.0;
        const RiemannMatrix zhat = cover_period_matrix(s);
        const TyPair ty = extract_ty_from_cover(zhat, 1e-6);
        worst_series = std::max(worst_series, std::abs(main_series(ty.t, ty.y).value));
        const double base = max_abs_diff(base_from_cover(zhat, 1e-6).matrix(), genus2_period_matrix(s).matrix());
        worst_base = std::max(worst_base, base);
    }
    o.below("max|main_series|", worst_series, 1e-6);
    o.below("max|base-direct|", worst_base, 1e-6);
}

void theta_properties(Outcome& o) {
    std::mt19937_64 rng(20261018);
    std::uniform_int_distribution<int> sh(-2, 2);
    const cplx ipi(0.0, std::numbers::pi);
    double quasi = 0.0, mod2 = 0.0, par = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t g = 1 + trial % 3;
        const RiemannMatrix zm(oracle::random_siegel(rng, g, 0.5 + 0.5 * (trial % 2)));
        const auto ch = random_char(rng, g);
        const auto z = random_z(rng, g, 1.0);
        std::vector<int> p(g), q(g);
        for (std::size_t i = 0; i < g; ++i) {
            p[i] = sh(rng);
            q[i] = sh(rng);
        }
        const cplx base = theta_char(ch, z, zm).value;

        std::vector<cplx> pc(p.begin(), p.end());
        const auto zp = zm.matrix() * std::span<const cplx>(pc);
        std::vector<cplx> moved(g), neg(g);
        std::vector<int> m2(g), n2(g);
        cplx ex = 0.0;
        int mq = 0;
        for (std::size_t i = 0; i < g; ++i) {
            moved[i] = z[i] + zp[i] + static_cast<double>(q[i]);
            ex += ipi * (pc[i] * zp[i] + 2.0 * pc[i] * (z[i] + 0.5 * ch.n()[i]) - double(ch.m()[i] * q[i]));
            m2[i] = ch.m()[i] + 2 * p[i];
            n2[i] = ch.n()[i] + 2 * q[i];
            mq += ch.m()[i] * q[i];
            neg[i] = -z[i];
        }
        quasi = std::max(quasi, std::abs(base - std::exp(ex) * theta_char(ch, moved, zm).value));
        mod2 = std::max(mod2, std::abs(theta_char(m2, n2, z, zm).value - std::exp(ipi * double(mq)) * base));
        const double sign = parity(ch) == Parity::even ? 1.0 : -1.0;
        par = std::max(par, std::abs(theta_char(ch, neg, zm).value - sign * base));
    }
    o.below("quasi", quasi, 1e-9);
    o.below("mod2", mod2, 1e-9);
    o.below("parity", par, 1e-9);

    int even = 0, odd = 0;
    double odd_null = 0.0;
    const std::vector<RiemannMatrix> samples{RiemannMatrix(fixture::zhat1()), RiemannMatrix(oracle::random_siegel(rng, 3, 0.7)),
                                             RiemannMatrix(oracle::random_siegel(rng, 3, 1.0))};
    for (const auto& ch : all_characteristics(3)) {
        if (parity(ch) == Parity::even) {
            ++even;
            continue;
        }
        ++odd;
        for (const auto& zm : samples) odd_null = std::max(odd_null, std::abs(theta_null(ch, zm).value));
    }
    o.below("max|odd theta-null|", odd_null, 1e-11);
    o.require("census 36/28", even == 36 && odd == 28);
}

void symplectic_suite(Outcome& o) {
    o.require("N", symplectic_check(fixture::n_matrix()));
    o.require("M", symplectic_check(fixture::m_prime_basis()));
    o.require("M2", symplectic_check(fixture::m2()));
    o.require("M3", symplectic_check(fixture::m3()));
    o.require("M4", symplectic_check(fixture::m4()));

    const auto target = ThetaCharacteristic::parse("111;101");
    const SymplecticMatrix m2(fixture::m2()), m3(fixture::m3()), m4(fixture::m4());
    o.require("M2 fixes", char_transform(m2, target) == target);
    o.require("M3 fixes", char_transform(m3, target) == target);
    bool forced = char_transform(m4, target) == target;
    for (const auto& ch : all_characteristics(3))
        if (char_transform(m4, ch) == ch) forced = forced && ch.m()[1] == 1;
    o.require("M4 forces m2=1", forced);

    std::mt19937_64 rng(31);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t g = 1 + trial % 3;
        const RiemannMatrix z(oracle::random_siegel(rng, g, 0.8, 0.3));
        const SymplecticMatrix m(oracle::random_symplectic(rng, g, 5));
        worst = std::max(worst, modular_magnitude_check(m, random_char(rng, g), random_z(rng, g, 0.3), z));
    }
    o.below("modular", worst, 1e-8);
}

std::string held(const std::vector<ConditionResidual>& rows) {
    std::string out;
    for (const auto& r : rows)
        if (r.holds) out += r.label;
    return out;
}

void automorphisms(Outcome& o) {
    const auto rep = cirre_classify(1.0 / 3, 0.5, 2.0 / 3);
    o.require("(D6,G24)", rep.real_group == Group::D6 && rep.complex_group == Group::G24);
    o.require("{A,D} at s1", held(w9_involution_conditions(fixture::kS1)) == "AD");
    o.require("none at 0.1", held(w9_involution_conditions(0.1)).empty());
    o.require("none at 0.45", held(w9_involution_conditions(0.45)).empty());
    o.below("|quartic(s1)|", std::abs(involution_quartic(fixture::kS1)), 1e-9);
}

void elliptic_oracle(Outcome& o) {
    const HyperellipticCurve curve({-1.0, 0.0, 1.0});
    const double k = std::sqrt(2.0) * oracle::ellipk(1.0 / std::sqrt(2.0));
    o.below("|int[-1,0]-AGM|", std::abs(integrate_arc(curve, ArcPath{{-1.0, 0.0}}, 1, 1) - k), 1e-10);
    o.below("||int[0,1]|-AGM|", std::abs(std::abs(integrate_arc(curve, ArcPath{{0.0, 1.0}}, 1, 1)) - k), 1e-10);
    const RiemannMatrix tau = period_matrix(curve, build_cycles(curve, Layout::elliptic));
    o.below("|tau-i|", std::abs(tau.matrix()(0, 0) - I), 1e-9);
}

void main_series_reality(Outcome& o) {
    double worst = 0.0;
    for (double t : {0.5, 1.0, 2.0, 3.0, 5.0}) {
        for (double d : {0.05, 0.2, 0.5, 1.0, 2.0}) {
            const double y = 2.0 * t / 3.0 + d * t;
            worst = std::max(worst, std::abs(main_series(t, y).value.imag()));
        }
    }
    o.below("max|Im|", worst, 1e-12);
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "theta-null fixture", 1.0, theta_null_fixture},
        {2, "geodesic root at t=1", 1.0, geodesic_root},
        {3, "quadrature fixture at s=2-sqrt(3)", 10.0, quadrature_fixture},
        {4, "cross-parameterization sweep", 60.0, sweep},
        {5, "theta property suite", 20.0, theta_properties},
        {6, "symplectic suite", 10.0, symplectic_suite},
        {7, "automorphism suite", 1.0, automorphisms},
        {8, "elliptic oracle", 1.0, elliptic_oracle},
        {9, "reality of the main series", 5.0, main_series_reality},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.body(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " exception: " << e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs < c.budget_s;
        const bool ok = o.pass && in_time;
        failed += ok ? 0 : 1;
        std::printf("%s %d %s:%s time=%.3fs%s%.0fs\n", ok ? "PASS" : "FAIL", c.id, c.title, o.detail.str().c_str(), secs,
                    in_time ? "<" : ">=", c.budget_s);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
