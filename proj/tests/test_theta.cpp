#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "w9/errors.hpp"
#include "w9/theta.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace w9;
using fixture::I;

namespace {

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

}  // namespace

TEST_CASE("characteristics") {
    const auto ch = ThetaCharacteristic::parse("111;101");
    CHECK(ch.genus() == 3);
    CHECK(ch.str() == "111;101");
    CHECK(parity(ch) == Parity::even);
    CHECK(parity(ThetaCharacteristic::zero(3)) == Parity::even);
    CHECK(parity(ThetaCharacteristic::parse("1;1")) == Parity::odd);
    CHECK_THROWS_AS(ThetaCharacteristic::parse("112;101"), ParameterError);
    CHECK_THROWS_AS(ThetaCharacteristic::parse("11;101"), ParameterError);
    CHECK_THROWS_AS(ThetaCharacteristic::parse("111"), ParameterError);
    int even = 0, odd = 0;
    for (const auto& c : all_characteristics(3)) (parity(c) == Parity::even ? even : odd)++;
    CHECK(even == 36);
    CHECK(odd == 28);
}

TEST_CASE("riemann_theta closed forms") {
    // theta(0, i) = pi^{1/4} / Gamma(3/4).
    const std::vector<cplx> z1{0.0};
    const auto v = riemann_theta(z1, RiemannMatrix(ComplexMatrix{{I}}));
    const double exact = std::pow(std::numbers::pi, 0.25) / std::tgamma(0.75);
    CHECK(std::abs(v.value - exact) < 1e-14);
    CHECK(exact == doctest::Approx(1.0864348112));
    CHECK(v.tail_bound < 1e-14);

    const std::vector<cplx> z3(3, 0.0);
    const auto w = riemann_theta(z3, RiemannMatrix(10.0 * I * ComplexMatrix::identity(3)));
    const double e = std::exp(-10.0 * std::numbers::pi);
    CHECK(std::abs(w.value - (1.0 + 6.0 * e + 12.0 * e * e)) < 1e-15);
}

TEST_CASE("parallel kernel matches the serial reference") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t g = 1 + trial % 3;
        const ComplexMatrix z = oracle::random_siegel(rng, g, 0.6);
        const auto w = random_z(rng, g, 0.5);
        std::vector<int> shift(g);
        for (std::size_t i = 0; i < g; ++i) shift[i] = (trial >> i) & 1;
        for (int r : {0, 1, 3, 7}) {
            const cplx a = kernel::lattice_sum(z, shift, w, r);
            const cplx b = kernel::lattice_sum_serial(z, shift, w, r);
            CHECK(std::abs(a - b) < 1e-13 * std::max(1.0, std::abs(b)));
        }
    }
}

TEST_CASE("theta_char against brute-force summation") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 24; ++trial) {
        const std::size_t g = 1 + trial % 3;
        const ComplexMatrix z = oracle::random_siegel(rng, g, 0.7);
        const auto ch = random_char(rng, g);
        const auto arg = random_z(rng, g, 0.4);
        const cplx ref = oracle::theta_brute(ch.m(), ch.n(), arg, z, g == 3 ? 9 : 14);
        const cplx got = theta_char(ch, arg, RiemannMatrix(z)).value;
        CHECK(std::abs(got - ref) < 1e-12 * std::max(1.0, std::abs(ref)));
    }
}

TEST_CASE("shifted theta identity") {
    // theta[m;n](z) = exp(pi i m~'Z m~ + 2 pi i m~'(z + n~)) theta(z + Z m~ + n~), m~ = m/2, n~ = n/2.
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t g = 1 + trial % 3;
        const RiemannMatrix zm(oracle::random_siegel(rng, g, 0.6));
        const auto ch = random_char(rng, g);
        const auto z = random_z(rng, g, 0.5);
        std::vector<cplx> mh(g), shifted(g);
        for (std::size_t i = 0; i < g; ++i) mh[i] = 0.5 * ch.m()[i];
        const auto zmh = zm.matrix() * std::span<const cplx>(mh);
        cplx ph = 0.0;
        for (std::size_t i = 0; i < g; ++i) {
            shifted[i] = z[i] + zmh[i] + 0.5 * ch.n()[i];
            ph += mh[i] * zmh[i] + 2.0 * mh[i] * (z[i] + 0.5 * ch.n()[i]);
        }
        const cplx rhs = std::exp(cplx(0.0, std::numbers::pi) * ph) * riemann_theta(shifted, zm).value;
        CHECK(std::abs(theta_char(ch, z, zm).value - rhs) < 1e-11);
    }
}

TEST_CASE("theta-null fixtures") {
    const RiemannMatrix z(fixture::zhat1());
    CHECK(std::abs(theta_null(ThetaCharacteristic::parse("111;101"), z).value) < 1e-10);
    CHECK(std::abs(theta_null(ThetaCharacteristic::zero(3), z).value) > 0.5);
    const std::vector<cplx> zero1{0.0};
    for (cplx t : {I, 0.3 + 0.8 * I, -1.2 + 2.0 * I}) {
        CHECK(std::abs(theta_char(ThetaCharacteristic::parse("1;1"), zero1, RiemannMatrix(ComplexMatrix{{t}})).value) < 1e-15);
    }
    for (const auto& ch : all_characteristics(3)) {
        if (parity(ch) == Parity::odd) CHECK(std::abs(theta_null(ch, z).value) < 1e-12);
    }
}

TEST_CASE("quasi-periodicity, mod-2 reduction and parity") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> sh(-2, 2);
    const cplx ipi(0.0, std::numbers::pi);
    for (int trial = 0; trial < 40; ++trial) {
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
        std::vector<cplx> moved(g);
        cplx ex = 0.0;
        for (std::size_t i = 0; i < g; ++i) {
            moved[i] = z[i] + zp[i] + static_cast<double>(q[i]);
            ex += ipi * (pc[i] * zp[i] + 2.0 * pc[i] * (z[i] + 0.5 * ch.n()[i]) - double(ch.m()[i] * q[i]));
        }
        CHECK(std::abs(base - std::exp(ex) * theta_char(ch, moved, zm).value) < 1e-9);

        std::vector<int> m2(g), n2(g);
        int mq = 0;
        for (std::size_t i = 0; i < g; ++i) {
            m2[i] = ch.m()[i] + 2 * p[i];
            n2[i] = ch.n()[i] + 2 * q[i];
            mq += ch.m()[i] * q[i];
        }
        const cplx reduced = theta_char(m2, n2, z, zm).value;
        CHECK(std::abs(reduced - std::exp(ipi * double(mq)) * base) < 1e-10);

        std::vector<cplx> neg(g);
        for (std::size_t i = 0; i < g; ++i) neg[i] = -z[i];
        const double sign = parity(ch) == Parity::even ? 1.0 : -1.0;
        CHECK(std::abs(theta_char(ch, neg, zm).value - sign * base) < 1e-10);
    }
}

TEST_CASE("truncation") {
    std::mt19937_64 rng(21);
    const TruncationPolicy policy;
    for (int trial = 0; trial < 12; ++trial) {
        const std::size_t g = 1 + trial % 3;
        const ComplexMatrix z = oracle::random_siegel(rng, g, 0.4);
        const RiemannMatrix zm(z);
        const std::vector<cplx> w(g, 0.0);
        const std::vector<int> shift(g, trial % 2);
        const auto v = lattice_theta(zm, shift, w, policy);
        CHECK(v.tail_bound <= policy.tail_tol);
        const cplx wider = kernel::lattice_sum(z, shift, w, v.radius + 4);
        CHECK(std::abs(wider - v.value) < 10.0 * policy.tail_tol);
    }
    // Bound is monotone and the radius formula is a fixed point from the policy.
    CHECK(truncation_tail_bound(1.0, 3, 0.0, 6) < truncation_tail_bound(1.0, 3, 0.0, 5));
    CHECK(std::isinf(truncation_tail_bound(0.5, 2, 10.0, 3)));
    CHECK_THROWS_AS(riemann_theta(std::vector<cplx>{0.0}, RiemannMatrix(ComplexMatrix{{1e-4 * I}})), TruncationError);
}

TEST_CASE("char_transform") {
    const auto target = ThetaCharacteristic::parse("111;101");
    for (std::size_t g = 1; g <= 3; ++g) {
        for (const auto& ch : all_characteristics(g)) CHECK(char_transform(SymplecticMatrix::identity(g), ch) == ch);
    }
    const SymplecticMatrix m2(fixture::m2()), m3(fixture::m3()), m4(fixture::m4());
    CHECK(char_transform(m2, target) == target);
    CHECK(char_transform(m3, target) == target);
    CHECK(char_transform(m4, target) == target);
    for (const auto& ch : all_characteristics(3)) {
        if (char_transform(m4, ch) == ch) CHECK(ch.m()[1] == 1);
    }

    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t g = 1 + trial % 3;
        const SymplecticMatrix a(oracle::random_symplectic(rng, g, 3));
        const SymplecticMatrix b(oracle::random_symplectic(rng, g, 3));
        const auto ch = random_char(rng, g);
        // Right action: (AB).ch = B.(A.ch).
        CHECK(char_transform(a * b, ch) == char_transform(b, char_transform(a, ch)));
        CHECK(char_transform(a.inverse(), char_transform(a, ch)) == ch);
        CHECK(parity(char_transform(a, ch)) == parity(ch));
    }
}

TEST_CASE("modular_magnitude_check") {
    std::mt19937_64 rng(29);
    const auto z3 = random_z(rng, 3, 0.3);
    const RiemannMatrix zhat(fixture::zhat1());
    CHECK(modular_magnitude_check(SymplecticMatrix::identity(3), ThetaCharacteristic::parse("010;110"), z3, zhat) < 1e-14);
    CHECK(modular_magnitude_check(SymplecticMatrix::J(1), ThetaCharacteristic::zero(1), std::vector<cplx>{0.0},
                                  RiemannMatrix(ComplexMatrix{{2.0 * I}})) < 1e-10);
    CHECK(modular_magnitude_check(SymplecticMatrix(fixture::m3()), ThetaCharacteristic::parse("111;101"),
                                  std::vector<cplx>(3, 0.0), zhat) < 1e-8);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t g = 1 + trial % 3;
        const RiemannMatrix z(oracle::random_siegel(rng, g, 0.8, 0.3));
        const SymplecticMatrix m(oracle::random_symplectic(rng, g, 2));
        CHECK(modular_magnitude_check(m, random_char(rng, g), random_z(rng, g, 0.3), z) < 1e-8);
    }
}
