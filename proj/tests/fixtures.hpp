#pragma once

#include "w9/siegel.hpp"

#include <cmath>
#include <complex>

namespace fixture {

using w9::cplx;
inline constexpr cplx I{0.0, 1.0};

inline w9::ComplexMatrix zhat1() {
    return {{4.0 / 3 * I, 2.0 / 3 * I, 1.0 / 3 * I},
            {2.0 / 3 * I, 0.5 + 5.0 / 6 * I, 2.0 / 3 * I},
            {1.0 / 3 * I, 2.0 / 3 * I, 4.0 / 3 * I}};
}

inline w9::ComplexMatrix z1() {
    return {{1.0 + 5.0 / 3 * I, 4.0 / 3 * I}, {4.0 / 3 * I, 5.0 / 3 * I}};
}

inline w9::IntMatrix n_matrix() { return {{1, 0, 0, 0}, {0, 1, 0, 0}, {1, 0, 1, 0}, {0, 0, 0, 1}}; }

inline w9::IntMatrix m_prime_basis() {
    return {{0, 0, 1, 0, 0, 0}, {-1, 1, -1, 0, 0, 0}, {1, 0, 0, 0, 0, 0},
            {1, 1, 1, 0, 1, 1}, {1, 0, 1, 0, 1, 0},   {1, 1, 1, 1, 1, 0}};
}

inline w9::IntMatrix m2() {
    return {{0, 0, -1, 0, 0, 0}, {0, -1, 0, 0, 0, 0}, {-1, 0, 0, 0, 0, 0},
            {0, 0, 0, 0, 0, -1}, {0, 0, 0, 0, -1, 0}, {0, 0, 0, -1, 0, 0}};
}

inline w9::IntMatrix m3() {
    return {{1, -2, 1, 0, 1, 0}, {1, -1, 0, 0, 0, -1}, {1, 0, 0, 0, 0, 0},
            {0, 0, 0, 0, 0, 1},  {0, 0, 0, 0, -1, -2}, {0, 0, 0, 1, 1, 1}};
}

inline w9::IntMatrix m4() {
    return {{0, 0, 0, 1, 0, 0}, {0, 1, 0, 0, -1, 0}, {0, 0, 0, 0, 0, 1},
            {-1, 0, 0, 0, 0, 0}, {0, 2, 0, 0, -1, 0}, {0, 0, -1, 0, 0, 0}};
}

inline const double kSqrt3 = std::sqrt(3.0);
inline const double kS1 = 2.0 - kSqrt3;

}  // namespace fixture
