#pragma once

#include <cmath>
#include <complex>

namespace w9::detail {

// Neumaier's variant of Kahan summation, one accumulator per component.
struct NeumaierSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) noexcept {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            carry += (sum - t) + x;
        } else {
            carry += (x - t) + sum;
        }
        sum = t;
    }
    double value() const noexcept { return sum + carry; }
};

struct ComplexNeumaierSum {
    NeumaierSum re, im;

    void add(std::complex<double> x) noexcept {
        re.add(x.real());
        im.add(x.imag());
    }
    std::complex<double> value() const noexcept { return {re.value(), im.value()}; }
};

}  // namespace w9::detail
