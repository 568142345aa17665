#include "w9/errors.hpp"
#include "w9/theta.hpp"

#include <array>
#include <numbers>

namespace w9::kernel {

cplx lattice_sum_serial(const ComplexMatrix& z, std::span<const int> shift, std::span<const cplx> w,
                        int radius) {
    const std::size_t g = z.rows();
    if (!z.square() || g == 0 || g > 3 || shift.size() != g || w.size() != g) {
        throw DimensionError("lattice_sum_serial: dimension mismatch");
    }
    if (radius < 0) throw ParameterError("lattice_sum_serial: negative radius");
    std::array<double, 3> c{};
    std::array<int, 3> hi{};
    for (std::size_t i = 0; i < g; ++i) {
        const int b = ((shift[i] % 2) + 2) % 2;
        c[i] = 0.5 * b;
        hi[i] = radius - b;
    }
    const cplx ipi(0.0, std::numbers::pi);
    cplx total = 0.0;
    std::array<int, 3> k{};
    auto visit = [&](auto&& self, std::size_t dim) -> void {
        if (dim == g) {
            std::array<double, 3> v{};
            for (std::size_t i = 0; i < g; ++i) v[i] = k[i] + c[i];
            cplx q = 0.0;
            for (std::size_t i = 0; i < g; ++i)
                for (std::size_t j = 0; j < g; ++j) q += v[i] * z(i, j) * v[j];
            for (std::size_t i = 0; i < g; ++i) q += 2.0 * v[i] * w[i];
            total += std::exp(ipi * q);
            return;
        }
        for (k[dim] = -radius; k[dim] <= hi[dim]; ++k[dim]) self(self, dim + 1);
    };
    visit(visit, 0);
    return total;
}

}  // namespace w9::kernel
