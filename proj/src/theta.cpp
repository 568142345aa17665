#include "w9/theta.hpp"

#include "compensated.hpp"
#include "w9/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

namespace w9 {

namespace {

constexpr double kPi = std::numbers::pi;

void check_bits(const std::vector<int>& v, const char* name) {
    for (int x : v) {
        if (x != 0 && x != 1) {
            throw ParameterError(std::string("ThetaCharacteristic: ") + name + " entries must be 0 or 1");
        }
    }
}

// ceil(|k + b/2|) for a coordinate with shift bit b.
int coord_shell(int k, int b) noexcept { return (std::abs(2 * k + b) + 1) / 2; }

void check_dims(const ComplexMatrix& z, std::span<const int> shift, std::span<const cplx> w) {
    if (!z.square() || z.rows() == 0 || z.rows() > 3) {
        throw DimensionError("lattice sum: period matrix must be g x g with 1 <= g <= 3");
    }
    if (shift.size() != z.rows() || w.size() != z.rows()) {
        throw DimensionError("lattice sum: vector length does not match genus");
    }
}

double imag_norm(std::span<const cplx> w) {
    double s = 0.0;
    for (cplx x : w) s += x.imag() * x.imag();
    return std::sqrt(s);
}

}  // namespace

ThetaCharacteristic::ThetaCharacteristic(std::vector<int> m, std::vector<int> n)
    : m_(std::move(m)), n_(std::move(n)) {
    if (m_.size() != n_.size()) throw DimensionError("ThetaCharacteristic: m and n differ in length");
    if (m_.empty() || m_.size() > 3) throw DimensionError("ThetaCharacteristic: genus must be 1..3");
    check_bits(m_, "m");
    check_bits(n_, "n");
}

ThetaCharacteristic ThetaCharacteristic::parse(std::string_view text) {
    const auto semi = text.find(';');
    if (semi == std::string_view::npos) {
        throw ParameterError("characteristic \"" + std::string(text) + "\": expected m;n");
    }
    auto digits = [&](std::string_view part, std::size_t offset) {
        std::vector<int> out;
        for (std::size_t i = 0; i < part.size(); ++i) {
            const char c = part[i];
            if (c == ' ') continue;
            if (c != '0' && c != '1') {
                std::ostringstream msg;
                msg << "characteristic \"" << text << "\": unexpected '" << c << "' at position "
                    << offset + i;
                throw ParameterError(msg.str());
            }
            out.push_back(c - '0');
        }
        return out;
    };
    auto m = digits(text.substr(0, semi), 0);
    auto n = digits(text.substr(semi + 1), semi + 1);
    if (m.size() != n.size() || m.empty()) {
        throw ParameterError("characteristic \"" + std::string(text) + "\": m and n must have equal nonzero length");
    }
    return ThetaCharacteristic(std::move(m), std::move(n));
}

ThetaCharacteristic ThetaCharacteristic::zero(std::size_t g) {
    return ThetaCharacteristic(std::vector<int>(g, 0), std::vector<int>(g, 0));
}

std::string ThetaCharacteristic::str() const {
    std::string s;
    for (int x : m_) s += static_cast<char>('0' + x);
    s += ';';
    for (int x : n_) s += static_cast<char>('0' + x);
    return s;
}

Parity parity(const ThetaCharacteristic& ch) {
    int dot = 0;
    for (std::size_t i = 0; i < ch.genus(); ++i) dot += ch.m()[i] * ch.n()[i];
    return dot % 2 == 0 ? Parity::even : Parity::odd;
}

const char* to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }

std::vector<ThetaCharacteristic> all_characteristics(std::size_t g) {
    if (g == 0 || g > 3) throw DimensionError("all_characteristics: genus must be 1..3");
    std::vector<ThetaCharacteristic> out;
    const unsigned count = 1u << g;
    for (unsigned mb = 0; mb < count; ++mb) {
        for (unsigned nb = 0; nb < count; ++nb) {
            std::vector<int> m(g), n(g);
            for (std::size_t i = 0; i < g; ++i) {
                m[i] = (mb >> (g - 1 - i)) & 1u;
                n[i] = (nb >> (g - 1 - i)) & 1u;
            }
            out.emplace_back(std::move(m), std::move(n));
        }
    }
    return out;
}

double truncation_tail_bound(double lambda, std::size_t g, double rho, int radius) {
    if (!(lambda > 0.0)) return std::numeric_limits<double>::infinity();
    if (radius + 0.5 < rho / lambda) return std::numeric_limits<double>::infinity();
    double total = 0.0;
    for (int r = radius + 1; r < radius + 100000; ++r) {
        const double d = r - 0.5;
        const double log_term =
            static_cast<double>(g) * std::log(2.0 * r + 1.0) - kPi * lambda * d * d + 2.0 * kPi * rho * d;
        const double term = std::exp(log_term);
        total += term;
        // Past the peak the ratio of successive terms is below
        // exp(-pi lambda (2d+1) + 2 pi rho) * (1 + 2/(2r+1))^g and shrinks.
        if (term <= total * 1e-17 || term < std::numeric_limits<double>::min()) break;
    }
    return total;
}

int truncation_radius(double lambda, std::size_t g, double rho, const TruncationPolicy& policy) {
    if (!(policy.tail_tol > 0.0)) throw ParameterError("TruncationPolicy: tail_tol must be positive");
    if (!(lambda > 0.0)) throw DomainError("truncation radius: Im Z is not positive definite");
    const double gd = static_cast<double>(g);
    int r = 1;
    for (int it = 0; it < 64; ++it) {
        const double arg = (gd * std::log(2.0 * r + 1.0) - std::log(policy.tail_tol)) / (kPi * lambda);
        const double next = std::ceil(std::sqrt(std::max(arg, 0.0))) + 2.0;
        if (next > 4.0 * policy.max_radius + 8.0) {
            r = static_cast<int>(next);
            break;
        }
        if (static_cast<int>(next) == r) break;
        r = static_cast<int>(next);
    }
    r += static_cast<int>(std::ceil(rho / lambda));
    const double target = policy.tail_tol * std::exp(std::min(kPi * rho * rho / lambda, 700.0));
    while (r <= policy.max_radius && truncation_tail_bound(lambda, g, rho, r) > target) ++r;
    if (r > policy.max_radius) {
        std::ostringstream msg;
        msg << "theta truncation needs radius " << r << " > max_radius " << policy.max_radius
            << " (smallest eigenvalue of Im Z = " << lambda << ")";
        throw TruncationError(msg.str());
    }
    return r;
}

namespace kernel {

namespace {

struct SumContext {
    const ComplexMatrix& z;
    std::span<const int> bits;
    std::span<const cplx> w;
    std::size_t g;

    cplx term(const std::array<int, 3>& k) const {
        std::array<double, 3> v{};
        for (std::size_t i = 0; i < g; ++i) v[i] = k[i] + 0.5 * bits[i];
        cplx q = 0.0;
        for (std::size_t i = 0; i < g; ++i) {
            cplx row = 0.0;
            for (std::size_t j = 0; j < g; ++j) row += z(i, j) * v[j];
            q += v[i] * (row + 2.0 * w[i]);
        }
        return std::exp(cplx(0.0, kPi) * q);
    }
};

// Points of shell r whose first coordinate is k0, in lexicographic order of
// the remaining coordinates.
cplx shell_slice(const SumContext& ctx, int r, int k0) {
    detail::ComplexNeumaierSum acc;
    std::array<int, 3> k{k0, 0, 0};
    const bool on0 = coord_shell(k0, ctx.bits[0]) == r;
    if (ctx.g == 1) {
        if (on0) acc.add(ctx.term(k));
        return acc.value();
    }
    auto recurse = [&](auto&& self, std::size_t dim, bool on) -> void {
        const int b = ctx.bits[dim];
        const int lo = -r;
        const int hi = r - b;
        const bool last = dim + 1 == ctx.g;
        if (lo > hi) return;
        if (last && !on) {
            // Only the two boundary values can lift the point onto shell r.
            k[dim] = lo;
            acc.add(ctx.term(k));
            if (hi != lo) {
                k[dim] = hi;
                acc.add(ctx.term(k));
            }
            return;
        }
        for (int x = lo; x <= hi; ++x) {
            k[dim] = x;
            const bool here = on || coord_shell(x, b) == r;
            if (last) {
                acc.add(ctx.term(k));
            } else {
                self(self, dim + 1, here);
            }
        }
    };
    recurse(recurse, 1, on0);
    return acc.value();
}

}  // namespace

cplx lattice_sum(const ComplexMatrix& z, std::span<const int> shift, std::span<const cplx> w,
                 int radius) {
    check_dims(z, shift, w);
    if (radius < 0) throw ParameterError("lattice_sum: negative radius");
    const std::size_t g = z.rows();
    std::array<int, 3> bits{};
    for (std::size_t i = 0; i < g; ++i) bits[i] = ((shift[i] % 2) + 2) % 2;
    const SumContext ctx{z, std::span<const int>(bits.data(), g), w, g};

    std::vector<std::pair<int, int>> items;
    for (int r = 0; r <= radius; ++r) {
        for (int k0 = -r; k0 <= r - bits[0]; ++k0) items.emplace_back(r, k0);
    }
    std::vector<cplx> partial(items.size());
    const double volume = std::pow(2.0 * radius + 1.0, static_cast<double>(g));
    const long n_items = static_cast<long>(items.size());

#pragma omp parallel for schedule(dynamic) if (volume > 4096.0)
    for (long i = 0; i < n_items; ++i) {
        partial[i] = shell_slice(ctx, items[i].first, items[i].second);
    }

    detail::ComplexNeumaierSum total;
    for (cplx p : partial) total.add(p);
    return total.value();
}

}  // namespace kernel

ThetaValue lattice_theta(const RiemannMatrix& z, std::span<const int> shift, std::span<const cplx> w,
                         const TruncationPolicy& policy) {
    check_dims(z.matrix(), shift, w);
    const double lambda = min_eig_im(z);
    const double rho = imag_norm(w);
    ThetaValue out;
    out.radius = truncation_radius(lambda, z.genus(), rho, policy);
    out.tail_bound = truncation_tail_bound(lambda, z.genus(), rho, out.radius);
    out.value = kernel::lattice_sum(z.matrix(), shift, w, out.radius);
    return out;
}

ThetaValue riemann_theta(std::span<const cplx> z, const RiemannMatrix& zm, const TruncationPolicy& policy) {
    const std::vector<int> zero(zm.genus(), 0);
    return lattice_theta(zm, zero, z, policy);
}

ThetaValue theta_char(std::span<const int> m, std::span<const int> n, std::span<const cplx> z,
                      const RiemannMatrix& zm, const TruncationPolicy& policy) {
    const std::size_t g = zm.genus();
    if (m.size() != g || n.size() != g || z.size() != g) {
        throw DimensionError("theta_char: characteristic or argument length does not match genus");
    }
    // The summand depends on v = k + m/2 only, and {k + m/2} is the coset
    // Z^g + (m mod 2)/2, so no reduction phase appears for m. The phase of
    // an even shift in n stays inside w = z + n/2.
    std::vector<cplx> w(g);
    for (std::size_t i = 0; i < g; ++i) w[i] = z[i] + 0.5 * n[i];
    ThetaValue out = lattice_theta(zm, m, w, policy);
    return out;
}

ThetaValue theta_char(const ThetaCharacteristic& ch, std::span<const cplx> z, const RiemannMatrix& zm,
                      const TruncationPolicy& policy) {
    return theta_char(ch.m(), ch.n(), z, zm, policy);
}

ThetaValue theta_null(const ThetaCharacteristic& ch, const RiemannMatrix& zm, const TruncationPolicy& policy) {
    const std::vector<cplx> zero(zm.genus(), 0.0);
    return theta_char(ch, zero, zm, policy);
}

ThetaCharacteristic char_transform(const SymplecticMatrix& mat, const ThetaCharacteristic& ch) {
    const std::size_t g = mat.genus();
    if (ch.genus() != g) throw DimensionError("char_transform: genus mismatch");
    const IntMatrix a = mat.alpha(), b = mat.beta(), c = mat.gamma(), d = mat.delta();
    const IntMatrix cd = c * d.transpose();
    const IntMatrix ab = a * b.transpose();
    std::vector<long long> mp(g), nq(g);
    for (std::size_t i = 0; i < g; ++i) {
        mp[i] = ch.m()[i] - cd(i, i);
        nq[i] = ch.n()[i] - ab(i, i);
    }
    std::vector<int> m2(g), n2(g);
    auto mod2 = [](long long x) { return static_cast<int>(((x % 2) + 2) % 2); };
    for (std::size_t i = 0; i < g; ++i) {
        long long sm = 0, sn = 0;
        for (std::size_t j = 0; j < g; ++j) {
            sm += a(j, i) * mp[j] + c(j, i) * nq[j];
            sn += b(j, i) * mp[j] + d(j, i) * nq[j];
        }
        m2[i] = mod2(sm);
        n2[i] = mod2(sn);
    }
    return ThetaCharacteristic(std::move(m2), std::move(n2));
}

double modular_magnitude_check(const SymplecticMatrix& mat, const ThetaCharacteristic& ch,
                               std::span<const cplx> z, const RiemannMatrix& zm,
                               const TruncationPolicy& policy) {
    const std::size_t g = zm.genus();
    if (mat.genus() != g || ch.genus() != g || z.size() != g) {
        throw DimensionError("modular_magnitude_check: genus mismatch");
    }
    const ComplexMatrix c = mat.gamma().to_complex();
    const ComplexMatrix czd = c * zm.matrix() + mat.delta().to_complex();
    const ComplexMatrix czd_inv = inverse(czd);

    const std::vector<cplx> z_new = czd_inv.transpose() * z;
    const RiemannMatrix z_mat = siegel_action(mat, zm);

    const std::vector<cplx> cz = c * z;
    const std::vector<cplx> inv_cz = czd_inv * std::span<const cplx>(cz);
    cplx quad = 0.0;
    for (std::size_t i = 0; i < g; ++i) quad += z[i] * inv_cz[i];

    const ThetaCharacteristic forward = char_transform(mat.inverse(), ch);
    const double lhs = std::abs(theta_char(forward, z_new, z_mat, policy).value);
    const double rhs = std::sqrt(std::abs(determinant(czd))) *
                       std::exp((cplx(0.0, kPi) * quad).real()) *
                       std::abs(theta_char(ch, z, zm, policy).value);
    return std::abs(lhs - rhs);
}

}  // namespace w9
