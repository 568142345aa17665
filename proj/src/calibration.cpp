#include "w9/errors.hpp"
#include "w9/periods.hpp"

#include "calibration_data.hpp"

#include <json.hpp>

#include <cmath>
#include <limits>

namespace w9 {

namespace {

using nlohmann::json;

constexpr const char* kGenus2Key = "genus2_w9";
constexpr const char* kCoverKey = "cover";
constexpr const char* kEllipticKey = "elliptic";

OrientationCalibration read_layout(const json& j, std::size_t arcs, std::size_t g) {
    OrientationCalibration c;
    c.orientation = j.at("orientation").get<std::vector<int>>();
    for (int s : c.orientation) {
        if (s != 1 && s != -1) throw ParameterError("calibration: orientation entries must be +1 or -1");
    }
    if (c.orientation.size() != arcs) throw ParameterError("calibration: wrong number of orientation signs");
    const auto t = j.at("translation").get<std::vector<std::vector<long long>>>();
    if (t.size() != g) throw ParameterError("calibration: translation must be g x g");
    c.translation = IntMatrix(g);
    for (std::size_t r = 0; r < g; ++r) {
        if (t[r].size() != g) throw ParameterError("calibration: translation must be g x g");
        for (std::size_t k = 0; k < g; ++k) c.translation(r, k) = t[r][k];
    }
    if (!(c.translation == c.translation.transpose())) throw ParameterError("calibration: translation must be symmetric");
    c.residual = j.value("residual", 0.0);
    return c;
}

json write_layout(const OrientationCalibration& c) {
    std::vector<std::vector<long long>> t(c.translation.size(), std::vector<long long>(c.translation.size()));
    for (std::size_t r = 0; r < t.size(); ++r)
        for (std::size_t k = 0; k < t.size(); ++k) t[r][k] = c.translation(r, k);
    return json{{"orientation", c.orientation}, {"translation", t}, {"residual", c.residual}};
}

OrientationCalibration identity_calibration(std::size_t arcs, std::size_t g) {
    return {std::vector<int>(arcs, 1), IntMatrix(g), 0.0};
}

CalibrationTable identity_table() {
    CalibrationTable t;
    t.version = 0;
    t.id = "identity";
    t.genus2 = identity_calibration(4, 2);
    t.cover = identity_calibration(7, 3);
    t.elliptic = identity_calibration(2, 1);
    return t;
}

// Searches orientation signs (arcs unused by the cycle rows stay +1, the
// first used arc is fixed to +1 since a global sign cancels in A B^{-1})
// and the integer translation S = round(Re(target - A B^{-1})).
OrientationCalibration fit(const HyperellipticCurve& curve, Layout layout, const ComplexMatrix& target,
                           const QuadConfig& quad) {
    const CyclePlan plan = build_cycles(curve, layout, identity_table());
    const auto ints = arc_integrals(curve, plan, quad);
    const std::size_t g = plan.alpha_rows.size();

    std::vector<std::size_t> finite;  // plan arc index of each finite arc
    for (std::size_t j = 0; j < plan.arcs.size(); ++j) {
        if (plan.arcs[j]) finite.push_back(j);
    }
    std::vector<std::size_t> used;  // positions in `finite`
    for (std::size_t f = 0; f < finite.size(); ++f) {
        bool any = false;
        for (const auto* rows : {&plan.alpha_rows, &plan.beta_rows})
            for (const auto& r : *rows) any = any || r[finite[f]] != 0;
        if (any) used.push_back(f);
    }

    OrientationCalibration best;
    best.residual = std::numeric_limits<double>::infinity();
    long long best_norm = 0;
    const unsigned combos = 1u << (used.size() - 1);
    for (unsigned mask = 0; mask < combos; ++mask) {
        std::vector<int> orient(finite.size(), 1);
        for (std::size_t u = 1; u < used.size(); ++u) {
            if (mask & (1u << (u - 1))) orient[used[u]] = -1;
        }
        ComplexMatrix a(g, g), b(g, g);
        auto assemble = [&](const std::vector<std::vector<int>>& rows, ComplexMatrix& m) {
            for (std::size_t r = 0; r < g; ++r)
                for (std::size_t f = 0; f < finite.size(); ++f) {
                    const std::size_t j = finite[f];
                    const double c = rows[r][j] * orient[f];
                    if (c == 0.0) continue;
                    for (std::size_t k = 0; k < g; ++k) m(r, k) += c * ints[j].values[k];
                }
        };
        assemble(plan.alpha_rows, a);
        assemble(plan.beta_rows, b);
        ComplexMatrix z;
        try {
            z = right_divide(a, b);
        } catch (const SingularityError&) {
            continue;
        }
        IntMatrix s(g);
        long long norm = 0;
        for (std::size_t r = 0; r < g; ++r)
            for (std::size_t k = 0; k < g; ++k) {
                s(r, k) = std::llround((target(r, k) - z(r, k)).real());
                norm += std::llabs(s(r, k));
            }
        if (!(s == s.transpose())) continue;
        const double res = max_abs_diff(z + s.to_complex(), target);
        const bool better = res < best.residual - 1e-9 ||
                            (std::abs(res - best.residual) <= 1e-9 && norm < best_norm);
        if (better) {
            best = {orient, s, res};
            best_norm = norm;
        }
    }
    return best;
}

}  // namespace

CalibrationTable parse_calibration(std::string_view json_text) {
    try {
        const json j = json::parse(json_text);
        CalibrationTable t;
        t.version = j.at("version").get<int>();
        t.id = j.at("id").get<std::string>();
        const json& layouts = j.at("layouts");
        t.genus2 = read_layout(layouts.at(kGenus2Key), 4, 2);
        t.cover = read_layout(layouts.at(kCoverKey), 7, 3);
        t.elliptic = read_layout(layouts.at(kEllipticKey), 2, 1);
        return t;
    } catch (const json::exception& e) {
        throw ParameterError(std::string("calibration: ") + e.what());
    }
}

std::string calibration_to_json(const CalibrationTable& table) {
    json j;
    j["version"] = table.version;
    j["id"] = table.id;
    j["fixture"] = {{"s", "2-sqrt(3)"}, {"genus2_target", "Z_1"}, {"cover_target", "Zhat_1"}};
    j["layouts"] = {{kGenus2Key, write_layout(table.genus2)},
                    {kCoverKey, write_layout(table.cover)},
                    {kEllipticKey, write_layout(table.elliptic)}};
    return j.dump(2) + "\n";
}

const CalibrationTable& builtin_calibration() {
    static const CalibrationTable table = parse_calibration(generated::kCalibrationJson);
    return table;
}

std::string_view builtin_calibration_sha256() { return generated::kCalibrationSha256; }

CalibrationTable calibrate(const QuadConfig& quad) {
    const double r3 = std::sqrt(3.0);
    const double s = 2.0 - r3;
    const double c = 2.0 + r3;
    const cplx i(0.0, 1.0);

    const HyperellipticCurve genus2({-1.0, 0.0, s * s, 1.0, c * c});
    const ComplexMatrix z1{{1.0 + 5.0 / 3 * i, 4.0 / 3 * i}, {4.0 / 3 * i, 5.0 / 3 * i}};
    const HyperellipticCurve cover({i, -i, s, -s, 1.0, -1.0, c, -c});
    const ComplexMatrix zhat1{{4.0 / 3 * i, 2.0 / 3 * i, 1.0 / 3 * i},
                              {2.0 / 3 * i, 0.5 + 5.0 / 6 * i, 2.0 / 3 * i},
                              {1.0 / 3 * i, 2.0 / 3 * i, 4.0 / 3 * i}};

    CalibrationTable t;
    t.version = 1;
    t.id = "w9-orientation-v1";
    t.genus2 = fit(genus2, Layout::real_mcurve_genus2, z1, quad);
    t.cover = fit(cover, Layout::cover_genus3, zhat1, quad);
    t.elliptic = identity_calibration(2, 1);
    return t;
}

}  // namespace w9
