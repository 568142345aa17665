#include "app.hpp"

#include "expr.hpp"
#include "io.hpp"
#include "w9/errors.hpp"
#include "w9/geodesic.hpp"
#include "w9/periods.hpp"
#include "w9/theta.hpp"
#include "w9/w9.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#ifndef W9_CALIBRATION_PATH
#define W9_CALIBRATION_PATH "data/calibration.json"
#endif

namespace w9::cli {

namespace {

struct RunConfig {
    double quad_tol = 1e-11;
    double series_tol = 1e-12;
    double root_tol = 1e-10;
    double membership_tol = 1e-8;
    std::string format = "json";
    std::string out;
    std::string calibration = W9_CALIBRATION_PATH;

    QuadConfig quad() const {
        QuadConfig q;
        q.tol = quad_tol;
        return q;
    }
    TruncationPolicy policy() const {
        TruncationPolicy p;
        p.tail_tol = series_tol;
        return p;
    }
    SolverConfig solver() const {
        SolverConfig s;
        s.series_tol = series_tol;
        s.root_tol = root_tol;
        return s;
    }
    bool csv() const { return format == "csv"; }
};

struct Result {
    std::string text;
    int status = kSuccess;
};

json tolerances(const RunConfig& cfg) {
    return {{"quad_tol", cfg.quad_tol},
            {"series_tol", cfg.series_tol},
            {"root_tol", cfg.root_tol},
            {"membership_tol", cfg.membership_tol}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void csv_matrix(std::ostringstream& os, const char* name, const ComplexMatrix& m) {
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            os << name << ',' << r + 1 << ',' << c + 1 << ',' << shortest(m(r, c).real()) << ','
               << shortest(m(r, c).imag()) << '\n';
}

// ---- periods ----------------------------------------------------------------

struct PeriodsArgs {
    std::string roots, s, u, lambda;
    std::string basis = "genus2_w9";
};

Result cmd_periods(const PeriodsArgs& a, const RunConfig& cfg) {
    const int given = !a.roots.empty() + !a.s.empty() + !a.u.empty() + !a.lambda.empty();
    if (given != 1) throw ParameterError("periods: give exactly one of --roots, --s, --u, --lambda");
    const Layout layout = parse_layout(a.basis);

    json input;
    std::optional<RiemannMatrix> z, zhat;
    std::optional<HyperellipticCurve> curve;
    int level = 0;

    auto run_quadrature = [&](const HyperellipticCurve& c) {
        const CyclePlan plan = build_cycles(c, layout);
        const PeriodPair pp = period_matrices(c, plan, cfg.quad());
        level = pp.level;
        return RiemannMatrix(right_divide(pp.a, pp.b), 100.0 * cfg.quad_tol);
    };

    if (!a.lambda.empty()) {
        if (layout != Layout::real_mcurve_genus2) throw ParameterError("periods: --lambda needs --basis genus2_w9");
        const double lambda = eval_real(a.lambda);
        input = {{"lambda", lambda}};
        z = silhol_order4_period(lambda);
    } else {
        if (!a.roots.empty()) {
            const auto roots = eval_list(a.roots);
            const std::size_t want = layout == Layout::elliptic ? 3 : (layout == Layout::cover_genus3 ? 8 : 5);
            if (roots.size() != want) {
                std::ostringstream msg;
                msg << "periods: basis " << a.basis << " needs " << want << " roots, got " << roots.size();
                throw ParameterError(msg.str());
            }
            curve.emplace(roots);
            input = {{"roots", a.roots}};
        } else if (!a.s.empty()) {
            const double s = eval_real(a.s);
            if (layout == Layout::elliptic) throw ParameterError("periods: --s needs --basis genus2_w9 or cover");
            input = {{"s", s}};
            curve.emplace(layout == Layout::cover_genus3 ? double_cover(curve_Qs(s)) : curve_Qs(s));
        } else {
            const double u = eval_real(a.u);
            if (layout == Layout::elliptic) throw ParameterError("periods: --u needs --basis genus2_w9 or cover");
            input = {{"u", u}};
            const HyperellipticCurve pu = curve_Pu(u);
            if (layout == Layout::cover_genus3) {
                std::vector<cplx> shifted;
                for (cplx r : pu.branch_points()) shifted.push_back(r - 1.0);
                curve.emplace(double_cover(HyperellipticCurve(shifted)));
            } else {
                curve = pu;
            }
        }
        const RiemannMatrix m = run_quadrature(*curve);
        if (layout == Layout::cover_genus3) {
            zhat = m;
            z = base_from_cover(m);
        } else {
            z = m;
        }
    }

    if (cfg.csv()) {
        std::ostringstream os;
        os << "matrix,row,col,re,im\n";
        if (zhat) csv_matrix(os, "Zhat", zhat->matrix());
        csv_matrix(os, "Z", z->matrix());
        return {os.str()};
    }
    json doc;
    doc["command"] = "periods";
    doc["basis"] = to_string(layout);
    doc["input"] = input;
    if (zhat) doc["Zhat"] = to_json(zhat->matrix());
    doc["Z"] = to_json(z->matrix());
    json meta = tolerances(cfg);
    if (curve) {
        json pts = json::array();
        for (cplx p : curve->branch_points()) pts.push_back(to_json(p));
        meta["branch_points"] = pts;
        meta["quadrature_level"] = level;
        meta["calibration_id"] = builtin_calibration().id;
        meta["calibration_sha256"] = std::string(builtin_calibration_sha256());
    }
    doc["metadata"] = meta;
    return {dump(doc)};
}

// ---- theta ------------------------------------------------------------------

struct ThetaArgs {
    std::string characteristic;
    std::string matrix;
    std::string z;
    int genus = 0;
};

Result cmd_theta(const ThetaArgs& a, const RunConfig& cfg) {
    const ThetaCharacteristic ch = ThetaCharacteristic::parse(a.characteristic);
    const RiemannMatrix zm(load_matrix(a.matrix));
    if (a.genus > 0 && static_cast<std::size_t>(a.genus) != zm.genus()) {
        throw ParameterError("theta: --g does not match the matrix size");
    }
    if (ch.genus() != zm.genus()) throw DimensionError("theta: characteristic and matrix sizes differ");
    std::vector<cplx> z(zm.genus(), 0.0);
    if (!a.z.empty()) {
        z = eval_list(a.z);
        if (z.size() != zm.genus()) throw DimensionError("theta: --z has the wrong length");
    }
    const ThetaValue v = theta_char(ch, z, zm, cfg.policy());
    const char* par = to_string(parity(ch));
    if (cfg.csv()) {
        std::ostringstream os;
        os << "char,parity,re,im,abs,radius,tail_bound\n"
           << ch.str() << ',' << par << ',' << shortest(v.value.real()) << ',' << shortest(v.value.imag()) << ','
           << shortest(std::abs(v.value)) << ',' << v.radius << ',' << shortest(v.tail_bound) << '\n';
        return {os.str()};
    }
    json doc;
    doc["command"] = "theta";
    doc["char"] = ch.str();
    doc["parity"] = par;
    doc["value"] = to_json(v.value);
    doc["abs"] = std::abs(v.value);
    doc["radius"] = v.radius;
    doc["tail_bound"] = v.tail_bound;
    doc["metadata"] = tolerances(cfg);
    return {dump(doc)};
}

// ---- trace ------------------------------------------------------------------

struct TraceArgs {
    std::string from = "1", to = "1";
    int steps = 1;
};

std::string join_flags(const std::vector<std::string>& flags) {
    std::string s;
    for (const auto& f : flags) s += (s.empty() ? "" : ";") + f;
    return s;
}

Result cmd_trace(const TraceArgs& a, const RunConfig& cfg) {
    const auto entries = trace(eval_real(a.from), eval_real(a.to), a.steps, cfg.solver());
    int status = kSuccess;
    for (const auto& e : entries) {
        if (!e.point) status = std::max(status, e.numerical_error ? int(kNumerical) : int(kUsage));
    }
    if (cfg.csv()) {
        std::ostringstream os;
        os << "t,y,re_z11,im_z11,re_z12,im_z12,re_z22,im_z22,residual,flags\n";
        for (const auto& e : entries) {
            os << shortest(e.t) << ',';
            if (e.point) {
                const auto& p = *e.point;
                os << shortest(p.y);
                for (auto [r, c] : {std::pair{0, 0}, {0, 1}, {1, 1}})
                    os << ',' << shortest(p.z(r, c).real()) << ',' << shortest(p.z(r, c).imag());
                os << ',' << shortest(p.residual) << ',' << csv_field(join_flags(p.flags)) << '\n';
            } else {
                os << ",,,,,,,,," << csv_field("error: " + e.error) << '\n';
            }
        }
        return {os.str(), status};
    }
    json rows = json::array();
    for (const auto& e : entries) {
        json r;
        r["t"] = e.t;
        if (e.point) {
            r["y"] = e.point->y;
            r["Z"] = to_json(e.point->z.matrix());
            r["residual"] = e.point->residual;
            r["sign_changes"] = e.point->sign_changes;
            r["flags"] = e.point->flags;
        } else {
            r["error"] = e.error;
        }
        rows.push_back(std::move(r));
    }
    json doc;
    doc["command"] = "trace";
    doc["points"] = rows;
    doc["metadata"] = tolerances(cfg);
    return {dump(doc), status};
}

// ---- verify -----------------------------------------------------------------

struct VerifyArgs {
    std::string s;
    int grid = 0;
};

struct Check {
    std::string name;
    double residual;
    double tol;
    bool pass() const { return residual < tol; }
};

constexpr double kShapeTol = 1e-6;
constexpr double kImagTol = 1e-7;
constexpr double kSeriesTol = 1e-6;
constexpr double kBaseTol = 1e-6;

json verify_one(double s, const RunConfig& cfg, std::vector<Check>& checks) {
    json r;
    r["s"] = s;
    const RiemannMatrix zhat = cover_period_matrix(s, cfg.quad());
    const CoverShape shape = cover_shape_extract(zhat, kShapeTol);
    checks.push_back({"cover_shape", shape.residual, kShapeTol});
    checks.push_back({"theta_membership", theta_membership_check(zhat, cfg.policy(), kShapeTol), cfg.membership_tol});
    checks.push_back({"imaginary_shape", std::max(std::abs(shape.z1.real()), std::abs(shape.z13.real())), kImagTol});
    const TyPair ty = extract_ty_from_cover(zhat, kShapeTol);
    r["t"] = ty.t;
    r["y"] = ty.y;
    checks.push_back({"main_series", std::abs(main_series(ty.t, ty.y, cfg.policy()).value), kSeriesTol});
    const RiemannMatrix direct = genus2_period_matrix(s, cfg.quad());
    checks.push_back({"base_from_cover", max_abs_diff(base_from_cover(zhat, kShapeTol).matrix(), direct.matrix()),
                      kBaseTol});
    r["Zhat"] = to_json(zhat.matrix());
    r["Z"] = to_json(direct.matrix());
    return r;
}

Result cmd_verify(const VerifyArgs& a, const RunConfig& cfg) {
    if (a.s.empty() == (a.grid == 0)) throw ParameterError("verify: give exactly one of --s and --grid");
    const std::string actual = sha256_file(cfg.calibration);
    const std::string expected(builtin_calibration_sha256());
    if (actual != expected) {
        throw ParameterError("verify: calibration file " + cfg.calibration + " has SHA-256 " + actual +
                             " but this build embeds " + expected);
    }

    std::vector<double> grid;
    if (!a.s.empty()) {
        grid.push_back(eval_real(a.s));
        W9Param::from_s(grid.front());
    } else {
        if (a.grid < 2) throw ParameterError("verify: --grid needs at least 2 points");
        for (int k = 0; k < a.grid; ++k) grid.push_back(0.05 + 0.45 * k / (a.grid - 1));
    }

    bool all = true;
    json results = json::array();
    std::ostringstream csv;
    csv << "s,t,y,check,residual,tol,pass\n";
    for (double s : grid) {
        std::vector<Check> checks;
        json r = verify_one(s, cfg, checks);
        json cj = json::array();
        bool ok = true;
        for (const auto& c : checks) {
            ok = ok && c.pass();
            cj.push_back({{"name", c.name}, {"residual", c.residual}, {"tol", c.tol}, {"pass", c.pass()}});
            csv << shortest(s) << ',' << shortest(r["t"].get<double>()) << ',' << shortest(r["y"].get<double>()) << ','
                << c.name << ',' << shortest(c.residual) << ',' << shortest(c.tol) << ',' << (c.pass() ? "true" : "false")
                << '\n';
        }
        r["checks"] = cj;
        r["pass"] = ok;
        all = all && ok;
        results.push_back(std::move(r));
    }
    const int status = all ? kSuccess : kNumerical;
    if (cfg.csv()) return {csv.str(), status};
    json doc;
    doc["command"] = "verify";
    doc["calibration"] = {{"path", cfg.calibration}, {"sha256", actual}, {"id", builtin_calibration().id}};
    doc["results"] = results;
    doc["pass"] = all;
    doc["metadata"] = tolerances(cfg);
    return {dump(doc), status};
}

// ---- classify ---------------------------------------------------------------

struct ClassifyArgs {
    std::string abc;
    std::string s;
    double tol = 1e-9;
};

json conditions_json(const std::vector<ConditionResidual>& cs) {
    json out = json::array();
    for (const auto& c : cs)
        out.push_back({{"label", c.label}, {"formula", c.formula}, {"residual", c.residual}, {"holds", c.holds}});
    return out;
}

Result cmd_classify(const ClassifyArgs& a, const RunConfig& cfg) {
    if (a.abc.empty() == a.s.empty()) throw ParameterError("classify: give exactly one of --abc and --s");
    json doc;
    doc["command"] = "classify";
    std::vector<ConditionResidual> rows;
    AutomorphismReport rep;
    if (!a.abc.empty()) {
        const auto v = eval_list(a.abc);
        if (v.size() != 3) throw ParameterError("classify: --abc needs three values");
        for (cplx x : v)
            if (x.imag() != 0.0) throw ParameterError("classify: --abc values must be real");
        rep = cirre_classify(v[0].real(), v[1].real(), v[2].real(), a.tol);
        doc["abc"] = {v[0].real(), v[1].real(), v[2].real()};
    } else {
        const double s = eval_real(a.s);
        const W9Param p = W9Param::from_s(s);
        const auto abc = normalize_branch_points({-1.0, 0.0, p.a, p.b, p.c});
        rep = cirre_classify(abc[0], abc[1], abc[2], a.tol);
        doc["s"] = s;
        doc["abc"] = {abc[0], abc[1], abc[2]};
        const auto inv = w9_involution_conditions(s, a.tol);
        doc["involution_conditions"] = conditions_json(inv);
        rows.insert(rows.end(), inv.begin(), inv.end());
    }
    doc["real_group"] = to_string(rep.real_group);
    doc["complex_group"] = to_string(rep.complex_group);
    doc["conditions"] = conditions_json(rep.conditions);
    rows.insert(rows.begin(), rep.conditions.begin(), rep.conditions.end());
    if (cfg.csv()) {
        std::ostringstream os;
        os << "real_group,complex_group,label,formula,residual,holds\n";
        for (const auto& c : rows)
            os << to_string(rep.real_group) << ',' << to_string(rep.complex_group) << ',' << c.label << ','
               << csv_field(c.formula) << ',' << shortest(c.residual) << ',' << (c.holds ? "true" : "false") << '\n';
        return {os.str()};
    }
    doc["tol"] = a.tol;
    return {dump(doc)};
}

void write_output(const Result& r, const RunConfig& cfg, std::ostream& out) {
    if (cfg.out.empty()) {
        out << r.text;
        return;
    }
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw ParameterError("cannot write " + cfg.out);
    f << r.text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"w9tool: period matrices, theta values and the W9 Teichmueller geodesic", "w9tool"};
    app.set_config("--config", "", "Read flags from a key = value file");
    RunConfig cfg;
    app.add_option("--quad-tol", cfg.quad_tol, "Quadrature tolerance")->check(CLI::PositiveNumber);
    app.add_option("--series-tol", cfg.series_tol, "Theta tail tolerance")->check(CLI::PositiveNumber);
    app.add_option("--root-tol", cfg.root_tol, "Root tolerance in y")->check(CLI::PositiveNumber);
    app.add_option("--membership-tol", cfg.membership_tol, "Theta membership tolerance")->check(CLI::PositiveNumber);
    app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", cfg.out, "Write output to this file");
    app.add_option("--calibration", cfg.calibration, "Calibration file checked by verify");
    app.require_subcommand(1);
    app.fallthrough();

    PeriodsArgs pa;
    auto* periods = app.add_subcommand("periods", "Period matrix of a curve");
    periods->add_option("--roots", pa.roots, "Comma-separated branch points");
    periods->add_option("--s", pa.s, "W9 parameter s in (0, sqrt(3)/3)");
    periods->add_option("--u", pa.u, "Parameter u of y^2 = P_u(x)");
    periods->add_option("--lambda", pa.lambda, "Order-4 family parameter (closed form)");
    periods->add_option("--basis", pa.basis, "genus2_w9, cover or elliptic");

    ThetaArgs ta;
    auto* theta = app.add_subcommand("theta", "Theta value with characteristic");
    theta->add_option("--char", ta.characteristic, "Characteristic m;n, e.g. 111;101")->required();
    theta->add_option("--matrix", ta.matrix, "Inline [[...]] matrix or JSON file")->required();
    theta->add_option("--z", ta.z, "Comma-separated argument (default 0)");
    theta->add_option("--g", ta.genus, "Expected genus");

    TraceArgs tra;
    auto* tr = app.add_subcommand("trace", "Solve the geodesic on a grid of t");
    tr->add_option("--from", tra.from, "First t");
    tr->add_option("--to", tra.to, "Last t");
    tr->add_option("--steps", tra.steps, "Number of grid points");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "End-to-end checks at s or on a grid");
    verify->add_option("--s", va.s, "Single s");
    verify->add_option("--grid", va.grid, "Number of s values in [0.05, 0.5]");

    ClassifyArgs ca;
    auto* classify = app.add_subcommand("classify", "Automorphism groups and involution conditions");
    classify->add_option("--abc", ca.abc, "a,b,c with 0 < a < b < c < 1");
    classify->add_option("--s", ca.s, "W9 parameter s");
    classify->add_option("--tol", ca.tol, "Condition tolerance")->check(CLI::PositiveNumber);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, eo;
        const int code = app.exit(e, o, eo);
        out << o.str();
        err << eo.str();
        return code == 0 ? kSuccess : kUsage;
    }

    try {
        Result r;
        if (*periods) r = cmd_periods(pa, cfg);
        if (*theta) r = cmd_theta(ta, cfg);
        if (*tr) r = cmd_trace(tra, cfg);
        if (*verify) r = cmd_verify(va, cfg);
        if (*classify) r = cmd_classify(ca, cfg);
        write_output(r, cfg, out);
        return r.status;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.numerical() ? kNumerical : kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kNumerical;
    }
}

}  // namespace w9::cli
