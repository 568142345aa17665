#include "cli/app.hpp"
#include "cli/expr.hpp"
#include "cli/io.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "w9/errors.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace w9;
using w9::cli::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run w9tool(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "w9_cli_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("expression parser") {
    using cli::eval_expression;
    using cli::eval_real;
    CHECK(std::abs(eval_real("2-sqrt(3)") - fixture::kS1) < 2e-16);
    CHECK(std::abs(eval_real("sqrt(3)/3") - fixture::kSqrt3 / 3) < 1e-16);
    CHECK(eval_real("2^3") == 8.0);
    CHECK(eval_real("2^-1") == 0.5);
    CHECK(eval_real("-(1+2)*3") == -9.0);
    CHECK(eval_real("1e-3") == 1e-3);
    const auto z = eval_expression("1+5/3i");
    CHECK(std::abs(static_cast<double>(z.real()) - 1.0) < 1e-18);
    CHECK(std::abs(static_cast<double>(z.imag()) - 5.0 / 3) < 1e-16);
    CHECK(eval_expression("2(3)") == cli::lcplx(6));
    CHECK(std::abs(static_cast<double>(eval_expression("sqrt(-4)").imag()) - 2.0) < 1e-18);
    // Long double keeps 2 - sqrt(3) closer than a double subtraction chain.
    CHECK(std::abs(eval_expression("(2-sqrt(3))*(2+sqrt(3))").real() - 1.0L) < 1e-17L);

    CHECK_THROWS_AS(eval_expression("2+*3"), ParameterError);
    CHECK_THROWS_AS(eval_expression("foo(2)"), ParameterError);
    CHECK_THROWS_AS(eval_expression("(1+2"), ParameterError);
    CHECK_THROWS_AS(eval_expression("1/0"), ParameterError);
    CHECK_THROWS_AS(eval_real("i"), ParameterError);
    try {
        eval_expression("1 + $");
        FAIL("expected an error");
    } catch (const ParameterError& e) {
        CHECK(std::string(e.what()).find("position 5") != std::string::npos);
    }

    const auto list = cli::eval_list("-1, 0, sqrt(2), (1+i)");
    REQUIRE(list.size() == 4);
    CHECK(list[3] == cplx(1.0, 1.0));
    const ComplexMatrix m = cli::parse_matrix_text("[[i, 1/2], [1/2, 2i]]");
    CHECK(m(1, 1) == cplx(0.0, 2.0));
    CHECK(m(0, 1) == 0.5);
    CHECK_THROWS_AS(cli::parse_matrix_text("[[1, 2], [3]]"), DimensionError);
    CHECK_THROWS_AS(cli::parse_matrix_text("[1, 2]"), ParameterError);
}

TEST_CASE("io helpers") {
    CHECK(cli::shortest(0.1) == "0.1");
    CHECK(cli::shortest(1.0 / 3) == "0.3333333333333333");
    CHECK(cli::csv_field("a,b") == "\"a,b\"");
    CHECK(cli::csv_field("plain") == "plain");
    const auto p = scratch("hash.txt");
    std::ofstream(p) << "abc";
    CHECK(cli::sha256_file(p.string()) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK_THROWS_AS(cli::sha256_file((scratch("missing") / "x").string()), ParameterError);
    CHECK(cli::complex_from_json(json{{"re", 1.5}, {"im", -2.0}}) == cplx(1.5, -2.0));
    CHECK(cli::complex_from_json(json("4/3i")) == cplx(0.0, 4.0 / 3));
}

TEST_CASE("periods command") {
    const auto r = w9tool({"periods", "--s", "0.2679491924311227", "--basis", "cover"});
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    CHECK(max_abs_diff(cli::matrix_from_json(doc["Zhat"]), fixture::zhat1()) < 1e-6);
    CHECK(max_abs_diff(cli::matrix_from_json(doc["Z"]), fixture::z1()) < 1e-6);
    CHECK(doc["metadata"]["calibration_id"] == "w9-orientation-v1");
    CHECK(doc["metadata"]["quadrature_level"].get<int>() >= 3);

    const auto l = w9tool({"periods", "--lambda", "2", "--basis", "genus2_w9"});
    REQUIRE(l.code == 0);
    const ComplexMatrix sil = cli::matrix_from_json(json::parse(l.out)["Z"]);
    CHECK(max_abs_diff(sil, ComplexMatrix{{5.0 / 3 * fixture::I, -4.0 / 3 * fixture::I},
                                          {-4.0 / 3 * fixture::I, 5.0 / 3 * fixture::I}}) < 1e-15);

    const auto el = w9tool({"periods", "--roots", "-1,0,1", "--basis", "elliptic"});
    REQUIRE(el.code == 0);
    CHECK(std::abs(cli::matrix_from_json(json::parse(el.out)["Z"])(0, 0) - fixture::I) < 1e-9);

    const auto u = w9tool({"periods", "--u", "-18", "--basis", "cover"});
    REQUIRE(u.code == 0);
    CHECK(max_abs_diff(cli::matrix_from_json(json::parse(u.out)["Zhat"]), fixture::zhat1()) < 1e-8);

    CHECK(w9tool({"periods", "--roots", "-1,0,1,2,3", "--basis", "elliptic"}).code == 1);
    CHECK(w9tool({"periods", "--s", "0.2", "--lambda", "2"}).code == 1);
    CHECK(w9tool({"periods"}).code == 1);
    CHECK(w9tool({"periods", "--s", "0.9"}).code == 1);
    CHECK(w9tool({"periods", "--s", "0.2", "--basis", "torus"}).code == 1);

    // Determinism: byte-identical output.
    const auto again = w9tool({"periods", "--s", "0.2679491924311227", "--basis", "cover"});
    CHECK(again.out == r.out);
}

TEST_CASE("theta command") {
    const auto file = scratch("zhat1.json");
    REQUIRE(w9tool({"periods", "--s", "2-sqrt(3)", "--basis", "cover", "--out", file.string()}).code == 0);
    const auto r = w9tool({"theta", "--char", "111;101", "--matrix", file.string()});
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["abs"].get<double>() < 1e-10);
    CHECK(doc["parity"] == "even");

    const auto odd = w9tool({"theta", "--char", "1;1", "--g", "1", "--matrix", "[[i]]"});
    REQUIRE(odd.code == 0);
    CHECK(json::parse(odd.out)["abs"].get<double>() < 1e-15);
    CHECK(json::parse(odd.out)["parity"] == "odd");

    const auto nz = w9tool({"theta", "--char", "000;000", "--matrix", file.string()});
    REQUIRE(nz.code == 0);
    CHECK(json::parse(nz.out)["abs"].get<double>() > 0.5);

    // JSON round trip is exact.
    const ComplexMatrix written = cli::matrix_from_json(json::parse(read_file(file))["Zhat"]);
    CHECK(max_abs_diff(cli::load_matrix(file.string()), written) == 0.0);

    const auto bad = w9tool({"theta", "--char", "112;101", "--matrix", file.string()});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("position") != std::string::npos);
    CHECK(w9tool({"theta", "--char", "1;1", "--g", "2", "--matrix", "[[i]]"}).code == 1);
    CHECK(w9tool({"theta", "--char", "1;1", "--matrix", "[[-i]]"}).code == 1);
    // Truncation failure is numerical.
    CHECK(w9tool({"theta", "--char", "0;0", "--matrix", "[[0.0001i]]"}).code == 2);
}

TEST_CASE("trace command") {
    const auto one = w9tool({"trace", "--from", "1", "--to", "1", "--steps", "1", "--format", "csv"});
    REQUIRE(one.code == 0);
    std::istringstream lines(one.out);
    std::string header, row, extra;
    std::getline(lines, header);
    std::getline(lines, row);
    CHECK(header == "t,y,re_z11,im_z11,re_z12,im_z12,re_z22,im_z22,residual,flags");
    CHECK_FALSE(std::getline(lines, extra));
    const double y = std::stod(row.substr(row.find(',') + 1));
    CHECK(std::abs(y - 4.0 / 3) < 1e-8);

    const auto many = w9tool({"trace", "--from", "1", "--to", "3", "--steps", "21"});
    REQUIRE(many.code == 0);
    const json doc = json::parse(many.out);
    REQUIRE(doc["points"].size() == 21);
    double prev = 0.0;
    for (const auto& p : doc["points"]) {
        CHECK(p["residual"].get<double>() < 1e-10);
        CHECK(p["t"].get<double>() > prev);
        prev = p["t"].get<double>();
    }
    CHECK(w9tool({"trace", "--from", "3", "--to", "1", "--steps", "4"}).code == 1);
}

TEST_CASE("verify command") {
    const auto r = w9tool({"verify", "--s", "0.2679491924311227"});
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["pass"] == true);
    CHECK(std::abs(doc["results"][0]["t"].get<double>() - 1.0) < 1e-8);
    CHECK(std::abs(doc["results"][0]["y"].get<double>() - 4.0 / 3) < 1e-8);

    const auto grid = w9tool({"verify", "--grid", "10", "--format", "csv"});
    CHECK(grid.code == 0);
    CHECK(grid.out.find("false") == std::string::npos);

    CHECK(w9tool({"verify", "--s", "0.9"}).code == 1);
    CHECK(w9tool({"verify"}).code == 1);

    const auto tampered = scratch("calibration.json");
    std::ofstream(tampered) << "{}";
    const auto t = w9tool({"--calibration", tampered.string(), "verify", "--s", "0.2"});
    CHECK(t.code == 1);
    CHECK(t.err.find("SHA-256") != std::string::npos);
}

TEST_CASE("classify command") {
    const auto r = w9tool({"classify", "--abc", "1/3,1/2,2/3"});
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["real_group"] == "D6");
    CHECK(doc["complex_group"] == "G24");

    const auto s = w9tool({"classify", "--s", "2-sqrt(3)"});
    REQUIRE(s.code == 0);
    std::vector<std::string> held;
    const json sdoc = json::parse(s.out);
    for (const auto& c : sdoc["involution_conditions"])
        if (c["holds"].get<bool>()) held.push_back(c["label"]);
    CHECK(held == std::vector<std::string>{"A", "D"});

    const auto bad = w9tool({"classify", "--abc", "0.5,0.4,0.7"});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("0 < a < b < c < 1") != std::string::npos);
}

TEST_CASE("global flags and config") {
    const auto cfg = scratch("w9.conf");
    std::ofstream(cfg) << "format = \"csv\"\nquad-tol = 1e-10\n";
    const auto r = w9tool({"--config", cfg.string(), "classify", "--abc", "0.2,0.5,0.7"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("real_group,complex_group", 0) == 0);

    const auto out = scratch("out.json");
    std::filesystem::remove(out);
    REQUIRE(w9tool({"classify", "--abc", "0.2,0.5,0.7", "--out", out.string()}).code == 0);
    CHECK(json::parse(read_file(out))["real_group"] == "Z2");

    CHECK(w9tool({"--format", "xml", "classify", "--abc", "0.2,0.5,0.7"}).code == 1);
    CHECK(w9tool({"--quad-tol", "-1", "classify", "--abc", "0.2,0.5,0.7"}).code == 1);
    CHECK(w9tool({"--help"}).code == 0);
    CHECK(w9tool({}).code == 1);
}
