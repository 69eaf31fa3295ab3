#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "nlsb/error.hpp"
#include "nlsb/scenario_io.hpp"

using namespace nlsb;

namespace {

const char* kText = R"(# comment
[grid]
L = 10
n = 256

[params]
nu = -1.5   # trailing comment
mu = 2

[potential]
kind = quadratic
alpha = 0.5

[ic]
x0 = 0.25
p0 = -1
sigma = 0.8
beta = 0.1

[solver]
dt = 5e-4
t_end = -2
blowup_threshold = 50
record_stride = 4
)";

ErrorCode code_of(const std::string& text) {
    try {
        parse_scenario(text, "t.ini");
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error");
    return ErrorCode::Io;
}

std::string message_of(const std::string& text) {
    try {
        parse_scenario(text, "t.ini");
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

const std::string kMinimal = "[grid]\nL = 20\nn = 1024\n[params]\nnu = -1\nmu = 1\n[potential]\nkind = free\n[ic]\nsigma = 1\n";

}  // namespace

TEST_CASE("full scenario") {
    const auto sc = parse_scenario(kText);
    CHECK(sc.grid.half_width() == 10.0);
    CHECK(sc.grid.size() == 256);
    CHECK(sc.params.nu == -1.5);
    CHECK(sc.params.mu == 2.0);
    CHECK(sc.potential.is_quadratic());
    CHECK(sc.potential.alpha() == 0.5);
    CHECK(sc.ic.x0 == 0.25);
    CHECK(sc.ic.p0 == -1.0);
    CHECK(sc.ic.sigma == 0.8);
    CHECK(sc.ic.beta == 0.1);
    CHECK(sc.solver.dt == 5e-4);
    CHECK(sc.solver.t_end == -2.0);
    CHECK(sc.solver.blowup_threshold == 50.0);
    CHECK(sc.solver.record_stride == 4);
}

TEST_CASE("defaults and dotted keys") {
    const auto sc = parse_scenario(kMinimal);
    CHECK(sc.ic.x0 == 0.0);
    CHECK(sc.ic.beta == 0.0);
    CHECK(sc.solver.dt == SolverSettings{}.dt);
    CHECK_FALSE(sc.solver.blowup_threshold.has_value());
    const auto dotted = parse_scenario("grid.L = 20\ngrid.n = 1024\nparams.nu = -1\nparams.mu = 1\n"
                                       "potential.kind = stark\npotential.alpha = 2\nic.sigma = 1\n");
    CHECK(dotted.potential.is_stark());
    CHECK(dotted.potential.alpha() == 2.0);
}

TEST_CASE("errors carry codes and line numbers") {
    std::string quoted = kMinimal;
    quoted.replace(quoted.find("n = 1024"), 8, "n = \"abc\"");
    CHECK(code_of(quoted) == ErrorCode::ParseError);
    CHECK(message_of(quoted).find("t.ini:3:") != std::string::npos);
    CHECK(code_of(kMinimal + "[extra]\n") == ErrorCode::ParseError);
    CHECK(code_of(kMinimal + "[ic]\n") == ErrorCode::ParseError);
    CHECK(code_of(kMinimal + "ic.sigma = 2\n") == ErrorCode::ParseError);
    CHECK(code_of(kMinimal + "ic.colour = 2\n") == ErrorCode::ParseError);
    CHECK(code_of("[grid]\nL = 20\n") == ErrorCode::ParseError);
    CHECK(code_of("[grid]\nL = 1e\n") == ErrorCode::ParseError);
    CHECK(code_of("[grid]\njust words\n") == ErrorCode::ParseError);

    std::string bad_n = kMinimal;
    bad_n.replace(bad_n.find("n = 1024"), 8, "n = 1000");
    CHECK(code_of(bad_n) == ErrorCode::InvalidGrid);
    CHECK(message_of(bad_n).find("t.ini:3:") != std::string::npos);

    std::string free_alpha = kMinimal;
    free_alpha.replace(free_alpha.find("kind = free"), 11, "kind = free\nalpha = 1");
    CHECK(code_of(free_alpha) == ErrorCode::ParseError);
    CHECK(message_of(free_alpha).find("t.ini:9:") != std::string::npos);
    std::string zero_alpha = kMinimal;
    zero_alpha.replace(zero_alpha.find("kind = free"), 11, "kind = stark\nalpha = 0");
    CHECK(code_of(zero_alpha) == ErrorCode::InvalidPotential);
    std::string stark_no_alpha = kMinimal;
    stark_no_alpha.replace(stark_no_alpha.find("kind = free"), 11, "kind = stark");
    CHECK(code_of(stark_no_alpha) == ErrorCode::ParseError);
    std::string neg_sigma = kMinimal;
    neg_sigma.replace(neg_sigma.find("sigma = 1"), 9, "sigma = -1");
    CHECK(code_of(neg_sigma) == ErrorCode::InvalidWidth);
}

TEST_CASE("sweep specification") {
    const auto spec = parse_sweep(kMinimal + "[sweep]\nic.p0 = linspace(0, 4, 9)\nparams.nu = -1, -2,-3\nmax_points = 50\n");
    REQUIRE(spec.axes.size() == 2);
    CHECK(spec.axes[0].path == "ic.p0");
    CHECK(spec.axes[0].values.size() == 9);
    CHECK(spec.axes[0].values[8] == 4.0);
    CHECK(spec.axes[0].values[1] == 0.5);
    CHECK(spec.axes[1].values == std::vector<double>{-1, -2, -3});
    CHECK(spec.max_points == 50);
    CHECK(spec.point_count() == 27);
    CHECK(spec.base.params.nu == -1.0);

    CHECK_THROWS_AS(parse_sweep(kMinimal + "[sweep]\nic.width = 1, 2\n"), Error);
    CHECK_THROWS_AS(parse_sweep(kMinimal + "[sweep]\nic.p0 = linspace(0, 1)\n"), Error);
    CHECK_THROWS_AS(parse_sweep(kMinimal + "[sweep]\nic.p0 = 1,,2\n"), Error);
    CHECK_THROWS_AS(parse_sweep(kMinimal + "[sweep]\npotential.alpha = 1, 2\n"), Error);
}

TEST_CASE("apply_parameter") {
    Scenario sc;
    apply_parameter(sc, "ic.sigma", 0.7);
    apply_parameter(sc, "params.mu", 3.0);
    CHECK(sc.ic.sigma == 0.7);
    CHECK(sc.params.mu == 3.0);
    CHECK_THROWS_AS(apply_parameter(sc, "grid.n", 3.0), Error);
    CHECK_THROWS_AS(apply_parameter(sc, "potential.alpha", 1.0), Error);
    sc.potential = Potential::stark(1.0);
    apply_parameter(sc, "potential.alpha", -2.0);
    CHECK(sc.potential.is_stark());
    CHECK(sc.potential.alpha() == -2.0);
}

TEST_CASE("raw states and files") {
    const auto dir = std::filesystem::temp_directory_path() / "nlsb_io_test";
    std::filesystem::create_directories(dir);
    const GridSpec grid{4.0, 16};
    {
        std::ofstream out(dir / "ok.txt");
        for (int j = 0; j < 16; ++j) out << j << (j % 2 ? ", " : " ") << -j << "\n";
    }
    const auto psi = load_raw_state(dir / "ok.txt", grid);
    CHECK(psi.values[3] == Complex(3.0, -3.0));
    {
        std::ofstream out(dir / "short.txt");
        out << "1 0\n2 0\n";
    }
    CHECK_THROWS_AS(load_raw_state(dir / "short.txt", grid), Error);
    try {
        read_text_file(dir / "missing.ini");
        FAIL("expected Io");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Io);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("scenario json") {
    const auto j = to_json(parse_scenario(kText));
    CHECK(j["grid"]["n"] == 256);
    CHECK(j["potential"]["kind"] == "quadratic");
    CHECK(j["solver"]["blowup_threshold"] == 50.0);
}
