#include <doctest.h>

#include "nlsb/error.hpp"
#include "nlsb/sweep.hpp"

using namespace nlsb;

namespace {

SweepSpec small_spec() {
    SweepSpec spec;
    spec.base.params = NlsParams{-2.0, 2.0};
    spec.axes.push_back({"params.nu", {-12.0, -7.0, -2.0}});
    spec.axes.push_back({"ic.p0", {0.0, 1.0, 2.0, 4.0}});
    return spec;
}

}  // namespace

TEST_CASE("flat index order") {
    const auto spec = small_spec();
    CHECK(spec.point_count() == 12);
    CHECK(unflatten(spec, 0) == std::vector<std::size_t>{0, 0});
    CHECK(unflatten(spec, 1) == std::vector<std::size_t>{0, 1});
    CHECK(unflatten(spec, 4) == std::vector<std::size_t>{1, 0});
    CHECK(unflatten(spec, 11) == std::vector<std::size_t>{2, 3});
}

TEST_CASE("rows match direct evaluation") {
    const auto spec = small_spec();
    const auto rows = run_sweep(spec, 1);
    REQUIRE(rows.size() == 12);
    for (const auto& row : rows) {
        Scenario sc = spec.base;
        sc.params.nu = row.parameters[0];
        sc.ic.p0 = row.parameters[1];
        const auto r = sharpness_compare(sc);
        CHECK(row.status == "ok");
        CHECK(row.verdicts == r.verdicts);
        CHECK(row.T_I == r.T_I);
        CHECK(row.T_V == r.T_V);
    }
    CHECK(rows[5].parameters == std::vector<double>{-7.0, 1.0});
}

TEST_CASE("worker count does not change the output") {
    const auto spec = small_spec();
    const auto one = run_sweep(spec, 1);
    const auto csv = sweep_csv(spec, one);
    const auto json = sweep_json(spec, one).dump();
    for (unsigned w : {2u, 4u, 7u}) {
        const auto rows = run_sweep(spec, w);
        CHECK(sweep_csv(spec, rows) == csv);
        CHECK(sweep_json(spec, rows).dump() == json);
    }
}

TEST_CASE("csv layout") {
    const auto spec = small_spec();
    const auto csv = sweep_csv(spec, run_sweep(spec, 2));
    const auto header = csv.substr(0, csv.find('\n'));
    CHECK(header ==
          "index,params.nu,ic.p0,status,ClassicalFree,EnhancedFree,StarkEnhanced,HarmonicEnhanced,InvertedEnhanced,"
          "CarlesStark16bis,CarlesHarmonic25,CarlesInverted26,T_I,T_V");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 13);
}

TEST_CASE("point failures are recorded per row") {
    auto spec = small_spec();
    spec.axes[1] = {"ic.sigma", {1.0, -1.0}};
    const auto rows = run_sweep(spec, 3);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].status == "ok");
    CHECK(rows[1].status == "InvalidWidth");
    CHECK(rows[1].verdicts.empty());
}

TEST_CASE("cap") {
    auto spec = small_spec();
    spec.max_points = 11;
    try {
        run_sweep(spec, 1);
        FAIL("expected CapExceeded");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::CapExceeded);
    }
    SweepSpec huge;
    huge.axes.push_back({"params.nu", std::vector<double>(100000, -1.0)});
    CHECK_THROWS_AS(run_sweep(huge, 4), Error);
}
