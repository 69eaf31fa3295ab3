#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "nlsb/ehrenfest.hpp"
#include "nlsb/error.hpp"
#include "nlsb/solver.hpp"
#include "oracles.hpp"

using namespace nlsb;

namespace {

Scenario base(double nu, double mu, Potential pot, double dt, double t_end) {
    Scenario sc;
    sc.grid = GridSpec{20.0, 1024};
    sc.params = NlsParams{nu, mu};
    sc.potential = pot;
    sc.solver.dt = dt;
    sc.solver.t_end = t_end;
    sc.solver.record_stride = 10;
    return sc;
}

double max_energy_drift(const RunResult& r) {
    double d = 0.0;
    for (const auto& rec : r.records) d = std::max(d, std::abs(rec.energy - r.records.front().energy));
    return d;
}

double max_abs_diff(const WaveFunction& a, const WaveFunction& b) {
    double d = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a.values[j] - b.values[j]));
    return d;
}

}  // namespace

TEST_CASE("zero step is the identity") {
    const auto sc = base(-1.0, 1.0, Potential::quadratic(1.0), 1e-3, 1.0);
    const auto psi = build_initial_state(sc.grid, GaussianIC{0.5, 0.3, 1.0, 0.1});
    CHECK(step(psi, sc, 0.0).values == psi.values);
}

TEST_CASE("grid mismatch is rejected") {
    const auto sc = base(-1.0, 1.0, Potential::free(), 1e-3, 1.0);
    const auto psi = build_initial_state(GridSpec{20.0, 512}, GaussianIC{});
    CHECK_THROWS_AS(step(psi, sc, 1e-3), Error);
    CHECK_THROWS_AS(simulate(sc, psi), Error);
}

TEST_CASE("linear free evolution follows the exact inertia parabola") {
    auto sc = base(0.0, 1.0, Potential::free(), 1e-3, 1.0);
    sc.ic = GaussianIC{0.5, 0.7, 1.0, 0.1};
    const auto r = simulate(sc);
    REQUIRE(std::holds_alternative<HorizonReached>(r.termination));
    const auto& first = r.records.front();
    const auto& last = r.records.back();
    CHECK(last.t == doctest::Approx(1.0));
    const auto m = initial_moments(build_initial_state(sc.grid, sc.ic), sc.params, sc.potential);
    const double predicted = m.I0 + m.Idot0 + 2.0 * m.energy;
    CHECK(std::abs(last.I - predicted) < 1e-6);
    CHECK(std::abs(first.I - m.I0) < 1e-12);
}

TEST_CASE("harmonic coherent state returns after one period") {
    auto sc = base(0.0, 1.0, Potential::quadratic(0.5), 2.0 * oracle::pi / 4000.0, 2.0 * oracle::pi);
    sc.ic = GaussianIC{2.0, 0.0, 1.0, 0.0};
    const auto r = simulate(sc);
    const auto psi0 = build_initial_state(sc.grid, sc.ic);
    REQUIRE(r.final_state);
    double d = 0.0;
    for (std::size_t j = 0; j < psi0.size(); ++j) {
        d = std::max(d, std::abs(std::abs(r.final_state->values[j]) - std::abs(psi0.values[j])));
    }
    CHECK(d < 1e-4);
    CHECK(r.records.back().x_mean == doctest::Approx(2.0).epsilon(1e-5));
    // the width stays fixed throughout
    for (const auto& rec : r.records) CHECK(rec.V == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("norm conservation") {
    for (const auto& pot : {Potential::free(), Potential::stark(1.0), Potential::quadratic(1.0)}) {
        auto sc = base(-1.0, 1.0, pot, 1e-3, 2.0);
        sc.ic = GaussianIC{0.5, 0.3, 1.0, 0.0};
        const auto r = simulate(sc);
        for (const auto& rec : r.records) CHECK(std::abs(rec.norm - 1.0) < 2e-12);
    }
}

TEST_CASE("energy drift is second order in dt") {
    for (const auto& pot : {Potential::free(), Potential::stark(1.0), Potential::quadratic(1.0)}) {
        const double coarse = max_energy_drift(simulate(base(-1.0, 1.0, pot, 2e-3, 2.0)));
        const double fine = max_energy_drift(simulate(base(-1.0, 1.0, pot, 1e-3, 2.0)));
        INFO(pot.name() << " coarse " << coarse << " fine " << fine);
        CHECK(coarse / fine >= 3.5);
        CHECK(fine < 1e-5);
    }
}

TEST_CASE("expectation values follow the classical trajectory") {
    for (const auto& pot : {Potential::free(), Potential::stark(1.0), Potential::quadratic(1.0)}) {
        auto sc = base(-1.0, 1.0, pot, 1e-3, 2.0);
        sc.ic = GaussianIC{0.5, 0.3, 1.0, 0.0};
        const auto r = simulate(sc);
        for (const auto& rec : r.records) {
            const auto c = classical_trajectory(pot, 0.5, 0.3, rec.t);
            CHECK(std::abs(rec.x_mean - c.x) < 1e-6);
            CHECK(std::abs(rec.p_mean - c.p) < 1e-6);
        }
    }
}

TEST_CASE("backward run is the conjugate of the forward run") {
    auto sc = base(-1.0, 1.0, Potential::stark(0.5), 1e-3, -0.5);
    const auto psi0 = build_initial_state(sc.grid, GaussianIC{0.3, 0.8, 1.0, 0.2});
    auto conj0 = psi0;
    for (auto& z : conj0.values) z = std::conj(z);
    const auto back = simulate(sc, psi0);
    sc.solver.t_end = 0.5;
    const auto fwd = simulate(sc, conj0);
    REQUIRE(back.records.size() == fwd.records.size());
    CHECK(back.records.back().t == doctest::Approx(-0.5));
    auto conj_fwd = *fwd.final_state;
    for (auto& z : conj_fwd.values) z = std::conj(z);
    CHECK(max_abs_diff(conj_fwd, *back.final_state) < 1e-10);
    for (std::size_t i = 0; i < fwd.records.size(); ++i) {
        CHECK(back.records[i].t == doctest::Approx(-fwd.records[i].t));
        CHECK(back.records[i].I == doctest::Approx(fwd.records[i].I).epsilon(1e-10));
        CHECK(back.records[i].p_mean == doctest::Approx(-fwd.records[i].p_mean).epsilon(1e-8));
    }
}

TEST_CASE("record layout") {
    auto sc = base(-1.0, 1.0, Potential::free(), 1e-3, 0.105);
    const auto r = simulate(sc);
    // 105 steps, stride 10: t = 0, 0.01 .. 0.1, and the final step
    REQUIRE(r.records.size() == 12);
    CHECK(r.records[1].t == doctest::Approx(0.01));
    CHECK(r.records.back().t == doctest::Approx(0.105));
    CHECK(std::isnan(r.records.front().virial_residual));
    CHECK(std::isnan(r.records.back().virial_residual));
    CHECK(std::isnan(r.records[r.records.size() - 2].virial_residual));
    CHECK(std::isfinite(r.records[1].virial_residual));
    CHECK(r.fingerprint == scenario_fingerprint(sc));
}

TEST_CASE("blow-up threshold") {
    auto sc = base(-1.0, 1.0, Potential::free(), 1e-3, 0.1);
    const double g0 = std::sqrt(0.5);
    CHECK(resolve_blowup_threshold(sc, g0) == doctest::Approx(1e3 * g0));
    sc.solver.blowup_threshold = 0.5 * g0;
    try {
        simulate(sc);
        FAIL("expected InvalidScenario");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidScenario);
    }
    sc.solver.blowup_threshold = g0;
    CHECK_THROWS_AS(simulate(sc), Error);

    ObservableRecord rec;
    rec.grad_norm = 5.0;
    CHECK(detect_blowup(rec, 5.0));
    CHECK_FALSE(detect_blowup(rec, 5.0000001));
    Scenario with;
    with.solver.blowup_threshold = 5.0;
    CHECK(detect_blowup(rec, with, 1.0));
    Scenario without;
    CHECK_FALSE(detect_blowup(rec, without, 1.0));
    CHECK(detect_blowup(ObservableRecord{0, 0, 0, 0, 0, 0, 0, 0, 1000.0, 0}, without, 1.0));
}

TEST_CASE("focusing collapse is detected") {
    Scenario sc;
    sc.grid = GridSpec{8.0, 2048};
    sc.params = NlsParams{-10.0, 2.0};
    sc.solver.dt = 2.5e-4;
    sc.solver.t_end = 1.0;
    sc.solver.blowup_threshold = 5.0 * std::sqrt(0.5);
    const auto r = simulate(sc);
    REQUIRE(r.blew_up());
    const auto b = std::get<BlowupDetected>(r.termination);
    CHECK(b.t_detect > 0.2);
    CHECK(b.t_detect < 0.8305);
    CHECK(b.grad_norm >= *sc.solver.blowup_threshold);
    CHECK(r.records.back().t == doctest::Approx(b.t_detect));
    CHECK(termination_name(r.termination) == "BlowupDetected");
}

TEST_CASE("virial residual") {
    SUBCASE("harmonic ground state is stationary up to the splitting error") {
        auto sc = base(0.0, 1.0, Potential::quadratic(0.5), 1e-3, 1.0);
        const auto r = simulate(sc);
        for (const auto& rec : r.records) {
            if (std::isfinite(rec.virial_residual)) CHECK(std::abs(rec.virial_residual) < 1e-6);
        }
    }
    SUBCASE("second order under step halving") {
        auto max_res = [](const RunResult& r) {
            double m = 0.0;
            for (const auto& rec : r.records) {
                if (std::isfinite(rec.virial_residual)) m = std::max(m, std::abs(rec.virial_residual));
            }
            return m;
        };
        for (const auto& pot : {Potential::free(), Potential::stark(1.0), Potential::quadratic(1.0)}) {
            auto sc = base(-1.0, 1.0, pot, 2e-3, 2.0);
            sc.ic = GaussianIC{0.5, 0.3, 1.0, 0.0};
            const double coarse = max_res(simulate(sc));
            sc.solver.dt = 1e-3;
            const double fine = max_res(simulate(sc));
            INFO(pot.name() << " " << coarse << " " << fine);
            CHECK(std::log2(coarse / fine) >= 1.9);
        }
    }
    SUBCASE("too few records") {
        CHECK_THROWS_AS(virial_residual(std::vector<ObservableRecord>(2), Scenario{}), Error);
    }
    SUBCASE("uneven spacing gives NaN") {
        std::vector<ObservableRecord> recs(4);
        for (int i = 0; i < 4; ++i) {
            recs[i].t = i == 3 ? 2.5 : i;
            recs[i].norm = 1.0;
        }
        const auto res = virial_residual(recs, Scenario{});
        CHECK(std::isfinite(res[1]));
        CHECK(std::isnan(res[2]));
    }
}

TEST_CASE("fingerprint") {
    Scenario a;
    const auto fa = scenario_fingerprint(a);
    CHECK(fa.size() == 16);
    CHECK(fa.find_first_not_of("0123456789abcdef") == std::string::npos);
    CHECK(fa == scenario_fingerprint(a));
    Scenario b = a;
    b.solver.dt = 5e-4;
    CHECK(scenario_fingerprint(b) != fa);
    b = a;
    b.solver.blowup_threshold = 100.0;
    CHECK(scenario_fingerprint(b) != fa);
}
