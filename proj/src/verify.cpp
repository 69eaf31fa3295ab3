#include "nlsb/verify.hpp"

#include <algorithm>
#include <cmath>

#include "nlsb/bounds.hpp"
#include "nlsb/criteria.hpp"
#include "nlsb/ehrenfest.hpp"
#include "nlsb/error.hpp"
#include "nlsb/inequalities.hpp"
#include "nlsb/observables.hpp"
#include "nlsb/spectral.hpp"

namespace nlsb {

std::string to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "PASS";
        case CheckStatus::Fail: return "FAIL";
        case CheckStatus::NotApplicable: return "N/A";
        case CheckStatus::Warning: return "WARN";
    }
    return "FAIL";
}

bool VerifyReport::passed() const {
    return std::none_of(checks.begin(), checks.end(), [](const auto& c) { return c.status == CheckStatus::Fail; });
}

namespace {

CheckResult at_most(std::string name, double measured, double tolerance, std::string detail = {}) {
    CheckResult c;
    c.name = std::move(name);
    c.measured = measured;
    c.tolerance = tolerance;
    c.status = measured <= tolerance ? CheckStatus::Pass : CheckStatus::Fail;
    c.detail = std::move(detail);
    return c;
}

CheckResult not_applicable(std::string name, std::string why) {
    CheckResult c;
    c.name = std::move(name);
    c.status = CheckStatus::NotApplicable;
    c.detail = std::move(why);
    return c;
}

// Index one past the last record inside the resolved window.
std::size_t resolved_end(const std::vector<ObservableRecord>& records, double limit) {
    std::size_t k = 0;
    while (k < records.size() && records[k].grad_norm <= limit) ++k;
    return k;
}

double max_virial(const std::vector<ObservableRecord>& records, std::size_t end, double t_limit) {
    double worst = 0.0;
    for (std::size_t i = 0; i < end; ++i) {
        const double r = records[i].virial_residual;
        if (std::isfinite(r) && std::abs(records[i].t) <= t_limit) worst = std::max(worst, std::abs(r));
    }
    return worst;
}

double energy_drift(const std::vector<ObservableRecord>& records, std::size_t end, double t_limit) {
    double worst = 0.0;
    for (std::size_t i = 0; i < end; ++i) {
        if (std::abs(records[i].t) <= t_limit) worst = std::max(worst, std::abs(records[i].energy - records[0].energy));
    }
    return worst;
}

// Passes when the coarse value is already below the floor, otherwise when
// halving dt reduces it at the required order.
CheckResult order_check(std::string name, double coarse, double fine, double floor, double order,
                        const std::string& what) {
    CheckResult c;
    c.name = std::move(name);
    if (coarse <= floor) {
        c.measured = coarse;
        c.tolerance = floor;
        c.status = CheckStatus::Pass;
        c.detail = what;
        return c;
    }
    c.measured = std::log2(coarse / std::max(fine, 1e-300));
    c.tolerance = order;
    c.status = c.measured >= order ? CheckStatus::Pass : CheckStatus::Fail;
    c.detail = "observed order, " + what + ": " + format_double(coarse) + " -> " + format_double(fine);
    return c;
}

void inequality_checks(std::vector<CheckResult>& out, const WaveFunction& f, const std::string& label,
                       const NlsParams& params, double slack) {
    const double xm = mean_position(f);
    auto add = [&](const std::string& name, const InequalitySides& s) {
        const double excess = (s.lhs - s.rhs) / std::max(1.0, std::abs(s.rhs));
        out.push_back(at_most(name + "[" + label + "]", excess, slack,
                              "lhs " + format_double(s.lhs) + ", rhs " + format_double(s.rhs)));
    };
    add("sup_bound", gn_sup_check(f));
    add("interpolation_q0_origin", interpolation_check(f, 0.0, 0.0));
    add("interpolation_q0_center", interpolation_check(f, xm, 0.0));
    add("interpolation_qmu_center", interpolation_check(f, xm, params.mu));
}

}  // namespace

VerifyReport run_verify(const Scenario& scenario, const std::optional<WaveFunction>& raw_state,
                        const VerifyTolerances& tol) {
    scenario.validate();
    VerifyReport report;
    auto& checks = report.checks;
    const auto& params = scenario.params;
    const auto& potential = scenario.potential;

    const WaveFunction psi0 = raw_state ? *raw_state : build_initial_state(scenario.grid, scenario.ic);

    if (raw_state) {
        checks.push_back(not_applicable("initial_quadrature", "raw initial state"));
    } else {
        const auto sampled = sample_gaussian(scenario.grid, scenario.ic);
        checks.push_back(at_most("initial_quadrature", std::abs(norm(sampled) - 1.0), tol.quadrature,
                                 "|discrete norm of the sampled Gaussian - 1|"));
    }
    checks.push_back(at_most("initial_spectral_tail", spectral_tail_ratio(psi0), tol.quadrature,
                             "max |psi_hat| on the top 5% of |k| over the peak"));
    checks.push_back(at_most("initial_boundary_decay", boundary_decay_ratio(psi0), BuildOptions{}.decay_threshold));

    const RunResult run = simulate(scenario, psi0);
    report.termination = termination_name(run.termination);
    const auto& rec = run.records;
    if (std::holds_alternative<NumericalFailure>(run.termination)) {
        CheckResult c;
        c.name = "numerical_stability";
        c.status = CheckStatus::Fail;
        c.detail = std::get<NumericalFailure>(run.termination).reason;
        checks.push_back(c);
    }

    const double growth_limit = tol.resolved_growth * run.initial_grad_norm;
    const std::size_t end = resolved_end(rec, growth_limit);
    const double t_resolved = end == 0 ? 0.0 : std::abs(rec[end - 1].t);
    const std::string window = "records with |t| <= " + format_double(t_resolved);

    const double steps = std::abs(scenario.solver.t_end) / scenario.solver.dt;
    double norm_drift = 0.0;
    for (const auto& r : rec) norm_drift = std::max(norm_drift, std::abs(r.norm - rec.front().norm));
    checks.push_back(at_most("norm_conservation", norm_drift, tol.norm_per_kstep * std::max(1.0, steps / 1000.0)));

    double ehrenfest = 0.0;
    for (std::size_t i = 0; i < end; ++i) {
        const auto c = classical_trajectory(potential, rec.front().x_mean, rec.front().p_mean, rec[i].t);
        ehrenfest = std::max({ehrenfest, std::abs(rec[i].x_mean - c.x), std::abs(rec[i].p_mean - c.p)});
    }
    checks.push_back(at_most("ehrenfest", ehrenfest, tol.ehrenfest, "max |<x> - x(t)|, |<p> - p(t)|, " + window));

    // Energy and virial residual: rerun with dt and the record interval halved.
    if (rec.size() < 3 || end < 3) {
        checks.push_back(not_applicable("energy_conservation", "fewer than 3 resolved records"));
        checks.push_back(not_applicable("virial_order", "fewer than 3 resolved records"));
    } else {
        Scenario fine = scenario;
        fine.solver.dt = scenario.solver.dt / 2.0;
        fine.solver.blowup_threshold = run.blowup_threshold;
        const RunResult fine_run = simulate(fine, psi0);
        const std::size_t fine_end = resolved_end(fine_run.records, growth_limit);
        const double scale = std::max(std::abs(rec.front().energy), 1e-12);
        checks.push_back(order_check("energy_conservation", energy_drift(rec, end, t_resolved) / scale,
                                     energy_drift(fine_run.records, fine_end, t_resolved) / scale,
                                     tol.energy_relative, tol.energy_order, "relative drift, " + window));
        checks.push_back(order_check("virial_order", max_virial(rec, end, t_resolved),
                                     max_virial(fine_run.records, fine_end, t_resolved), tol.virial_floor,
                                     tol.virial_order, "max |residual|, " + window));
    }

    // Bound domination, only where the comparison curves are upper bounds.
    if (!(params.nu < 0.0 && params.mu >= 2.0)) {
        checks.push_back(not_applicable("variance_domination", "requires nu < 0 and mu >= 2"));
        checks.push_back(not_applicable("inertia_domination", "requires nu < 0 and mu >= 2"));
    } else {
        const auto m = initial_moments(psi0, params, potential);
        const auto vb = variance_bound(m, params, potential);
        const auto ib = inertia_bound(m, params, potential);
        double worst_v = -INFINITY;
        double worst_i = -INFINITY;
        for (std::size_t i = 0; i < end; ++i) {
            const auto& r = rec[i];
            if (std::holds_alternative<ZetaHarmonic>(vb) && std::abs(r.t) > std::get<ZetaHarmonic>(vb).window()) break;
            worst_v = std::max(worst_v, r.V - eval(vb, r.t));
            worst_i = std::max(worst_i, r.I - eval(ib, r.t));
        }
        checks.push_back(at_most("variance_domination", worst_v, tol.domination, "max V(t) - " + kind_name(vb) + "(t), " + window));
        checks.push_back(at_most("inertia_domination", worst_i, tol.domination, "max I(t) - " + kind_name(ib) + "(t), " + window));
    }

    // Lower bound on the gradient forced by a small variance, at every record.
    double license = -INFINITY;
    for (const auto& r : rec) {
        if (r.V > 0.0) license = std::max(license, (r.norm * r.norm / (2.0 * std::sqrt(r.V)) - r.grad_norm) / r.grad_norm);
    }
    checks.push_back(at_most("gradient_lower_bound", license, tol.inequality_slack,
                             "max (||psi||^2 / (2 sqrt V) - ||psi'||) / ||psi'||"));

    inequality_checks(checks, psi0, "initial", params, tol.inequality_slack);
    if (run.final_state) inequality_checks(checks, *run.final_state, "final", params, tol.inequality_slack);

    const auto report_c = sharpness_compare(initial_moments(psi0, params, potential), params, potential);
    bool any = false;
    for (const auto& imp : report_c.implications) {
        if (!imp.applicable) continue;
        any = true;
        CheckResult c;
        c.name = "implication " + imp.name;
        c.status = imp.holds ? CheckStatus::Pass : CheckStatus::Fail;
        c.measured = imp.holds ? 0.0 : 1.0;
        c.detail = std::string("antecedent ") + (imp.antecedent_fired ? "fired" : "silent") + ", consequent " +
                   (imp.consequent_fired ? "fired" : "silent");
        checks.push_back(c);
    }
    if (!any) checks.push_back(not_applicable("implications", "no criterion pair applies to this scenario"));
    {
        CheckResult c;
        c.name = "bound_ordering";
        c.status = report_c.ordering_holds ? CheckStatus::Pass : CheckStatus::Fail;
        c.detail = "|T_V| <= |T_I|";
        checks.push_back(c);
    }

    for (const auto& w : run.warnings) {
        CheckResult c;
        c.name = "solver_warning";
        c.status = CheckStatus::Warning;
        c.detail = w;
        checks.push_back(c);
    }
    return report;
}

nlohmann::json to_json(const VerifyReport& report) {
    nlohmann::json j;
    j["termination"] = report.termination;
    j["passed"] = report.passed();
    j["checks"] = nlohmann::json::array();
    for (const auto& c : report.checks) {
        j["checks"].push_back({{"name", c.name},
                               {"status", to_string(c.status)},
                               {"measured", std::isfinite(c.measured) ? nlohmann::json(c.measured) : nlohmann::json(nullptr)},
                               {"tolerance", c.tolerance},
                               {"detail", c.detail}});
    }
    return j;
}

}  // namespace nlsb
