#include "nlsb/criteria.hpp"

#include <cmath>

#include "nlsb/error.hpp"

namespace nlsb {

namespace {

Applicability criterion_hypotheses(const NlsParams& params) {
    if (!(params.nu < 0.0)) return Applicability::no("requires focusing nonlinearity nu < 0");
    if (!(params.mu >= 2.0)) return Applicability::no("requires mu >= 2");
    return Applicability::yes();
}

CriterionVerdict not_applicable(CriterionId id, std::string reason) {
    CriterionVerdict v;
    v.criterion_id = id;
    v.applicability = Applicability::no(std::move(reason));
    return v;
}

BlowupDirection combine(bool future, bool past) {
    if (future && past) return BlowupDirection::Both;
    if (future) return BlowupDirection::Future;
    if (past) return BlowupDirection::Past;
    return BlowupDirection::None;
}

std::optional<double> zero_or_none(const BoundCurve& curve, TimeDirection dir) {
    try {
        return first_zero(curve, dir);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::DegenerateStart) return std::nullopt;
        throw;
    }
}

void attach_bounds(CriterionVerdict& v, const BoundCurve& curve, bool future, bool past) {
    if (future) v.time_bound_future = zero_or_none(curve, TimeDirection::Future);
    if (past) v.time_bound_past = zero_or_none(curve, TimeDirection::Past);
}

std::string join_labels(const std::string& future_label, const std::string& past_label) {
    if (past_label.empty() || past_label == future_label) return future_label;
    const std::string past = past_label + "(past)";
    return future_label.empty() ? past : future_label + "," + past;
}

// Which clause makes the parabola coef2 t^2 + slope t + coef0 (coef0 > 0)
// reach zero for t > 0; empty if none. `primes` selects the i'/ii'/iii' labels.
std::string parabola_clause(double coef2, double slope, double coef0, bool primes,
                            double (*threshold)(double coef2, double coef0)) {
    const std::string tick = primes ? "'" : "";
    if (coef2 < 0.0) return "i" + tick;
    if (coef2 == 0.0 && slope < 0.0) return "ii" + tick;
    if (coef2 > 0.0 && slope <= threshold(coef2, coef0)) return "iii" + tick;
    return {};
}

// Classical clause iii: Idot0 <= -sqrt(2 C_I I0) with coef2 = C_I / 2.
double classical_threshold(double coef2, double coef0) { return -std::sqrt(4.0 * coef2 * coef0); }

// Enhanced clause iii': slope <= -2 sqrt(coef2 * coef0).
double enhanced_threshold(double coef2, double coef0) { return -2.0 * std::sqrt(coef2 * coef0); }

double free_energy_like(const InitialMoments& m, const NlsParams& params) {
    return 0.5 * m.grad_norm_sq + params.nu / (params.mu + 1.0) * m.lp_power_norm;
}

Applicability literature_applicability(const NlsParams& params) {
    if (params.nu < 0.0 && params.mu < 2.0) return Applicability::no("requires mu >= 2");
    return Applicability::yes();
}

}  // namespace

std::string to_string(CriterionId id) {
    switch (id) {
        case CriterionId::ClassicalFree: return "ClassicalFree";
        case CriterionId::EnhancedFree: return "EnhancedFree";
        case CriterionId::StarkEnhanced: return "StarkEnhanced";
        case CriterionId::HarmonicEnhanced: return "HarmonicEnhanced";
        case CriterionId::InvertedEnhanced: return "InvertedEnhanced";
        case CriterionId::CarlesStark16bis: return "CarlesStark16bis";
        case CriterionId::CarlesHarmonic25: return "CarlesHarmonic25";
        case CriterionId::CarlesInverted26: return "CarlesInverted26";
    }
    return "Unknown";
}

std::string to_string(BlowupDirection d) {
    switch (d) {
        case BlowupDirection::Future: return "Future";
        case BlowupDirection::Past: return "Past";
        case BlowupDirection::Both: return "Both";
        case BlowupDirection::Either: return "Either";
        case BlowupDirection::None: return "None";
    }
    return "None";
}

nlohmann::json to_json(const CriterionVerdict& v) {
    nlohmann::json j;
    j["criterion_id"] = to_string(v.criterion_id);
    j["applicability"] = v.applicability.applicable ? "Applicable" : "NotApplicable";
    if (!v.applicability.applicable) j["applicability_reason"] = v.applicability.reason;
    j["fired"] = v.fired;
    j["direction"] = to_string(v.direction);
    j["sub_condition"] = v.sub_condition;
    j["time_bound_future"] = v.time_bound_future ? nlohmann::json(*v.time_bound_future) : nlohmann::json(nullptr);
    j["time_bound_past"] = v.time_bound_past ? nlohmann::json(*v.time_bound_past) : nlohmann::json(nullptr);
    if (v.heuristic_direction) j["heuristic_direction"] = to_string(*v.heuristic_direction);
    return j;
}

CriterionVerdict classical_free(const InitialMoments& m, const NlsParams& params, const Potential& potential) {
    const auto id = CriterionId::ClassicalFree;
    if (!potential.is_free()) return not_applicable(id, "requires the free potential");
    if (auto app = criterion_hypotheses(params); !app.applicable) return not_applicable(id, app.reason);

    const double coef2 = 0.5 * m.C_I;
    const auto future = parabola_clause(coef2, m.Idot0, m.I0, false, classical_threshold);
    // Past: the same clauses for t -> -t, i.e. Idot0 -> -Idot0.
    const auto past = parabola_clause(coef2, -m.Idot0, m.I0, false, classical_threshold);

    CriterionVerdict v;
    v.criterion_id = id;
    v.fired = !future.empty() || !past.empty();
    v.direction = combine(!future.empty(), !past.empty());
    v.sub_condition = join_labels(future, past);
    attach_bounds(v, parabola_m(m), !future.empty(), !past.empty());
    return v;
}

CriterionVerdict enhanced_free(const InitialMoments& m, const NlsParams& params, const Potential& potential) {
    const auto id = CriterionId::EnhancedFree;
    if (!potential.is_free()) return not_applicable(id, "requires the free potential");
    if (auto app = criterion_hypotheses(params); !app.applicable) return not_applicable(id, app.reason);

    const auto n = parabola_n(m);
    const auto future = parabola_clause(n.coef2, n.coef1, n.coef0, true, enhanced_threshold);
    const auto past = parabola_clause(n.coef2, -n.coef1, n.coef0, true, enhanced_threshold);

    CriterionVerdict v;
    v.criterion_id = id;
    v.fired = !future.empty() || !past.empty();
    v.direction = combine(!future.empty(), !past.empty());
    v.sub_condition = join_labels(future, past);
    attach_bounds(v, n, !future.empty(), !past.empty());
    return v;
}

CriterionVerdict stark_enhanced(const InitialMoments& m, const NlsParams& params, const Potential& potential) {
    const auto id = CriterionId::StarkEnhanced;
    if (!potential.is_stark()) return not_applicable(id, "requires a Stark potential");
    if (auto app = criterion_hypotheses(params); !app.applicable) return not_applicable(id, app.reason);

    const auto [quartic, quadratic] = stark_bounds(m, params, potential.alpha());
    const double lhs = m.grad_norm_sq + 2.0 * params.nu / (params.mu + 1.0) * m.lp_power_norm;
    const double p0_sq = m.p0_mean * m.p0_mean;
    const double cross = m.position_momentum_correlation() - m.p0_mean * m.x0_mean;

    CriterionVerdict v;
    v.criterion_id = id;
    if (lhs < p0_sq) {
        v.fired = true;
        v.direction = BlowupDirection::Both;
        v.sub_condition = "i";
        attach_bounds(v, quadratic, true, true);
        return v;
    }
    const bool ii = lhs == p0_sq && cross != 0.0;
    const bool iii = lhs > p0_sq && cross * cross > (lhs - p0_sq) * m.V0;
    if (ii || iii) {
        v.fired = true;
        v.direction = BlowupDirection::Either;
        v.sub_condition = ii ? "ii" : "iii";
        attach_bounds(v, quadratic, true, true);
        v.heuristic_direction = quadratic.coef1 < 0.0 ? BlowupDirection::Future : BlowupDirection::Past;
    }
    return v;
}

CriterionVerdict harmonic_enhanced(const InitialMoments& m, const NlsParams& params, const Potential& potential) {
    const auto id = CriterionId::HarmonicEnhanced;
    if (!potential.is_harmonic()) return not_applicable(id, "requires a harmonic potential alpha > 0");
    if (auto app = criterion_hypotheses(params); !app.applicable) return not_applicable(id, app.reason);

    const auto zeta = zeta_harmonic(m, potential);
    const double omega_sq = zeta.Omega * zeta.Omega;
    const double c_v = zeta.C_V;

    CriterionVerdict v;
    v.criterion_id = id;
    // zeta_H(+-pi/Omega) = 2 C_V / Omega^2 - V0
    if (2.0 * c_v / omega_sq - m.V0 <= 0.0) {
        v.fired = true;
        v.direction = BlowupDirection::Both;
        v.sub_condition = "endpoint";
        attach_bounds(v, zeta, true, true);
        return v;
    }
    // min over the window of zeta_H is <= 0
    if (m.Vdot0 * m.Vdot0 + m.V0 * m.V0 * omega_sq - 2.0 * m.V0 * c_v >= 0.0) {
        v.fired = true;
        v.direction = BlowupDirection::Either;
        v.sub_condition = "minimum";
        attach_bounds(v, zeta, true, true);
        v.heuristic_direction = m.Vdot0 < 0.0 ? BlowupDirection::Future : BlowupDirection::Past;
    }
    return v;
}

CriterionVerdict inverted_enhanced(const InitialMoments& m, const NlsParams& params, const Potential& potential) {
    const auto id = CriterionId::InvertedEnhanced;
    if (!potential.is_inverted()) return not_applicable(id, "requires an inverted potential alpha < 0");
    if (auto app = criterion_hypotheses(params); !app.applicable) return not_applicable(id, app.reason);

    const auto zeta = zeta_inverted(m, potential);
    const double omega_sq = zeta.Omega * zeta.Omega;
    const double a = m.Vdot0 / zeta.Omega;
    const double b = m.V0 + zeta.C_V / omega_sq;
    const double c = -zeta.C_V / omega_sq;

    CriterionVerdict v;
    v.criterion_id = id;
    bool future = false;
    bool past = false;
    if (b < -std::abs(a)) {
        v.sub_condition = "i";
        future = past = true;
    } else if (std::abs(a) < b && std::sqrt(b * b - a * a) + c <= 0.0) {
        v.sub_condition = "ii";
        (a < 0.0 ? future : past) = true;
    } else if (std::abs(a) > std::abs(b)) {
        v.sub_condition = "iii";
        (a < 0.0 ? future : past) = true;
    } else if (std::abs(a) == std::abs(b) && b * c < 0.0) {
        v.sub_condition = "iv";
        (a < 0.0 ? future : past) = true;
    }
    v.fired = future || past;
    v.direction = combine(future, past);
    attach_bounds(v, zeta, future, past);
    return v;
}

std::vector<CriterionVerdict> carles_conditions(const InitialMoments& m, const NlsParams& params,
                                                const Potential& potential) {
    const double lhs = free_energy_like(m, params);
    const auto app = literature_applicability(params);
    const double n2 = m.norm * m.norm;

    auto make = [&](CriterionId id, bool matches, const char* requirement, bool condition) {
        if (!matches) return not_applicable(id, requirement);
        if (!app.applicable) return not_applicable(id, app.reason);
        CriterionVerdict v;
        v.criterion_id = id;
        v.fired = condition;
        v.direction = condition ? BlowupDirection::Both : BlowupDirection::None;
        v.sub_condition = condition ? "i" : "";
        return v;
    };

    std::vector<CriterionVerdict> out;
    out.push_back(make(CriterionId::CarlesStark16bis, potential.is_stark(), "requires a Stark potential", lhs < 0.0));
    out.push_back(make(CriterionId::CarlesHarmonic25, potential.is_harmonic(),
                       "requires a harmonic potential alpha > 0", lhs <= 0.0));
    bool inverted_condition = false;
    if (potential.is_inverted()) {
        const double abs_alpha = std::abs(potential.alpha());
        const double x_norm_sq = m.I0 * n2;
        const double correlation = m.position_momentum_correlation() * n2;
        inverted_condition = lhs < -abs_alpha * x_norm_sq - std::sqrt(2.0 * abs_alpha) * std::abs(correlation);
    }
    out.push_back(make(CriterionId::CarlesInverted26, potential.is_inverted(),
                       "requires an inverted potential alpha < 0", inverted_condition));
    return out;
}

std::vector<CriterionVerdict> evaluate_all(const InitialMoments& m, const NlsParams& params,
                                           const Potential& potential) {
    std::vector<CriterionVerdict> out;
    out.push_back(classical_free(m, params, potential));
    out.push_back(enhanced_free(m, params, potential));
    out.push_back(stark_enhanced(m, params, potential));
    out.push_back(harmonic_enhanced(m, params, potential));
    out.push_back(inverted_enhanced(m, params, potential));
    for (auto& v : carles_conditions(m, params, potential)) out.push_back(std::move(v));
    return out;
}

namespace {

const CriterionVerdict& find(const std::vector<CriterionVerdict>& vs, CriterionId id) {
    for (const auto& v : vs) {
        if (v.criterion_id == id) return v;
    }
    throw Error(ErrorCode::InvalidScenario, "missing verdict " + to_string(id));
}

ImplicationCheck implication(const std::vector<CriterionVerdict>& vs, CriterionId from, CriterionId to,
                             const std::string& required_clause) {
    const auto& a = find(vs, from);
    const auto& b = find(vs, to);
    ImplicationCheck c;
    c.antecedent = from;
    c.consequent = to;
    c.name = to_string(from) + " => " + to_string(to) + (required_clause.empty() ? "" : "(" + required_clause + ")");
    c.applicable = a.applicability.applicable && b.applicability.applicable;
    if (!c.applicable) return c;
    c.antecedent_fired = a.fired;
    c.consequent_fired = b.fired && (required_clause.empty() || b.sub_condition == required_clause);
    c.holds = !c.antecedent_fired || c.consequent_fired;
    return c;
}

}  // namespace

SharpnessReport sharpness_compare(const InitialMoments& m, const NlsParams& params, const Potential& potential) {
    SharpnessReport r;
    r.moments = m;
    r.verdicts = evaluate_all(m, params, potential);
    r.implications.push_back(implication(r.verdicts, CriterionId::ClassicalFree, CriterionId::EnhancedFree, ""));
    r.implications.push_back(implication(r.verdicts, CriterionId::CarlesStark16bis, CriterionId::StarkEnhanced, "i"));
    r.implications.push_back(
        implication(r.verdicts, CriterionId::CarlesHarmonic25, CriterionId::HarmonicEnhanced, "endpoint"));
    r.implications.push_back(
        implication(r.verdicts, CriterionId::CarlesInverted26, CriterionId::InvertedEnhanced, "i"));

    try {
        r.inertia_curve = inertia_bound(m, params, potential);
        r.variance_curve = variance_bound(m, params, potential);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::HypothesisViolated) throw;
        r.notes.push_back(std::string("no bound curves: ") + e.what());
    }
    if (r.inertia_curve) r.T_I = zero_or_none(*r.inertia_curve, TimeDirection::Future);
    if (r.variance_curve) r.T_V = zero_or_none(*r.variance_curve, TimeDirection::Future);
    if (r.T_I && r.T_V) r.ordering_holds = std::abs(*r.T_V) <= std::abs(*r.T_I) + 1e-9;
    if (r.inertia_curve && !r.T_I) r.notes.push_back("inertia bound: no zero within horizon");
    if (r.variance_curve && !r.T_V) r.notes.push_back("variance bound: no zero within horizon");

    if (potential.is_harmonic() && m.C_V) {
        const double omega_sq = potential.omega() * potential.omega();
        const bool endpoint = 2.0 * *m.C_V / omega_sq - m.V0 <= 0.0;
        const bool minimum = m.Vdot0 * m.Vdot0 + m.V0 * m.V0 * omega_sq - 2.0 * m.V0 * *m.C_V >= 0.0;
        if (endpoint && minimum) {
            r.notes.push_back("harmonic: endpoint and minimum conditions both hold; endpoint takes precedence");
        }
    }
    if (!params.focusing() || params.mu < 2.0) {
        r.notes.push_back("bound curves are upper bounds only for nu < 0 and mu >= 2");
    }
    return r;
}

SharpnessReport sharpness_compare(const Scenario& scenario) {
    scenario.validate();
    const auto psi0 = build_initial_state(scenario.grid, scenario.ic);
    const auto m = initial_moments(psi0, scenario.params, scenario.potential);
    return sharpness_compare(m, scenario.params, scenario.potential);
}

nlohmann::json to_json(const SharpnessReport& r) {
    nlohmann::json j;
    auto& mj = j["moments"];
    mj["norm"] = r.moments.norm;
    mj["energy"] = r.moments.energy;
    mj["I0"] = r.moments.I0;
    mj["Idot0"] = r.moments.Idot0;
    mj["x0_mean"] = r.moments.x0_mean;
    mj["p0_mean"] = r.moments.p0_mean;
    mj["V0"] = r.moments.V0;
    mj["Vdot0"] = r.moments.Vdot0;
    mj["C_I"] = r.moments.C_I;
    mj["C_V"] = r.moments.C_V ? nlohmann::json(*r.moments.C_V) : nlohmann::json(nullptr);
    mj["lp_power_norm"] = r.moments.lp_power_norm;
    mj["grad_norm_sq"] = r.moments.grad_norm_sq;

    j["verdicts"] = nlohmann::json::array();
    for (const auto& v : r.verdicts) j["verdicts"].push_back(to_json(v));
    j["implications"] = nlohmann::json::array();
    for (const auto& c : r.implications) {
        j["implications"].push_back({{"name", c.name},
                                     {"applicable", c.applicable},
                                     {"antecedent_fired", c.antecedent_fired},
                                     {"consequent_fired", c.consequent_fired},
                                     {"holds", c.holds}});
    }
    j["inertia_curve"] = r.inertia_curve ? to_json(*r.inertia_curve) : nlohmann::json(nullptr);
    j["variance_curve"] = r.variance_curve ? to_json(*r.variance_curve) : nlohmann::json(nullptr);
    j["T_I"] = r.T_I ? nlohmann::json(*r.T_I) : nlohmann::json(nullptr);
    j["T_V"] = r.T_V ? nlohmann::json(*r.T_V) : nlohmann::json(nullptr);
    j["ordering_holds"] = r.ordering_holds;
    j["notes"] = r.notes;
    return j;
}

}  // namespace nlsb
