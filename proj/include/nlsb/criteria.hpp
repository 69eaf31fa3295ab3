#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlsb/bounds.hpp"
#include "nlsb/model.hpp"
#include "nlsb/observables.hpp"

namespace nlsb {

enum class CriterionId {
    ClassicalFree,
    EnhancedFree,
    StarkEnhanced,
    HarmonicEnhanced,
    InvertedEnhanced,
    CarlesStark16bis,
    CarlesHarmonic25,
    CarlesInverted26,
};

inline constexpr CriterionId kAllCriteria[] = {
    CriterionId::ClassicalFree,    CriterionId::EnhancedFree,     CriterionId::StarkEnhanced,
    CriterionId::HarmonicEnhanced, CriterionId::InvertedEnhanced, CriterionId::CarlesStark16bis,
    CriterionId::CarlesHarmonic25, CriterionId::CarlesInverted26,
};

enum class BlowupDirection { Future, Past, Both, Either, None };

std::string to_string(CriterionId id);
std::string to_string(BlowupDirection d);

struct Applicability {
    bool applicable = true;
    std::string reason;  // empty when applicable

    static Applicability yes() { return {}; }
    static Applicability no(std::string why) { return {false, std::move(why)}; }

    bool operator==(const Applicability&) const = default;
};

struct CriterionVerdict {
    CriterionId criterion_id = CriterionId::ClassicalFree;
    bool fired = false;
    BlowupDirection direction = BlowupDirection::None;
    std::string sub_condition;
    std::optional<double> time_bound_future;  // > 0
    std::optional<double> time_bound_past;    // < 0
    // Only for Either verdicts: guess from the sign of the bound's linear coefficient.
    std::optional<BlowupDirection> heuristic_direction;
    Applicability applicability;

    bool operator==(const CriterionVerdict&) const = default;
};

nlohmann::json to_json(const CriterionVerdict& v);

/// Zakharov-Glassey criterion on I(t) <= M(t), free potential.
CriterionVerdict classical_free(const InitialMoments& m, const NlsParams& params,
                                const Potential& potential = Potential::free());

/// Enhanced criterion on V(t) <= N(t), free potential.
CriterionVerdict enhanced_free(const InitialMoments& m, const NlsParams& params,
                               const Potential& potential = Potential::free());

CriterionVerdict stark_enhanced(const InitialMoments& m, const NlsParams& params, const Potential& potential);
CriterionVerdict harmonic_enhanced(const InitialMoments& m, const NlsParams& params, const Potential& potential);
CriterionVerdict inverted_enhanced(const InitialMoments& m, const NlsParams& params, const Potential& potential);

/// The three literature conditions, always in the order Stark, harmonic, inverted.
std::vector<CriterionVerdict> carles_conditions(const InitialMoments& m, const NlsParams& params,
                                                const Potential& potential);

/// All eight verdicts in kAllCriteria order; mismatched potentials are NotApplicable.
std::vector<CriterionVerdict> evaluate_all(const InitialMoments& m, const NlsParams& params,
                                           const Potential& potential);

struct ImplicationCheck {
    std::string name;  // "<antecedent> => <consequent>"
    CriterionId antecedent;
    CriterionId consequent;
    bool applicable = false;
    bool antecedent_fired = false;
    bool consequent_fired = false;
    bool holds = true;
};

struct SharpnessReport {
    InitialMoments moments;
    std::vector<CriterionVerdict> verdicts;
    std::vector<ImplicationCheck> implications;
    std::optional<BoundCurve> inertia_curve;
    std::optional<BoundCurve> variance_curve;
    std::optional<double> T_I;  // future zero of the inertia bound
    std::optional<double> T_V;  // future zero of the variance bound
    bool ordering_holds = true;  // |T_V| <= |T_I| whenever both exist
    std::vector<std::string> notes;
};

SharpnessReport sharpness_compare(const InitialMoments& m, const NlsParams& params, const Potential& potential);
SharpnessReport sharpness_compare(const Scenario& scenario);

nlohmann::json to_json(const SharpnessReport& report);

}  // namespace nlsb
