#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "nlsb/model.hpp"
#include "nlsb/observables.hpp"

namespace nlsb {

enum class TimeDirection { Future, Past };

// M(t) = C_I t^2 / 2 + Idot0 t + I0, upper bound on I(t) in the free case.
struct ParabolaM {
    double C_I = 0.0;
    double Idot0 = 0.0;
    double I0 = 0.0;
};

// N(t) = coef2 t^2 + coef1 t + coef0, upper bound on V(t) in the free case.
struct ParabolaN {
    double coef2 = 0.0;
    double coef1 = 0.0;
    double coef0 = 0.0;
};

// alpha^2 t^4 / 4 - alpha p0 t^3 + (2E - 3 alpha x0) t^2 + Idot0 t + I0
struct StarkQuarticI {
    double alpha = 0.0;
    double p0 = 0.0;
    double E = 0.0;
    double x0 = 0.0;
    double Idot0 = 0.0;
    double I0 = 0.0;
};

// coef2 t^2 + coef1 t + V0
struct StarkQuadraticV {
    double coef2 = 0.0;
    double coef1 = 0.0;
    double V0 = 0.0;
};

// Solution of z'' + Omega^2 z = C_V with z(0) = V0, z'(0) = Vdot0. Bounds the
// variance only on |t| <= pi/Omega.
struct ZetaHarmonic {
    double Omega = 0.0;
    double V0 = 0.0;
    double Vdot0 = 0.0;
    double C_V = 0.0;

    double window() const;
};

// Solution of z'' - Omega^2 z = C_V with z(0) = V0, z'(0) = Vdot0.
struct ZetaInverted {
    double Omega = 0.0;
    double V0 = 0.0;
    double Vdot0 = 0.0;
    double C_V = 0.0;
};

using BoundCurve = std::variant<ParabolaM, ParabolaN, StarkQuarticI, StarkQuadraticV, ZetaHarmonic, ZetaInverted>;

ParabolaM parabola_m(const InitialMoments& m);
ParabolaN parabola_n(const InitialMoments& m);

/// Stark bounds on I and V. Throws HypothesisViolated when nu (mu - 2) > 0.
std::pair<StarkQuarticI, StarkQuadraticV> stark_bounds(const InitialMoments& m, const NlsParams& params,
                                                       double alpha);

/// Variance bound for a quadratic potential; requires moments.C_V.
ZetaHarmonic zeta_harmonic(const InitialMoments& m, const Potential& potential);
ZetaInverted zeta_inverted(const InitialMoments& m, const Potential& potential);

/// Upper bound on I(t) for the given potential (M, the Stark quartic, or the
/// zeta curve driven by I0, Idot0, C_I).
BoundCurve inertia_bound(const InitialMoments& m, const NlsParams& params, const Potential& potential);
/// Upper bound on V(t) (N, the Stark quadratic, or zeta_H / zeta_I).
BoundCurve variance_bound(const InitialMoments& m, const NlsParams& params, const Potential& potential);

/// Evaluates the curve. ZetaHarmonic throws OutsideValidityWindow for
/// |t| > pi/Omega unless check_window is false.
double eval(const BoundCurve& curve, double t, bool check_window = true);

/// Minimum of zeta_H over [-pi/Omega, pi/Omega].
double harmonic_min(const ZetaHarmonic& curve);

struct ZeroSearch {
    // Search range for curves without a natural window.
    double horizon = 1e3;
};

/// Smallest |t| in the given direction with eval(t) <= 0, or nullopt when none
/// is found in the validity window / horizon. Throws DegenerateStart if eval(0) <= 0.
std::optional<double> first_zero(const BoundCurve& curve, TimeDirection direction, const ZeroSearch& search = {});

std::string kind_name(const BoundCurve& curve);
nlohmann::json to_json(const BoundCurve& curve);

}  // namespace nlsb
