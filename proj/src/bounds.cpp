#include "nlsb/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "nlsb/error.hpp"

namespace nlsb {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Beyond this |Omega t| cosh/sinh overflow; only the sign of the leading
// exponential matters there.
constexpr double kMaxHyperbolicArg = 700.0;

double eval_zeta_inverted(const ZetaInverted& z, double t) {
    const double tau = z.Omega * t;
    const double c = -z.C_V / (z.Omega * z.Omega);
    if (std::abs(tau) <= kMaxHyperbolicArg) {
        return z.Vdot0 / z.Omega * std::sinh(tau) + z.V0 * std::cosh(tau) + c * (1.0 - std::cosh(tau));
    }
    const double a = z.Vdot0 / z.Omega;
    const double b = z.V0 - c;
    const double lead = tau > 0 ? a + b : b - a;
    if (lead == 0.0) return c;
    return lead > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
}

// Interior critical points of the curve, added to the scan samples.
std::vector<double> critical_points(const BoundCurve& curve) {
    std::vector<double> out;
    std::visit(overloaded{
                   [&](const ParabolaM& c) {
                       if (c.C_I != 0.0) out.push_back(-c.Idot0 / c.C_I);
                   },
                   [&](const ParabolaN& c) {
                       if (c.coef2 != 0.0) out.push_back(-c.coef1 / (2.0 * c.coef2));
                   },
                   [&](const StarkQuarticI&) {},
                   [&](const StarkQuadraticV& c) {
                       if (c.coef2 != 0.0) out.push_back(-c.coef1 / (2.0 * c.coef2));
                   },
                   [&](const ZetaHarmonic& c) {
                       // zeta = a sin(tau) + b cos(tau) + const
                       const double a = c.Vdot0 / c.Omega;
                       const double b = c.V0 - c.C_V / (c.Omega * c.Omega);
                       if (a == 0.0 && b == 0.0) return;
                       const double tau_max = std::atan2(a, b);
                       double tau_min = tau_max + std::numbers::pi;
                       if (tau_min > std::numbers::pi) tau_min -= 2.0 * std::numbers::pi;
                       out.push_back(tau_max / c.Omega);
                       out.push_back(tau_min / c.Omega);
                   },
                   [&](const ZetaInverted& c) {
                       const double a = c.Vdot0 / c.Omega;
                       const double b = c.V0 + c.C_V / (c.Omega * c.Omega);
                       if (std::abs(a) < std::abs(b)) out.push_back(std::atanh(-a / b) / c.Omega);
                   },
               },
               curve);
    return out;
}

double golden_min(const BoundCurve& curve, double lo, double hi, double& fmin) {
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - r * (b - a);
    double d = a + r * (b - a);
    double fc = eval(curve, c, false);
    double fd = eval(curve, d, false);
    for (int it = 0; it < 200 && std::abs(b - a) > 1e-15 * std::max(1.0, std::abs(a) + std::abs(b)); ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = eval(curve, c, false);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = eval(curve, d, false);
        }
    }
    const double t = 0.5 * (a + b);
    fmin = eval(curve, t, false);
    return t;
}

// pos: eval > 0, neg: eval <= 0. Returns the point on the non-positive side.
double bisect(const BoundCurve& curve, double pos, double neg) {
    for (int it = 0; it < 400; ++it) {
        const double scale = std::max(std::abs(pos), std::abs(neg));
        if (std::abs(neg - pos) <= 1e-12 * scale) break;
        const double mid = 0.5 * (pos + neg);
        if (mid == pos || mid == neg) break;
        if (eval(curve, mid, false) > 0.0) {
            pos = mid;
        } else {
            neg = mid;
        }
    }
    return neg;
}

}  // namespace

double ZetaHarmonic::window() const { return std::numbers::pi / Omega; }

ParabolaM parabola_m(const InitialMoments& m) { return {m.C_I, m.Idot0, m.I0}; }

ParabolaN parabola_n(const InitialMoments& m) {
    const double p0 = m.p0_mean;
    const double x0 = m.x0_mean;
    return {0.5 * m.C_I - p0 * p0, m.Idot0 - 2.0 * p0 * x0, m.I0 - x0 * x0};
}

std::pair<StarkQuarticI, StarkQuadraticV> stark_bounds(const InitialMoments& m, const NlsParams& params,
                                                       double alpha) {
    if (params.nu * (params.mu - 2.0) > 0.0) {
        throw Error(ErrorCode::HypothesisViolated, "Stark bounds need nu (mu - 2) <= 0");
    }
    StarkQuarticI quartic{alpha, m.p0_mean, m.energy, m.x0_mean, m.Idot0, m.I0};
    const double lead = m.grad_norm_sq + 2.0 * params.nu / (params.mu + 1.0) * m.lp_power_norm -
                        m.p0_mean * m.p0_mean;
    StarkQuadraticV quadratic{lead, 2.0 * (m.position_momentum_correlation() - m.p0_mean * m.x0_mean), m.V0};
    return {quartic, quadratic};
}

ZetaHarmonic zeta_harmonic(const InitialMoments& m, const Potential& potential) {
    if (!potential.is_harmonic()) throw Error(ErrorCode::InvalidPotential, "zeta_H needs alpha > 0");
    if (!m.C_V) throw Error(ErrorCode::InvalidPotential, "moments carry no C_V");
    return {potential.omega(), m.V0, m.Vdot0, *m.C_V};
}

ZetaInverted zeta_inverted(const InitialMoments& m, const Potential& potential) {
    if (!potential.is_inverted()) throw Error(ErrorCode::InvalidPotential, "zeta_I needs alpha < 0");
    if (!m.C_V) throw Error(ErrorCode::InvalidPotential, "moments carry no C_V");
    return {potential.omega(), m.V0, m.Vdot0, *m.C_V};
}

BoundCurve inertia_bound(const InitialMoments& m, const NlsParams& params, const Potential& potential) {
    switch (potential.kind()) {
        case Potential::Kind::Free: return parabola_m(m);
        case Potential::Kind::Stark: return stark_bounds(m, params, potential.alpha()).first;
        case Potential::Kind::Quadratic:
            // I obeys the same forced oscillator as V with (I0, Idot0, C_I).
            if (potential.alpha() > 0.0) return ZetaHarmonic{potential.omega(), m.I0, m.Idot0, m.C_I};
            return ZetaInverted{potential.omega(), m.I0, m.Idot0, m.C_I};
    }
    return parabola_m(m);
}

BoundCurve variance_bound(const InitialMoments& m, const NlsParams& params, const Potential& potential) {
    switch (potential.kind()) {
        case Potential::Kind::Free: return parabola_n(m);
        case Potential::Kind::Stark: return stark_bounds(m, params, potential.alpha()).second;
        case Potential::Kind::Quadratic:
            if (potential.alpha() > 0.0) return zeta_harmonic(m, potential);
            return zeta_inverted(m, potential);
    }
    return parabola_n(m);
}

double eval(const BoundCurve& curve, double t, bool check_window) {
    return std::visit(
        overloaded{
            [&](const ParabolaM& c) { return 0.5 * c.C_I * t * t + c.Idot0 * t + c.I0; },
            [&](const ParabolaN& c) { return (c.coef2 * t + c.coef1) * t + c.coef0; },
            [&](const StarkQuarticI& c) {
                const double a = c.alpha;
                return (((0.25 * a * a * t - a * c.p0) * t + (2.0 * c.E - 3.0 * a * c.x0)) * t + c.Idot0) * t + c.I0;
            },
            [&](const StarkQuadraticV& c) { return (c.coef2 * t + c.coef1) * t + c.V0; },
            [&](const ZetaHarmonic& c) {
                if (check_window && std::abs(t) > c.window() * (1.0 + 1e-12)) {
                    throw Error(ErrorCode::OutsideValidityWindow,
                                "zeta_H evaluated at t = " + std::to_string(t) + " outside |t| <= pi/Omega");
                }
                const double w = c.Omega * t;
                const double k = c.C_V / (c.Omega * c.Omega);
                return c.Vdot0 / c.Omega * std::sin(w) + c.V0 * std::cos(w) + k * (1.0 - std::cos(w));
            },
            [&](const ZetaInverted& c) { return eval_zeta_inverted(c, t); },
        },
        curve);
}

double harmonic_min(const ZetaHarmonic& z) {
    // zeta_H = a sin(Omega t) + b cos(Omega t) + c. The window |Omega t| <= pi
    // spans a full period, so the sinusoid's minimum c - sqrt(a^2 + b^2) is
    // always attained inside it.
    const double a = z.Vdot0 / z.Omega;
    const double c = z.C_V / (z.Omega * z.Omega);
    const double b = z.V0 - c;
    return c - std::hypot(a, b);
}

std::optional<double> first_zero(const BoundCurve& curve, TimeDirection direction, const ZeroSearch& search) {
    const double f0 = eval(curve, 0.0, false);
    if (!(f0 > 0.0)) throw Error(ErrorCode::DegenerateStart, "bound curve must be positive at t = 0");

    double range = search.horizon;
    double step = range / 1024.0;
    if (const auto* z = std::get_if<ZetaHarmonic>(&curve)) {
        range = z->window();
        step = range / 1024.0;
    } else if (const auto* z = std::get_if<ZetaInverted>(&curve)) {
        range = std::min(search.horizon, kMaxHyperbolicArg / z->Omega);
        step = std::min(range / 1024.0, 1.0 / (8.0 * z->Omega));
    }
    const double sign = direction == TimeDirection::Future ? 1.0 : -1.0;

    // Samples in |t|: a geometric run toward 0, a uniform run, and analytic
    // critical points.
    std::vector<double> samples;
    for (int k = 40; k >= 1; --k) samples.push_back(step * std::ldexp(1.0, -k));
    const auto count = static_cast<std::size_t>(std::ceil(range / step));
    for (std::size_t j = 1; j <= count; ++j) samples.push_back(std::min(range, static_cast<double>(j) * step));
    for (double tc : critical_points(curve)) {
        const double mag = tc * sign;
        if (mag > 0.0 && mag <= range) samples.push_back(mag);
    }
    std::sort(samples.begin(), samples.end());
    samples.erase(std::unique(samples.begin(), samples.end()), samples.end());

    const double touch_tol = 1e-12 * std::max(1.0, std::abs(f0));
    double t_prev2 = 0.0, f_prev2 = f0;
    double t_prev = 0.0, f_prev = f0;
    bool have_prev2 = false;
    for (double mag : samples) {
        const double t = sign * mag;
        const double f = eval(curve, t, false);
        if (std::isnan(f)) return std::nullopt;
        if (f <= 0.0) return bisect(curve, t_prev, t);
        if (have_prev2 && f_prev < f_prev2 && f_prev <= f) {
            double fmin = 0.0;
            const double lo = std::min(t_prev2, t);
            const double hi = std::max(t_prev2, t);
            const double tmin = golden_min(curve, lo, hi, fmin);
            if (fmin <= 0.0) {
                const bool before_prev = std::abs(tmin) < std::abs(t_prev);
                return bisect(curve, before_prev ? t_prev2 : t_prev, tmin);
            }
            if (fmin <= touch_tol) return tmin;
        }
        t_prev2 = t_prev;
        f_prev2 = f_prev;
        t_prev = t;
        f_prev = f;
        have_prev2 = true;
    }
    return std::nullopt;
}

std::string kind_name(const BoundCurve& curve) {
    return std::visit(overloaded{
                          [](const ParabolaM&) { return std::string("ParabolaM"); },
                          [](const ParabolaN&) { return std::string("ParabolaN"); },
                          [](const StarkQuarticI&) { return std::string("StarkQuarticI"); },
                          [](const StarkQuadraticV&) { return std::string("StarkQuadraticV"); },
                          [](const ZetaHarmonic&) { return std::string("ZetaHarmonic"); },
                          [](const ZetaInverted&) { return std::string("ZetaInverted"); },
                      },
                      curve);
}

nlohmann::json to_json(const BoundCurve& curve) {
    nlohmann::json j;
    j["kind"] = kind_name(curve);
    std::visit(overloaded{
                   [&](const ParabolaM& c) {
                       j["C_I"] = c.C_I;
                       j["Idot0"] = c.Idot0;
                       j["I0"] = c.I0;
                   },
                   [&](const ParabolaN& c) {
                       j["coef2"] = c.coef2;
                       j["coef1"] = c.coef1;
                       j["coef0"] = c.coef0;
                   },
                   [&](const StarkQuarticI& c) {
                       j["alpha"] = c.alpha;
                       j["p0"] = c.p0;
                       j["E"] = c.E;
                       j["x0"] = c.x0;
                       j["Idot0"] = c.Idot0;
                       j["I0"] = c.I0;
                   },
                   [&](const StarkQuadraticV& c) {
                       j["coef2"] = c.coef2;
                       j["coef1"] = c.coef1;
                       j["V0"] = c.V0;
                   },
                   [&](const ZetaHarmonic& c) {
                       j["Omega"] = c.Omega;
                       j["V0"] = c.V0;
                       j["Vdot0"] = c.Vdot0;
                       j["C_V"] = c.C_V;
                   },
                   [&](const ZetaInverted& c) {
                       j["Omega"] = c.Omega;
                       j["V0"] = c.V0;
                       j["Vdot0"] = c.Vdot0;
                       j["C_V"] = c.C_V;
                   },
               },
               curve);
    return j;
}

}  // namespace nlsb
