#include "nlsb/inequalities.hpp"

#include <cmath>

#include "nlsb/error.hpp"
#include "nlsb/observables.hpp"

namespace nlsb {

namespace {

double checked_norm(const WaveFunction& f) {
    const double n = norm(f);
    if (!(n > 0.0)) throw Error(ErrorCode::ZeroNorm, "inequality check on the zero state");
    return n;
}

}  // namespace

double gamma(const WaveFunction& f, double y) {
    double sum = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double d = f.grid.node(j) - y;
        sum += d * d * std::norm(f.values[j]);
    }
    return sum * f.grid.dx();
}

double gamma_argmin(const WaveFunction& f) {
    checked_norm(f);
    return mean_position(f);
}

InequalitySides gn_sup_check(const WaveFunction& f) {
    const double n = checked_norm(f);
    double peak = 0.0;
    for (const auto& z : f.values) peak = std::max(peak, std::abs(z));
    const double g = std::sqrt(grad_norm_sq(f));
    return {peak, std::sqrt(2.0) * std::sqrt(g) * std::sqrt(n)};
}

double interpolation_constant(double q) { return std::pow(2.0, q + 1.0) * (q + 1.0); }

InequalitySides interpolation_check(const WaveFunction& f, double y, double q) {
    if (!(q >= 0.0)) throw Error(ErrorCode::InvalidParams, "interpolation exponent q must be >= 0");
    const double n = checked_norm(f);
    const double g = std::sqrt(grad_norm_sq(f));
    const double lhs = lp_power_norm(f, q);
    const double rhs = interpolation_constant(q) * std::sqrt(gamma(f, y)) * std::pow(n, q) * std::pow(g, q + 1.0);
    return {lhs, rhs};
}

}  // namespace nlsb
