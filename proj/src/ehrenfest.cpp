#include "nlsb/ehrenfest.hpp"

#include <cmath>

namespace nlsb {

ClassicalState classical_trajectory(const Potential& potential, double x0, double p0, double t) {
    switch (potential.kind()) {
        case Potential::Kind::Free:
            return {x0 + p0 * t, p0};
        case Potential::Kind::Stark: {
            const double a = potential.alpha();
            return {-0.5 * a * t * t + p0 * t + x0, -a * t + p0};
        }
        case Potential::Kind::Quadratic: {
            const double lam = potential.lambda();
            if (potential.alpha() > 0.0) {
                const double c = std::cos(lam * t);
                const double s = std::sin(lam * t);
                return {x0 * c + p0 / lam * s, -lam * x0 * s + p0 * c};
            }
            const double c = std::cosh(lam * t);
            const double s = std::sinh(lam * t);
            return {x0 * c + p0 / lam * s, lam * x0 * s + p0 * c};
        }
    }
    return {x0, p0};
}

double classical_energy(const Potential& potential, const ClassicalState& state) {
    return 0.5 * state.p * state.p + potential.value(state.x);
}

}  // namespace nlsb
