#pragma once

#include "nlsb/model.hpp"

namespace nlsb {

/// Expectation values (<x>, <p>) at one instant.
struct ClassicalState {
    double x = 0.0;
    double p = 0.0;
};

/// Closed-form solution of d<x>/dt = <p>, d<p>/dt = -<V'> for the free, Stark
/// and quadratic potentials. Independent of the nonlinearity.
ClassicalState classical_trajectory(const Potential& potential, double x0, double p0, double t);

/// p^2/2 + V(x), conserved along classical_trajectory.
double classical_energy(const Potential& potential, const ClassicalState& state);

}  // namespace nlsb
