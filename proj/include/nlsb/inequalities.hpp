#pragma once

#include <algorithm>

#include "nlsb/model.hpp"

namespace nlsb {

struct InequalitySides {
    double lhs = 0.0;
    double rhs = 0.0;

    bool holds(double rel_slack = 1e-10) const { return lhs <= rhs + rel_slack * std::max(1.0, rhs); }
};

/// Gamma(y) = <f, (x - y)^2 f>, not divided by the norm.
double gamma(const WaveFunction& f, double y);

/// Minimizer of gamma over y, i.e. <f, x f> / ||f||^2.
double gamma_argmin(const WaveFunction& f);

/// (max |f|, sqrt(2) ||f'||^(1/2) ||f||^(1/2)). Throws ZeroNorm.
InequalitySides gn_sup_check(const WaveFunction& f);

/// Constant 2^(q+1) (q+1) used by the interpolation check.
double interpolation_constant(double q);

/// (||f||_{2q+2}^{2q+2}, C sqrt(Gamma(y)) ||f||^q ||f'||^(q+1)). Throws ZeroNorm,
/// InvalidParams for q < 0.
InequalitySides interpolation_check(const WaveFunction& f, double y, double q);

}  // namespace nlsb
