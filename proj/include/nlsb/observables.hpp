#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlsb/model.hpp"

namespace nlsb {

/// Scalar functionals of the initial state feeding every blow-up criterion.
/// Expectation values (x0_mean, p0_mean, I0, V0 and their rates) are divided
/// by the squared norm; the energy and Lebesgue norms are not.
struct InitialMoments {
    double norm = 0.0;
    double energy = 0.0;
    double I0 = 0.0;
    double Idot0 = 0.0;
    double x0_mean = 0.0;
    double p0_mean = 0.0;
    double V0 = 0.0;
    double Vdot0 = 0.0;
    double C_I = 0.0;
    // Set for Free (alpha = 0) and Quadratic potentials, unset for Stark.
    std::optional<double> C_V;
    double lp_power_norm = 0.0;
    double grad_norm_sq = 0.0;

    // Re<x psi0, p psi0> / N^2, i.e. Idot0 / 2.
    double position_momentum_correlation() const { return 0.5 * Idot0; }

    bool operator==(const InitialMoments&) const = default;
};

/// The independent functionals from which InitialMoments is assembled.
struct MomentPrimitives {
    double norm = 1.0;
    double grad_norm_sq = 0.0;
    double lp_power_norm = 0.0;
    double I0 = 0.0;
    double x0_mean = 0.0;
    double p0_mean = 0.0;
    double correlation = 0.0;  // Re<x psi0, p psi0> / N^2
};

/// Builds the derived fields (energy, C_I, V0, Vdot0, C_V) from primitives.
/// The energy uses <psi, V psi> = N^2 * alpha * x0_mean (Stark) or N^2 * alpha * I0 (Quadratic).
InitialMoments assemble_moments(const MomentPrimitives& prims, const NlsParams& params, const Potential& potential);

struct ObservableRecord {
    double t = 0.0;
    double norm = 0.0;
    double energy = 0.0;
    double x_mean = 0.0;
    double p_mean = 0.0;
    double I = 0.0;
    double V = 0.0;
    double lp_power_norm = 0.0;
    double grad_norm = 0.0;
    double virial_residual = 0.0;
};

double norm(const WaveFunction& psi);
double norm_sq(const WaveFunction& psi);
// Integral of |psi|^(2 mu + 2); mu = 0 gives the squared L2 norm.
double lp_power_norm(const WaveFunction& psi, double mu);
double grad_norm_sq(const WaveFunction& psi);
double mean_position(const WaveFunction& psi);
double mean_momentum(const WaveFunction& psi);
double moment_of_inertia(const WaveFunction& psi);
double variance(const WaveFunction& psi);
double potential_energy(const WaveFunction& psi, const Potential& potential);
double energy(const WaveFunction& psi, const NlsParams& params, const Potential& potential);
double idot0(const WaveFunction& psi0);
double vdot0(const WaveFunction& psi0);

InitialMoments initial_moments(const WaveFunction& psi0, const NlsParams& params, const Potential& potential);

/// Right-hand side of the virial identity for d^2 I / dt^2 (hbar = m = 1).
double virial_rhs(const WaveFunction& psi, const NlsParams& params, const Potential& potential);

/// Same right-hand side from already measured functionals.
double virial_rhs(double energy, double lp_power_norm, double x_mean, double I, const NlsParams& params,
                  const Potential& potential);

/// Every observable at one instant; virial_residual is left NaN (it needs neighbours).
ObservableRecord measure(const WaveFunction& psi, double t, const NlsParams& params, const Potential& potential);

inline constexpr const char* kRecordCsvHeader = "t,norm,energy,x_mean,p_mean,I,V,lp_power_norm,grad_norm,virial_residual";

/// One CSV row, 17 significant digits, '.' radix, no trailing newline.
std::string to_csv_row(const ObservableRecord& record);

/// Formats a double with 17 significant digits independent of the locale.
std::string format_double(double value);

}  // namespace nlsb
