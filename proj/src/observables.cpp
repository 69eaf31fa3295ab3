#include "nlsb/observables.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "nlsb/error.hpp"
#include "nlsb/spectral.hpp"

namespace nlsb {

namespace {

double checked_norm_sq(const WaveFunction& psi) {
    const double n2 = norm_sq(psi);
    if (!(n2 > 0.0)) throw Error(ErrorCode::ZeroNorm, "state has zero norm");
    return n2;
}

// dx * sum x^power |psi|^2
double weighted_density(const WaveFunction& psi, int power) {
    const auto& g = psi.grid;
    double sum = 0.0;
    for (std::size_t j = 0; j < psi.size(); ++j) {
        const double x = g.node(j);
        sum += (power == 1 ? x : x * x) * std::norm(psi.values[j]);
    }
    return sum * g.dx();
}

// dx * sum conj(x psi) (-i psi') = <x psi, p psi>
Complex position_momentum(const WaveFunction& psi, const std::vector<Complex>& dpsi) {
    const auto& g = psi.grid;
    Complex sum{};
    for (std::size_t j = 0; j < psi.size(); ++j) {
        sum += g.node(j) * std::conj(psi.values[j]) * Complex(0.0, -1.0) * dpsi[j];
    }
    return sum * g.dx();
}

}  // namespace

InitialMoments assemble_moments(const MomentPrimitives& prims, const NlsParams& params, const Potential& potential) {
    InitialMoments m;
    const double n2 = prims.norm * prims.norm;
    m.norm = prims.norm;
    m.grad_norm_sq = prims.grad_norm_sq;
    m.lp_power_norm = prims.lp_power_norm;
    m.I0 = prims.I0;
    m.x0_mean = prims.x0_mean;
    m.p0_mean = prims.p0_mean;
    m.Idot0 = 2.0 * prims.correlation;

    double potential_term = 0.0;
    if (potential.is_stark()) potential_term = potential.alpha() * prims.x0_mean * n2;
    if (potential.is_quadratic()) potential_term = potential.alpha() * prims.I0 * n2;
    m.energy = 0.5 * prims.grad_norm_sq + potential_term + params.nu / (params.mu + 1.0) * prims.lp_power_norm;

    m.C_I = 4.0 * m.energy;
    m.V0 = m.I0 - m.x0_mean * m.x0_mean;
    m.Vdot0 = m.Idot0 - 2.0 * m.x0_mean * m.p0_mean;
    if (potential.is_free()) {
        m.C_V = m.C_I - 2.0 * m.p0_mean * m.p0_mean;
    } else if (potential.is_quadratic()) {
        m.C_V = -2.0 * m.p0_mean * m.p0_mean - 4.0 * potential.alpha() * m.x0_mean * m.x0_mean + m.C_I;
    }
    return m;
}

double norm_sq(const WaveFunction& psi) {
    double sum = 0.0;
    for (const auto& z : psi.values) sum += std::norm(z);
    return sum * psi.grid.dx();
}

double norm(const WaveFunction& psi) { return std::sqrt(norm_sq(psi)); }

double lp_power_norm(const WaveFunction& psi, double mu) {
    double sum = 0.0;
    for (const auto& z : psi.values) sum += std::pow(std::norm(z), mu + 1.0);
    return sum * psi.grid.dx();
}

double grad_norm_sq(const WaveFunction& psi) {
    const auto d = spectral_derivative(psi);
    double sum = 0.0;
    for (const auto& z : d) sum += std::norm(z);
    return sum * psi.grid.dx();
}

double mean_position(const WaveFunction& psi) {
    const double n2 = checked_norm_sq(psi);
    return weighted_density(psi, 1) / n2;
}

double mean_momentum(const WaveFunction& psi) {
    const double n2 = checked_norm_sq(psi);
    const auto d = spectral_derivative(psi);
    double sum = 0.0;
    for (std::size_t j = 0; j < psi.size(); ++j) {
        sum += (std::conj(psi.values[j]) * Complex(0.0, -1.0) * d[j]).real();
    }
    return sum * psi.grid.dx() / n2;
}

double moment_of_inertia(const WaveFunction& psi) {
    const double n2 = checked_norm_sq(psi);
    return weighted_density(psi, 2) / n2;
}

double variance(const WaveFunction& psi) {
    const double n2 = checked_norm_sq(psi);
    const double xm = weighted_density(psi, 1) / n2;
    return weighted_density(psi, 2) / n2 - xm * xm;
}

double potential_energy(const WaveFunction& psi, const Potential& potential) {
    if (potential.is_free()) return 0.0;
    double sum = 0.0;
    for (std::size_t j = 0; j < psi.size(); ++j) {
        sum += potential.value(psi.grid.node(j)) * std::norm(psi.values[j]);
    }
    return sum * psi.grid.dx();
}

double energy(const WaveFunction& psi, const NlsParams& params, const Potential& potential) {
    checked_norm_sq(psi);
    return 0.5 * grad_norm_sq(psi) + potential_energy(psi, potential) +
           params.nu / (params.mu + 1.0) * lp_power_norm(psi, params.mu);
}

double idot0(const WaveFunction& psi0) {
    const double n2 = checked_norm_sq(psi0);
    const auto d = spectral_derivative(psi0);
    return 2.0 * position_momentum(psi0, d).real() / n2;
}

double vdot0(const WaveFunction& psi0) {
    return idot0(psi0) - 2.0 * mean_position(psi0) * mean_momentum(psi0);
}

InitialMoments initial_moments(const WaveFunction& psi0, const NlsParams& params, const Potential& potential) {
    const double n2 = checked_norm_sq(psi0);
    const auto d = spectral_derivative(psi0);

    MomentPrimitives prims;
    prims.norm = std::sqrt(n2);
    double g = 0.0;
    double p = 0.0;
    for (std::size_t j = 0; j < psi0.size(); ++j) {
        g += std::norm(d[j]);
        p += (std::conj(psi0.values[j]) * Complex(0.0, -1.0) * d[j]).real();
    }
    prims.grad_norm_sq = g * psi0.grid.dx();
    prims.p0_mean = p * psi0.grid.dx() / n2;
    prims.lp_power_norm = lp_power_norm(psi0, params.mu);
    prims.x0_mean = weighted_density(psi0, 1) / n2;
    prims.I0 = weighted_density(psi0, 2) / n2;
    prims.correlation = position_momentum(psi0, d).real() / n2;

    InitialMoments m = assemble_moments(prims, params, potential);
    // measured, not assembled
    m.energy = 0.5 * prims.grad_norm_sq + potential_energy(psi0, potential) +
               params.nu / (params.mu + 1.0) * prims.lp_power_norm;
    m.C_I = 4.0 * m.energy;
    if (potential.is_free()) {
        m.C_V = m.C_I - 2.0 * m.p0_mean * m.p0_mean;
    } else if (potential.is_quadratic()) {
        m.C_V = -2.0 * m.p0_mean * m.p0_mean - 4.0 * potential.alpha() * m.x0_mean * m.x0_mean + m.C_I;
    }
    return m;
}

double virial_rhs(double energy_value, double lp, double x_mean, double I, const NlsParams& params,
                  const Potential& potential) {
    double rhs = 4.0 * energy_value + 2.0 * params.nu * (params.mu - 2.0) / (params.mu + 1.0) * lp;
    if (potential.is_stark()) rhs -= 6.0 * potential.alpha() * x_mean;
    if (potential.is_quadratic()) rhs -= 8.0 * potential.alpha() * I;
    return rhs;
}

double virial_rhs(const WaveFunction& psi, const NlsParams& params, const Potential& potential) {
    const double e = energy(psi, params, potential);
    const double lp = lp_power_norm(psi, params.mu);
    // <x> and I enter the identity unnormalized.
    return virial_rhs(e, lp, weighted_density(psi, 1), weighted_density(psi, 2), params, potential);
}

ObservableRecord measure(const WaveFunction& psi, double t, const NlsParams& params, const Potential& potential) {
    ObservableRecord r;
    r.t = t;
    const double n2 = checked_norm_sq(psi);
    const auto d = spectral_derivative(psi);
    double g = 0.0;
    double p = 0.0;
    for (std::size_t j = 0; j < psi.size(); ++j) {
        g += std::norm(d[j]);
        p += (std::conj(psi.values[j]) * Complex(0.0, -1.0) * d[j]).real();
    }
    const double dx = psi.grid.dx();
    g *= dx;
    r.norm = std::sqrt(n2);
    r.lp_power_norm = lp_power_norm(psi, params.mu);
    r.energy = 0.5 * g + potential_energy(psi, potential) + params.nu / (params.mu + 1.0) * r.lp_power_norm;
    r.x_mean = weighted_density(psi, 1) / n2;
    r.p_mean = p * dx / n2;
    r.I = weighted_density(psi, 2) / n2;
    r.V = r.I - r.x_mean * r.x_mean;
    r.grad_norm = std::sqrt(g);
    r.virial_residual = std::numeric_limits<double>::quiet_NaN();
    return r;
}

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string to_csv_row(const ObservableRecord& r) {
    std::string row;
    const double fields[] = {r.t, r.norm, r.energy, r.x_mean, r.p_mean, r.I, r.V, r.lp_power_norm, r.grad_norm,
                             r.virial_residual};
    for (std::size_t i = 0; i < std::size(fields); ++i) {
        if (i) row += ',';
        row += format_double(fields[i]);
    }
    return row;
}

}  // namespace nlsb
