#include "nlsb/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlsb/error.hpp"
#include "nlsb/spectral.hpp"

namespace nlsb {

std::string termination_name(const Termination& t) {
    switch (t.index()) {
        case 0: return "HorizonReached";
        case 1: return "BlowupDetected";
        default: return "NumericalFailure";
    }
}

SplitStepIntegrator::SplitStepIntegrator(const Scenario& scenario, double dt)
    : grid_(scenario.grid), params_(scenario.params), dt_(dt) {
    const std::size_t n = grid_.size();
    potential_.resize(n);
    for (std::size_t j = 0; j < n; ++j) potential_[j] = scenario.potential.value(grid_.node(j));
    const auto k = wavenumbers(grid_);
    kinetic_.resize(n);
    for (std::size_t j = 0; j < n; ++j) kinetic_[j] = std::polar(1.0, -0.5 * dt_ * k[j] * k[j]);
    spectrum_.resize(n);
}

void SplitStepIntegrator::half_phase(std::vector<Complex>& v) const {
    const double h = 0.5 * dt_;
    const double nu = params_.nu;
    const double mu = params_.mu;
    for (std::size_t j = 0; j < v.size(); ++j) {
        const double rho = std::norm(v[j]);
        const double nl = nu == 0.0 ? 0.0 : nu * (mu == 1.0 ? rho : std::pow(rho, mu));
        v[j] *= std::polar(1.0, -h * (potential_[j] + nl));
    }
}

void SplitStepIntegrator::advance(WaveFunction& psi) {
    if (dt_ == 0.0) return;
    if (!(psi.grid == grid_)) throw Error(ErrorCode::InvalidGrid, "state grid does not match the integrator");
    auto& v = psi.values;
    half_phase(v);
    auto& fft = fft_for(grid_.size());
    fft.forward(v, spectrum_);
    for (std::size_t j = 0; j < v.size(); ++j) spectrum_[j] *= kinetic_[j];
    fft.inverse(spectrum_, v);
    half_phase(v);
    if (!psi.all_finite()) throw Error(ErrorCode::NonFinite, "amplitude left the finite range");
}

WaveFunction step(const WaveFunction& psi, const Scenario& scenario, double dt) {
    WaveFunction out = psi;
    SplitStepIntegrator integrator(scenario, dt);
    integrator.advance(out);
    return out;
}

double resolve_blowup_threshold(const Scenario& scenario, double initial_grad_norm) {
    const double threshold = scenario.solver.blowup_threshold.value_or(1e3 * initial_grad_norm);
    if (!(threshold > initial_grad_norm)) {
        throw Error(ErrorCode::InvalidScenario, "blowup_threshold " + format_double(threshold) +
                                                    " does not exceed the initial gradient norm " +
                                                    format_double(initial_grad_norm));
    }
    return threshold;
}

bool detect_blowup(const ObservableRecord& record, double threshold) { return record.grad_norm >= threshold; }

bool detect_blowup(const ObservableRecord& record, const Scenario& scenario, double initial_grad_norm) {
    return detect_blowup(record, scenario.solver.blowup_threshold.value_or(1e3 * initial_grad_norm));
}

RunResult simulate(const Scenario& scenario) {
    scenario.validate();
    return simulate(scenario, build_initial_state(scenario.grid, scenario.ic));
}

RunResult simulate(const Scenario& scenario, const WaveFunction& psi0) {
    scenario.validate();
    if (!(psi0.grid == scenario.grid)) throw Error(ErrorCode::InvalidGrid, "initial state grid does not match the scenario");
    if (!psi0.all_finite()) throw Error(ErrorCode::NonFinite, "initial state has non-finite amplitudes");

    const auto& s = scenario.solver;
    const auto& params = scenario.params;
    const auto& potential = scenario.potential;

    RunResult result;
    result.fingerprint = scenario_fingerprint(scenario);
    result.initial_grad_norm = std::sqrt(grad_norm_sq(psi0));
    result.blowup_threshold = resolve_blowup_threshold(scenario, result.initial_grad_norm);
    result.termination = HorizonReached{};

    const double dt = std::copysign(s.dt, s.t_end);
    const auto steps = static_cast<std::size_t>(std::llround(std::abs(s.t_end) / s.dt));
    const double decay_limit = BuildOptions{}.decay_threshold;
    bool decay_warned = false;

    WaveFunction psi = psi0;
    SplitStepIntegrator integrator(scenario, dt);
    auto record = [&](double t) {
        result.records.push_back(measure(psi, t, params, potential));
        if (!decay_warned && boundary_decay_ratio(psi) > decay_limit) {
            decay_warned = true;
            result.warnings.push_back("boundary decay above " + format_double(decay_limit) + " at t = " + format_double(t) +
                                      "; the periodic box may be too small");
        }
    };

    record(0.0);
    std::size_t k = 0;
    while (k < steps) {
        const double t = static_cast<double>(k + 1) * dt;
        try {
            integrator.advance(psi);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NonFinite) throw;
            result.termination = NumericalFailure{t, e.what()};
            break;
        }
        ++k;
        const double g = std::sqrt(grad_norm_sq(psi));
        if (!std::isfinite(g)) {
            result.termination = NumericalFailure{t, "gradient norm is not finite"};
            break;
        }
        if (g >= result.blowup_threshold) {
            record(t);
            result.termination = BlowupDetected{t, result.records.back().grad_norm};
            break;
        }
        if (k % s.record_stride == 0 || k == steps) record(t);
    }

    const double e0 = result.records.front().energy;
    for (const auto& r : result.records) {
        if (std::abs(r.energy - e0) > 1e-2 * std::max(std::abs(e0), 1.0)) {
            result.warnings.push_back("energy drift above 1% at t = " + format_double(r.t) +
                                      "; the time step no longer resolves the dynamics");
            break;
        }
    }

    if (result.records.size() >= 3) {
        const auto residual = virial_residual(result.records, scenario);
        for (std::size_t i = 0; i < residual.size(); ++i) result.records[i].virial_residual = residual[i];
    }
    result.final_state = std::move(psi);
    return result;
}

std::vector<double> virial_residual(const std::vector<ObservableRecord>& records, const Scenario& scenario) {
    if (records.size() < 3) throw Error(ErrorCode::InsufficientRecords, "virial residual needs at least 3 records");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> out(records.size(), nan);
    for (std::size_t i = 1; i + 1 < records.size(); ++i) {
        const auto& a = records[i - 1];
        const auto& b = records[i];
        const auto& c = records[i + 1];
        const double h1 = b.t - a.t;
        const double h2 = c.t - b.t;
        if (h1 == 0.0 || std::abs(h2 - h1) > 1e-9 * std::abs(h1)) continue;
        const double h = 0.5 * (h1 + h2);
        const double second = (a.I - 2.0 * b.I + c.I) / (h * h);
        const double n2 = b.norm * b.norm;
        const double rhs =
            virial_rhs(b.energy, b.lp_power_norm, b.x_mean * n2, b.I * n2, scenario.params, scenario.potential) / n2;
        out[i] = second - rhs;
    }
    return out;
}

std::string scenario_fingerprint(const Scenario& sc) {
    std::string canon = "L=" + format_double(sc.grid.half_width()) + ";n=" + std::to_string(sc.grid.size()) +
                        ";nu=" + format_double(sc.params.nu) + ";mu=" + format_double(sc.params.mu) +
                        ";potential=" + sc.potential.name() + ";alpha=" + format_double(sc.potential.alpha()) +
                        ";x0=" + format_double(sc.ic.x0) + ";p0=" + format_double(sc.ic.p0) +
                        ";sigma=" + format_double(sc.ic.sigma) + ";beta=" + format_double(sc.ic.beta) +
                        ";dt=" + format_double(sc.solver.dt) + ";t_end=" + format_double(sc.solver.t_end) +
                        ";threshold=" +
                        (sc.solver.blowup_threshold ? format_double(*sc.solver.blowup_threshold) : "default") +
                        ";stride=" + std::to_string(sc.solver.record_stride);
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : canon) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = kHex[h & 0xf];
    return out;
}

}  // namespace nlsb
