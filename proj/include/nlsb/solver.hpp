#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nlsb/model.hpp"
#include "nlsb/observables.hpp"

namespace nlsb {

struct HorizonReached {
    bool operator==(const HorizonReached&) const = default;
};

struct BlowupDetected {
    double t_detect = 0.0;  // signed, |t_detect| <= |t_end|
    double grad_norm = 0.0;
    bool operator==(const BlowupDetected&) const = default;
};

struct NumericalFailure {
    double t = 0.0;
    std::string reason;
    bool operator==(const NumericalFailure&) const = default;
};

using Termination = std::variant<HorizonReached, BlowupDetected, NumericalFailure>;

std::string termination_name(const Termination& t);

struct RunResult {
    std::vector<ObservableRecord> records;
    Termination termination;
    std::string fingerprint;
    std::vector<std::string> warnings;
    double initial_grad_norm = 0.0;
    double blowup_threshold = 0.0;
    std::optional<WaveFunction> final_state;

    bool blew_up() const { return std::holds_alternative<BlowupDetected>(termination); }
};

/// Strang split-step propagator for one scenario and one signed step size.
/// Holds the kinetic phases and potential samples; not thread-safe.
class SplitStepIntegrator {
public:
    SplitStepIntegrator(const Scenario& scenario, double dt);

    double dt() const { return dt_; }

    /// Advances psi in place by dt. Throws NonFinite if any amplitude overflows.
    void advance(WaveFunction& psi);

private:
    void half_phase(std::vector<Complex>& v) const;

    GridSpec grid_;
    NlsParams params_;
    double dt_;
    std::vector<double> potential_;
    std::vector<Complex> kinetic_;
    std::vector<Complex> spectrum_;
};

/// One Strang step of size dt (negative runs backward, zero is the identity).
WaveFunction step(const WaveFunction& psi, const Scenario& scenario, double dt);

/// Threshold actually used: the scenario value or 1e3 * initial gradient norm.
/// Throws InvalidScenario if it does not exceed the initial gradient norm.
double resolve_blowup_threshold(const Scenario& scenario, double initial_grad_norm);

bool detect_blowup(const ObservableRecord& record, double threshold);
bool detect_blowup(const ObservableRecord& record, const Scenario& scenario, double initial_grad_norm);

/// Runs from t = 0 towards t_end from the Gaussian initial state.
RunResult simulate(const Scenario& scenario);
/// Same with a caller-supplied initial state on scenario.grid.
RunResult simulate(const Scenario& scenario, const WaveFunction& psi0);

/// Central second difference of I minus the virial right-hand side, one entry
/// per record. Entries without two equally spaced neighbours are NaN.
/// Throws InsufficientRecords for fewer than three records.
std::vector<double> virial_residual(const std::vector<ObservableRecord>& records, const Scenario& scenario);

/// FNV-1a hash of the canonical scenario description, 16 hex digits.
std::string scenario_fingerprint(const Scenario& scenario);

}  // namespace nlsb
