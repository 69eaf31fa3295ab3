#include "nlsb/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nlsb/error.hpp"

namespace nlsb {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidGrid: return "InvalidGrid";
        case ErrorCode::InvalidParams: return "InvalidParams";
        case ErrorCode::InvalidPotential: return "InvalidPotential";
        case ErrorCode::InvalidWidth: return "InvalidWidth";
        case ErrorCode::DomainTooSmall: return "DomainTooSmall";
        case ErrorCode::InvalidScenario: return "InvalidScenario";
        case ErrorCode::ZeroNorm: return "ZeroNorm";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::OutsideValidityWindow: return "OutsideValidityWindow";
        case ErrorCode::DegenerateStart: return "DegenerateStart";
        case ErrorCode::HypothesisViolated: return "HypothesisViolated";
        case ErrorCode::InsufficientRecords: return "InsufficientRecords";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::CapExceeded: return "CapExceeded";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t outer_band(std::size_t n) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(0.025 * static_cast<double>(n))));
}

}  // namespace

GridSpec::GridSpec(double half_width, std::size_t num_points)
    : half_width_(half_width), num_points_(num_points), dx_(0.0) {
    if (!(half_width > 0.0) || !std::isfinite(half_width)) {
        throw Error(ErrorCode::InvalidGrid, "half width L must be positive and finite");
    }
    if (num_points < 16 || !is_power_of_two(num_points)) {
        throw Error(ErrorCode::InvalidGrid, "n must be a power of two >= 16, got " + std::to_string(num_points));
    }
    // n is a power of two, so 2L/n is exact and dx*n == 2L.
    dx_ = 2.0 * half_width / static_cast<double>(num_points);
}

std::vector<double> GridSpec::nodes() const {
    std::vector<double> x(num_points_);
    for (std::size_t j = 0; j < num_points_; ++j) x[j] = node(j);
    return x;
}

double GridSpec::dk() const { return std::numbers::pi / half_width_; }

void NlsParams::validate() const {
    if (!std::isfinite(nu)) throw Error(ErrorCode::InvalidParams, "nu must be finite");
    if (!(mu > 0.0) || !std::isfinite(mu)) throw Error(ErrorCode::InvalidParams, "mu must be positive");
}

Potential Potential::free() { return Potential(Kind::Free, 0.0); }

Potential Potential::stark(double alpha) {
    if (alpha == 0.0 || !std::isfinite(alpha)) {
        throw Error(ErrorCode::InvalidPotential, "Stark potential requires a finite nonzero alpha");
    }
    return Potential(Kind::Stark, alpha);
}

Potential Potential::quadratic(double alpha) {
    if (alpha == 0.0 || !std::isfinite(alpha)) {
        throw Error(ErrorCode::InvalidPotential, "quadratic potential requires a finite nonzero alpha");
    }
    return Potential(Kind::Quadratic, alpha);
}

double Potential::lambda() const { return std::sqrt(2.0 * std::abs(alpha_)); }

double Potential::omega() const { return std::sqrt(8.0 * std::abs(alpha_)); }

double Potential::value(double x) const {
    switch (kind_) {
        case Kind::Free: return 0.0;
        case Kind::Stark: return alpha_ * x;
        case Kind::Quadratic: return alpha_ * x * x;
    }
    return 0.0;
}

double Potential::derivative(double x) const {
    switch (kind_) {
        case Kind::Free: return 0.0;
        case Kind::Stark: return alpha_;
        case Kind::Quadratic: return 2.0 * alpha_ * x;
    }
    return 0.0;
}

std::string Potential::name() const {
    switch (kind_) {
        case Kind::Free: return "free";
        case Kind::Stark: return "stark";
        case Kind::Quadratic: return "quadratic";
    }
    return "free";
}

Complex GaussianIC::operator()(double x) const {
    const double s = x - x0;
    const double amplitude = std::pow(std::numbers::pi * sigma * sigma, -0.25) * std::exp(-s * s / (2.0 * sigma * sigma));
    const double phase = p0 * x + beta * s * s;
    return std::polar(amplitude, phase);
}

WaveFunction::WaveFunction(GridSpec g, std::vector<Complex> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size()) {
        throw Error(ErrorCode::InvalidGrid, "sample count " + std::to_string(values.size()) +
                                                " does not match grid size " + std::to_string(grid.size()));
    }
}

WaveFunction::WaveFunction(GridSpec g) : grid(g), values(g.size(), Complex{}) {}

bool WaveFunction::all_finite() const {
    return std::all_of(values.begin(), values.end(),
                       [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

void Scenario::validate() const {
    params.validate();
    if (!(ic.sigma > 0.0)) throw Error(ErrorCode::InvalidWidth, "sigma must be positive");
    if (!(solver.dt > 0.0) || !std::isfinite(solver.dt)) {
        throw Error(ErrorCode::InvalidScenario, "dt must be positive");
    }
    if (solver.t_end == 0.0 || !std::isfinite(solver.t_end)) {
        throw Error(ErrorCode::InvalidScenario, "t_end must be finite and nonzero");
    }
    if (solver.record_stride == 0) throw Error(ErrorCode::InvalidScenario, "record_stride must be >= 1");
    const double steps = std::abs(solver.t_end) / solver.dt;
    if (std::abs(steps - std::round(steps)) > 1e-6 * std::max(1.0, steps)) {
        std::ostringstream os;
        os << "|t_end| = " << std::abs(solver.t_end) << " is not a whole number of steps dt = " << solver.dt;
        throw Error(ErrorCode::InvalidScenario, os.str());
    }
    if (solver.blowup_threshold && !(*solver.blowup_threshold > 0.0)) {
        throw Error(ErrorCode::InvalidScenario, "blowup_threshold must be positive");
    }
}

WaveFunction sample_gaussian(const GridSpec& grid, const GaussianIC& ic) {
    WaveFunction psi(grid);
    for (std::size_t j = 0; j < grid.size(); ++j) psi.values[j] = ic(grid.node(j));
    return psi;
}

WaveFunction build_initial_state(const GridSpec& grid, const GaussianIC& ic, const BuildOptions& options) {
    if (!(ic.sigma > 0.0) || !std::isfinite(ic.sigma)) {
        throw Error(ErrorCode::InvalidWidth, "sigma must be positive");
    }
    const double L = grid.half_width();
    if (ic.sigma > L / 6.0 || std::abs(ic.x0) > L / 2.0) {
        std::ostringstream os;
        os << "Gaussian (x0 = " << ic.x0 << ", sigma = " << ic.sigma << ") needs sigma <= L/6 and |x0| <= L/2 with L = "
           << L;
        throw Error(ErrorCode::DomainTooSmall, os.str());
    }
    WaveFunction psi = sample_gaussian(grid, ic);
    const double ratio = boundary_decay_ratio(psi);
    if (!(ratio < options.decay_threshold)) {
        std::ostringstream os;
        os << "boundary amplitude ratio " << ratio << " exceeds " << options.decay_threshold;
        throw Error(ErrorCode::DomainTooSmall, os.str());
    }
    if (options.renormalize) normalize(psi);
    return psi;
}

void normalize(WaveFunction& psi) {
    double sum = 0.0;
    for (const auto& z : psi.values) sum += std::norm(z);
    const double norm = std::sqrt(sum * psi.grid.dx());
    if (!(norm > 0.0)) throw Error(ErrorCode::ZeroNorm, "cannot normalize the zero state");
    for (auto& z : psi.values) z /= norm;
}

double boundary_decay_ratio(const WaveFunction& psi) {
    const std::size_t n = psi.size();
    const std::size_t band = outer_band(n);
    double peak = 0.0;
    double edge = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double a = std::abs(psi.values[j]);
        peak = std::max(peak, a);
        if (j < band || j >= n - band) edge = std::max(edge, a);
    }
    if (peak == 0.0) return 0.0;
    return edge / peak;
}

}  // namespace nlsb
