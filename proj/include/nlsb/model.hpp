#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nlsb {

using Complex = std::complex<double>;

/// Uniform periodic grid on [-L, L) with n nodes, n a power of two >= 16.
class GridSpec {
public:
    GridSpec(double half_width, std::size_t num_points);

    double half_width() const { return half_width_; }
    std::size_t size() const { return num_points_; }
    double dx() const { return dx_; }
    double node(std::size_t j) const { return -half_width_ + static_cast<double>(j) * dx_; }
    std::vector<double> nodes() const;

    // Spacing of the discrete wavenumbers, pi / L.
    double dk() const;

    bool operator==(const GridSpec&) const = default;

private:
    double half_width_;
    std::size_t num_points_;
    double dx_;
};

struct NlsParams {
    double nu = 0.0;  // nonlinearity strength
    double mu = 1.0;  // nonlinearity power, > 0

    void validate() const;
    bool focusing() const { return nu < 0.0; }
};

class Potential {
public:
    enum class Kind { Free, Stark, Quadratic };

    static Potential free();
    static Potential stark(double alpha);
    static Potential quadratic(double alpha);

    Kind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    bool is_free() const { return kind_ == Kind::Free; }
    bool is_stark() const { return kind_ == Kind::Stark; }
    bool is_quadratic() const { return kind_ == Kind::Quadratic; }
    bool is_harmonic() const { return is_quadratic() && alpha_ > 0.0; }
    bool is_inverted() const { return is_quadratic() && alpha_ < 0.0; }

    // Classical frequency sqrt(2|alpha|); only meaningful for Quadratic.
    double lambda() const;
    // Variance frequency 2*lambda = sqrt(8|alpha|); only meaningful for Quadratic.
    double omega() const;

    double value(double x) const;
    double derivative(double x) const;

    std::string name() const;

    bool operator==(const Potential&) const = default;

private:
    Potential(Kind kind, double alpha) : kind_(kind), alpha_(alpha) {}

    Kind kind_ = Kind::Free;
    double alpha_ = 0.0;
};

/// psi0(x) = (pi sigma^2)^(-1/4) exp(-(x-x0)^2/(2 sigma^2) + i p0 x + i beta (x-x0)^2)
struct GaussianIC {
    double x0 = 0.0;
    double p0 = 0.0;
    double sigma = 1.0;
    double beta = 0.0;

    Complex operator()(double x) const;
};

struct WaveFunction {
    GridSpec grid;
    std::vector<Complex> values;

    WaveFunction(GridSpec g, std::vector<Complex> v);
    explicit WaveFunction(GridSpec g);

    std::size_t size() const { return values.size(); }
    std::span<const Complex> view() const { return values; }
    bool all_finite() const;
};

struct SolverSettings {
    double dt = 1e-3;
    double t_end = 1.0;
    // Unset means 10^3 times the initial gradient norm.
    std::optional<double> blowup_threshold;
    std::size_t record_stride = 10;
};

struct Scenario {
    GridSpec grid{20.0, 1024};
    NlsParams params;
    Potential potential = Potential::free();
    GaussianIC ic;
    SolverSettings solver;

    // Checks everything that does not need the sampled initial state.
    void validate() const;
};

struct BuildOptions {
    // Maximum |psi| on the outer 5% of nodes relative to the peak.
    double decay_threshold = 1e-8;
    bool renormalize = true;
};

/// Samples the Gaussian family on the grid without any checks or rescaling.
WaveFunction sample_gaussian(const GridSpec& grid, const GaussianIC& ic);

/// Samples psi0, checks that it fits in the box and rescales to unit
/// discrete norm.
WaveFunction build_initial_state(const GridSpec& grid, const GaussianIC& ic,
                                 const BuildOptions& options = {});

/// Rescales psi to unit discrete L2 norm. Throws ZeroNorm for the zero state.
void normalize(WaveFunction& psi);

/// max |psi| over the outermost 5% of nodes (2.5% at each end) divided by max |psi|.
double boundary_decay_ratio(const WaveFunction& psi);

}  // namespace nlsb
