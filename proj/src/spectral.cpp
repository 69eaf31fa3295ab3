#include "nlsb/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "nlsb/error.hpp"

namespace nlsb {

namespace {

// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

Fft::Fft(std::size_t n) : n_(n) {
    std::lock_guard lock(planner_mutex());
    buffer_ = reinterpret_cast<Complex*>(fftw_alloc_complex(n));
    auto* buf = reinterpret_cast<fftw_complex*>(buffer_);
    // FFTW_ESTIMATE keeps plan selection, and therefore rounding, reproducible.
    forward_ = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    inverse_ = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft::~Fft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
    fftw_free(buffer_);
}

void Fft::run(fftw_plan plan, std::span<const Complex> in, std::span<Complex> out) {
    if (in.size() != n_ || out.size() != n_) throw Error(ErrorCode::InvalidGrid, "FFT size mismatch");
    std::memcpy(buffer_, in.data(), n_ * sizeof(Complex));
    fftw_execute(plan);
    std::memcpy(out.data(), buffer_, n_ * sizeof(Complex));
}

void Fft::forward(std::span<const Complex> in, std::span<Complex> out) { run(forward_, in, out); }

void Fft::inverse(std::span<const Complex> in, std::span<Complex> out) {
    run(inverse_, in, out);
    const double scale = 1.0 / static_cast<double>(n_);
    for (auto& z : out) z *= scale;
}

Fft& fft_for(std::size_t n) {
    thread_local std::map<std::size_t, std::unique_ptr<Fft>> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, std::make_unique<Fft>(n)).first;
    return *it->second;
}

std::vector<double> wavenumbers(const GridSpec& grid) {
    const std::size_t n = grid.size();
    const double dk = grid.dk();
    std::vector<double> k(n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto signed_j = j < n / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(n);
        k[j] = signed_j * dk;
    }
    return k;
}

std::vector<Complex> spectral_derivative(const WaveFunction& psi) {
    const std::size_t n = psi.size();
    auto& fft = fft_for(n);
    std::vector<Complex> hat(n);
    fft.forward(psi.values, hat);
    const auto k = wavenumbers(psi.grid);
    for (std::size_t j = 0; j < n; ++j) hat[j] *= Complex(0.0, k[j]);
    hat[n / 2] = 0.0;
    std::vector<Complex> out(n);
    fft.inverse(hat, out);
    return out;
}

double nyquist_wavenumber(const GridSpec& grid) { return std::numbers::pi / grid.dx(); }

double spectral_tail_ratio(const WaveFunction& psi) {
    const std::size_t n = psi.size();
    std::vector<Complex> hat(n);
    fft_for(n).forward(psi.values, hat);
    const auto k = wavenumbers(psi.grid);
    const double cutoff = 0.95 * nyquist_wavenumber(psi.grid);
    double peak = 0.0;
    double tail = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double a = std::abs(hat[j]);
        peak = std::max(peak, a);
        if (std::abs(k[j]) >= cutoff) tail = std::max(tail, a);
    }
    return peak == 0.0 ? 0.0 : tail / peak;
}

const char* fftw_version_string() { return ::fftw_version; }

}  // namespace nlsb
