#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "nlsb/model.hpp"

typedef struct fftw_plan_s* fftw_plan;

namespace nlsb {

/// Unnormalized complex FFT pair of fixed size backed by FFTW. Owns its plans
/// and an aligned scratch buffer; not shareable across threads.
class Fft {
public:
    explicit Fft(std::size_t n);
    ~Fft();

    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    std::size_t size() const { return n_; }

    void forward(std::span<const Complex> in, std::span<Complex> out);
    void inverse(std::span<const Complex> in, std::span<Complex> out);  // includes the 1/n factor

private:
    void run(fftw_plan plan, std::span<const Complex> in, std::span<Complex> out);

    std::size_t n_;
    Complex* buffer_ = nullptr;
    fftw_plan forward_ = nullptr;
    fftw_plan inverse_ = nullptr;
};

/// Per-thread cached transform for size n.
Fft& fft_for(std::size_t n);

/// Angular wavenumbers in FFT order: k_j = j*pi/L for j < n/2, (j - n)*pi/L otherwise.
std::vector<double> wavenumbers(const GridSpec& grid);

/// Spectral first derivative. The Nyquist mode is dropped.
std::vector<Complex> spectral_derivative(const WaveFunction& psi);

/// Largest resolvable wavenumber pi/dx.
double nyquist_wavenumber(const GridSpec& grid);

/// Fraction of spectral amplitude in the top 5% of |k|: max |psi_hat| there over max |psi_hat|.
double spectral_tail_ratio(const WaveFunction& psi);

const char* fftw_version_string();

}  // namespace nlsb
