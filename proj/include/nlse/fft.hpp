#pragma once

#include <complex>
#include <vector>

namespace nlse {

/// Cached FFTW plans for one transform size. forward() is the unnormalized
/// DFT, inverse() includes the 1/n factor. Executing on distinct arrays is
/// thread-safe; plan construction is serialized internally.
class Fft {
public:
    explicit Fft(int n);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    int size() const { return n_; }

    void forward(const std::complex<double>* in, std::complex<double>* out) const;
    void inverse(const std::complex<double>* in, std::complex<double>* out) const;

    std::vector<std::complex<double>> forward(const std::vector<std::complex<double>>& in) const;
    std::vector<std::complex<double>> inverse(const std::vector<std::complex<double>>& in) const;

private:
    int n_;
    void* fwd_; // fftw_plan
    void* inv_;
};

// Shared plan cache keyed by n.
const Fft& fft_for(int n);

} // namespace nlse
