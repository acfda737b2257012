#include "nlse/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace nlse {

namespace {
std::mutex plan_mutex;
}

Fft::Fft(int n) : n_(n) {
    if (n <= 0) throw std::invalid_argument("Fft: size must be positive");
    std::lock_guard<std::mutex> lock(plan_mutex);
    fftw_complex* buf = fftw_alloc_complex(n);
    // FFTW_UNALIGNED so the plans can execute on arbitrary caller buffers.
    fwd_ = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    inv_ = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    if (!fwd_ || !inv_) throw std::runtime_error("Fft: plan creation failed");
}

Fft::~Fft() {
    std::lock_guard<std::mutex> lock(plan_mutex);
    fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(inv_));
}

void Fft::forward(const std::complex<double>* in, std::complex<double>* out) const {
    fftw_execute_dft(static_cast<fftw_plan>(fwd_),
                     reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

void Fft::inverse(const std::complex<double>* in, std::complex<double>* out) const {
    fftw_execute_dft(static_cast<fftw_plan>(inv_),
                     reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
    double s = 1.0 / n_;
    for (int i = 0; i < n_; ++i) out[i] *= s;
}

std::vector<std::complex<double>> Fft::forward(const std::vector<std::complex<double>>& in) const {
    std::vector<std::complex<double>> out(n_);
    forward(in.data(), out.data());
    return out;
}

std::vector<std::complex<double>> Fft::inverse(const std::vector<std::complex<double>>& in) const {
    std::vector<std::complex<double>> out(n_);
    inverse(in.data(), out.data());
    return out;
}

const Fft& fft_for(int n) {
    static std::map<int, std::unique_ptr<Fft>> cache;
    static std::mutex cache_mutex;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, std::make_unique<Fft>(n)).first;
    return *it->second;
}

} // namespace nlse
