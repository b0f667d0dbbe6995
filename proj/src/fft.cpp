#include <jitterlab/fft.hpp>

#include <jitterlab/errors.hpp>

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>

namespace jitterlab {

namespace {

// FFTW planning is not thread safe; execution with a private plan is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

class Plan {
public:
    Plan(std::size_t n, int sign) : n_(n) {
        buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
        if (!buf_) throw std::bad_alloc();
        std::lock_guard lock(planner_mutex());
        plan_ = fftw_plan_dft_1d(static_cast<int>(n), buf_, buf_, sign, FFTW_ESTIMATE);
        if (!plan_) {
            fftw_free(buf_);
            throw Error("fftw: failed to create plan");
        }
    }
    ~Plan() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
        fftw_free(buf_);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;

    std::vector<std::complex<double>> run(std::span<const std::complex<double>> x) {
        static_assert(sizeof(fftw_complex) == sizeof(std::complex<double>));
        std::memcpy(buf_, x.data(), sizeof(fftw_complex) * n_);
        fftw_execute(plan_);
        std::vector<std::complex<double>> out(n_);
        std::memcpy(static_cast<void*>(out.data()), buf_, sizeof(fftw_complex) * n_);
        return out;
    }

private:
    std::size_t n_;
    fftw_complex* buf_ = nullptr;
    fftw_plan plan_ = nullptr;
};

Plan& plan_for(std::size_t n, int sign) {
    thread_local std::map<std::pair<std::size_t, int>, std::unique_ptr<Plan>> cache;
    auto& slot = cache[{n, sign}];
    if (!slot) slot = std::make_unique<Plan>(n, sign);
    return *slot;
}

}  // namespace

std::vector<std::complex<double>> dft(std::span<const std::complex<double>> x) {
    if (x.empty()) return {};
    return plan_for(x.size(), FFTW_FORWARD).run(x);
}

std::vector<std::complex<double>> idft(std::span<const std::complex<double>> x) {
    if (x.empty()) return {};
    auto out = plan_for(x.size(), FFTW_BACKWARD).run(x);
    const double scale = 1.0 / static_cast<double>(x.size());
    for (auto& v : out) v *= scale;
    return out;
}

double bin_frequency(std::size_t k, std::size_t n, double fs) {
    const auto kk = static_cast<double>(k);
    const auto nn = static_cast<double>(n);
    // k < N/2 positive, k >= N/2 negative (Nyquist -> -fs/2 for even N)
    return (2 * k < n ? kk : kk - nn) * fs / nn;
}

}  // namespace jitterlab
