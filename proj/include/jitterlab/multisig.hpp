#pragma once

// Multi-channel analog stimulus: per channel an OFDM payload (sum of complex
// exponentials on a carrier grid) plus one complex pilot tone, evaluated and
// differentiated analytically at arbitrary instants.

#include <jitterlab/array2d.hpp>
#include <jitterlab/varjitter.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace jitterlab {

struct Carrier {
    std::int64_t index = 0;  // frequency = index * fs / n_fft
    cplx symbol;
};

struct PilotTone {
    double amplitude = 0.0;
    double freq_hz = 0.0;
};

struct ChannelSpec {
    double fs = 0.0;               // channel sampling rate, Hz
    std::size_t n_fft = 0;         // carrier grid: spacing fs / n_fft
    std::vector<Carrier> carriers;
    PilotTone pilot;
    double payload_band_hz = 0.0;  // W_p, one-sided
    double interleave_shift = 0.0; // seconds added to every evaluation instant

    double carrier_spacing() const { return fs / static_cast<double>(n_fft); }
    double payload_power() const;

    // Carriers within [-W_p, W_p] and pilot above W_p.
    void validate() const;
};

// Continuous-time evaluation s(t), p(t) and their exact derivatives.
class ChannelWaveform {
public:
    explicit ChannelWaveform(const ChannelSpec& spec);

    cplx payload(double t) const;
    cplx payload_deriv(double t) const;
    cplx pilot(double t) const;
    cplx pilot_deriv(double t) const;
    cplx eval(double t) const { return payload(t) + pilot(t); }
    cplx eval_deriv(double t) const { return payload_deriv(t) + pilot_deriv(t); }

    // s(t_n), s'(t_n) on t_n = n / fs, n = 0..N-1, via inverse FFT of the
    // carrier grid.
    std::vector<cplx> payload_on_grid(std::size_t samples) const;
    std::vector<cplx> payload_deriv_on_grid(std::size_t samples) const;

    const ChannelSpec& spec() const noexcept { return spec_; }

private:
    // z^{k_min} * sum_j coef[j] z^j with z = exp(2 pi i df tau)
    cplx horner(const std::vector<cplx>& coef, double tau) const;
    std::vector<cplx> grid_with(bool derivative, std::size_t samples) const;

    ChannelSpec spec_;
    std::int64_t k_min_ = 0;
    std::vector<cplx> coef_;        // dense c_k for k_min..k_max
    std::vector<cplx> deriv_coef_;  // 2 pi i k df c_k
};

cplx eval(const ChannelSpec& spec, double t);
cplx eval_deriv(const ChannelSpec& spec, double t);

enum class SamplingMode { exact, linearized };

SamplingMode parse_sampling_mode(const std::string& s);
std::string to_string(SamplingMode mode);

struct SampleTrace {
    ComplexArray y;        // observed record
    ComplexArray s_clean;  // s(t_n)
    ComplexArray d_s;      // s'(t_n)
    ComplexArray p_clean;  // p(t_n)
    ComplexArray d_p;      // p'(t_n)
    ComplexArray w;        // additive noise
    JitterTrace jitter;
    std::vector<double> fs;
    std::vector<std::string> warnings;
};

// Samples every channel at t_n + xi_n (exact mode) or through the first
// order expansion x(t_n) + x'(t_n) xi_n (linearized mode), then adds
// w_n ~ CN(0, Sigma_w) i.i.d. in time.
SampleTrace sample_with_jitter(std::span<const ChannelSpec> specs, JitterTrace jitter, const MatR& noise_cov,
                               std::uint64_t seed, SamplingMode mode);

// Simulates the jitter from the model with a seed derived from `seed` and
// forwards to sample_with_jitter.
SampleTrace sample_jittered(std::span<const ChannelSpec> specs, const VarModel& model, const MatR& noise_cov,
                            std::size_t samples, std::uint64_t seed, SamplingMode mode);

// Unit average power 16-QAM alphabet.
std::vector<cplx> qam16_alphabet();

struct OfdmPlan {
    std::size_t channels = 0;
    std::size_t n_fft = 0;
    std::size_t active_lo = 0;
    std::size_t active_hi = 0;
    double fs = 0.0;
    double pilot_freq_hz = 0.0;
    double pilot_fraction = 0.0;  // rho: pilot power share of the unit budget
};

// Per channel: uniform active-carrier count in [lo, hi] placed around DC
// (DC bin unused), uniform 16-QAM symbols rescaled to payload power 1 - rho,
// pilot amplitude sqrt(rho). ConfigError when the pilot overlaps the payload.
std::vector<ChannelSpec> make_ofdm_specs(const OfdmPlan& plan, std::uint64_t seed);

// Ti-ADC front end: channel m samples x_1(t + (m-1) T_s) with T_s = 1/(M fs).
std::vector<ChannelSpec> make_interleaved_specs(const ChannelSpec& reference, std::size_t channels);

}  // namespace jitterlab
