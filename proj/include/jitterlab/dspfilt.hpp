#pragma once

// Ideal DFT-domain filters. Both operate with circular-convolution
// semantics on a full record.

#include <jitterlab/array2d.hpp>
#include <jitterlab/matcore.hpp>

#include <span>
#include <vector>

namespace jitterlab {

// One-sided complex passband [center - half_width, center + half_width].
struct BandPassSpec {
    double center_hz = 0.0;
    double half_width_hz = 0.0;
    double fs = 0.0;

    // DomainError on non-positive width/rate or a passband outside (-fs/2, fs/2).
    void validate() const;
};

// Indicator of the DFT bins kept by the mask for an N-point record.
std::vector<bool> passband_mask(const BandPassSpec& spec, std::size_t n);
std::size_t kept_bins(const BandPassSpec& spec, std::size_t n);

// Throws EmptyPassband when no bin falls inside the passband.
std::vector<cplx> bandpass(std::span<const cplx> x, const BandPassSpec& spec);
ComplexArray bandpass(const ComplexArray& x, std::span<const BandPassSpec> specs);

// Multiplication by 2 pi i f_k in the DFT domain; the Nyquist bin of an
// even-length record is zeroed.
std::vector<cplx> differentiate(std::span<const cplx> x, double fs);
ComplexArray differentiate(const ComplexArray& x, std::span<const double> fs);

// Covariance of the band-passed white noise per sample: for channels i, j the
// entry is Sigma_w(i, j) * |K_i intersect K_j| / N, where K are kept bins.
MatR filtered_noise_cov(const MatR& sigma_w, std::span<const BandPassSpec> specs, std::size_t n);

}  // namespace jitterlab
