#include <jitterlab/dspfilt.hpp>

#include <jitterlab/fft.hpp>

#include <numbers>

namespace jitterlab {

void BandPassSpec::validate() const {
    if (!(fs > 0.0)) throw DomainError("BandPassSpec: fs must be positive");
    if (!(half_width_hz > 0.0)) throw DomainError("BandPassSpec: half width must be positive");
    if (center_hz - half_width_hz <= -0.5 * fs || center_hz + half_width_hz >= 0.5 * fs)
        throw DomainError("BandPassSpec: passband leaves (-fs/2, fs/2)");
}

std::vector<bool> passband_mask(const BandPassSpec& spec, std::size_t n) {
    spec.validate();
    std::vector<bool> keep(n);
    const double slack = 1e-9 * spec.fs / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k)
        keep[k] = std::abs(bin_frequency(k, n, spec.fs) - spec.center_hz) <= spec.half_width_hz + slack;
    return keep;
}

std::size_t kept_bins(const BandPassSpec& spec, std::size_t n) {
    const auto keep = passband_mask(spec, n);
    return static_cast<std::size_t>(std::count(keep.begin(), keep.end(), true));
}

std::vector<cplx> bandpass(std::span<const cplx> x, const BandPassSpec& spec) {
    if (x.size() < 2) throw DomainError("bandpass: need at least two samples");
    const auto keep = passband_mask(spec, x.size());
    if (std::find(keep.begin(), keep.end(), true) == keep.end())
        throw EmptyPassband("bandpass: no DFT bin inside the passband");
    auto spectrum = dft(x);
    for (std::size_t k = 0; k < spectrum.size(); ++k)
        if (!keep[k]) spectrum[k] = 0.0;
    return idft(spectrum);
}

ComplexArray bandpass(const ComplexArray& x, std::span<const BandPassSpec> specs) {
    if (specs.size() != x.channels()) throw DimensionMismatch("bandpass: one spec per channel required");
    ComplexArray out(x.samples(), x.channels());
    for (std::size_t m = 0; m < x.channels(); ++m) out.set_column(m, bandpass(x.column(m), specs[m]));
    return out;
}

std::vector<cplx> differentiate(std::span<const cplx> x, double fs) {
    const std::size_t n = x.size();
    if (n < 2) throw DomainError("differentiate: need at least two samples");
    if (!(fs > 0.0)) throw DomainError("differentiate: fs must be positive");
    auto spectrum = dft(x);
    const cplx two_pi_i(0.0, 2.0 * std::numbers::pi);
    for (std::size_t k = 0; k < n; ++k) {
        if (n % 2 == 0 && 2 * k == n)
            spectrum[k] = 0.0;
        else
            spectrum[k] *= two_pi_i * bin_frequency(k, n, fs);
    }
    return idft(spectrum);
}

ComplexArray differentiate(const ComplexArray& x, std::span<const double> fs) {
    if (fs.size() != x.channels()) throw DimensionMismatch("differentiate: one rate per channel required");
    ComplexArray out(x.samples(), x.channels());
    for (std::size_t m = 0; m < x.channels(); ++m) out.set_column(m, differentiate(x.column(m), fs[m]));
    return out;
}

MatR filtered_noise_cov(const MatR& sigma_w, std::span<const BandPassSpec> specs, std::size_t n) {
    const std::size_t m = specs.size();
    if (sigma_w.rows() != m || sigma_w.cols() != m)
        throw DimensionMismatch("filtered_noise_cov: Sigma_w " + sigma_w.shape() + " vs " + std::to_string(m) + " channels");
    std::vector<std::vector<bool>> masks;
    masks.reserve(m);
    for (const auto& s : specs) masks.push_back(passband_mask(s, n));
    MatR out(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            std::size_t overlap = 0;
            for (std::size_t k = 0; k < n; ++k) overlap += masks[i][k] && masks[j][k];
            out(i, j) = sigma_w(i, j) * static_cast<double>(overlap) / static_cast<double>(n);
        }
    return out;
}

}  // namespace jitterlab
