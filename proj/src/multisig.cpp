#include <jitterlab/multisig.hpp>

#include <jitterlab/fft.hpp>
#include <jitterlab/rng.hpp>

#include <numbers>

namespace jitterlab {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// e^{2 pi i x} with the integer part of x removed first.
cplx unit_phasor(double cycles) {
    return std::polar(1.0, two_pi * (cycles - std::floor(cycles)));
}

}  // namespace

double ChannelSpec::payload_power() const {
    double p = 0.0;
    for (const auto& c : carriers) p += std::norm(c.symbol);
    return p;
}

void ChannelSpec::validate() const {
    if (!(fs > 0.0)) throw ConfigError("ChannelSpec: fs must be positive");
    if (n_fft == 0) throw ConfigError("ChannelSpec: n_fft must be positive");
    const double df = carrier_spacing();
    for (const auto& c : carriers)
        if (std::abs(static_cast<double>(c.index) * df) > payload_band_hz * (1.0 + 1e-12))
            throw ConfigError("ChannelSpec: carrier " + std::to_string(c.index) + " outside payload band");
    if (pilot.amplitude != 0.0 && !(pilot.freq_hz > payload_band_hz))
        throw ConfigError("ChannelSpec: pilot must lie above the payload band");
}

ChannelWaveform::ChannelWaveform(const ChannelSpec& spec) : spec_(spec) {
    if (!(spec_.fs > 0.0) || spec_.n_fft == 0) throw ConfigError("ChannelWaveform: invalid rate or carrier grid");
    if (spec_.carriers.empty()) return;
    std::int64_t lo = spec_.carriers.front().index, hi = lo;
    for (const auto& c : spec_.carriers) {
        lo = std::min(lo, c.index);
        hi = std::max(hi, c.index);
    }
    k_min_ = lo;
    coef_.assign(static_cast<std::size_t>(hi - lo + 1), cplx{});
    for (const auto& c : spec_.carriers) coef_[static_cast<std::size_t>(c.index - lo)] += c.symbol;
    deriv_coef_.resize(coef_.size());
    const double df = spec_.carrier_spacing();
    for (std::size_t j = 0; j < coef_.size(); ++j)
        deriv_coef_[j] = coef_[j] * cplx(0.0, two_pi * df * static_cast<double>(k_min_ + static_cast<std::int64_t>(j)));
}

cplx ChannelWaveform::horner(const std::vector<cplx>& coef, double tau) const {
    if (coef.empty()) return {};
    const double df = spec_.carrier_spacing();
    const cplx z = unit_phasor(df * tau);
    cplx acc = coef.back();
    for (std::size_t j = coef.size() - 1; j-- > 0;) acc = acc * z + coef[j];
    return acc * unit_phasor(static_cast<double>(k_min_) * df * tau);
}

cplx ChannelWaveform::payload(double t) const { return horner(coef_, t + spec_.interleave_shift); }

cplx ChannelWaveform::payload_deriv(double t) const { return horner(deriv_coef_, t + spec_.interleave_shift); }

cplx ChannelWaveform::pilot(double t) const {
    return spec_.pilot.amplitude * unit_phasor(spec_.pilot.freq_hz * (t + spec_.interleave_shift));
}

cplx ChannelWaveform::pilot_deriv(double t) const {
    return cplx(0.0, two_pi * spec_.pilot.freq_hz) * pilot(t);
}

std::vector<cplx> ChannelWaveform::grid_with(bool derivative, std::size_t samples) const {
    const std::size_t nf = spec_.n_fft;
    std::vector<cplx> bins(nf);
    const double df = spec_.carrier_spacing();
    const auto& coef = derivative ? deriv_coef_ : coef_;
    for (std::size_t j = 0; j < coef.size(); ++j) {
        if (coef[j] == cplx{}) continue;
        const std::int64_t k = k_min_ + static_cast<std::int64_t>(j);
        const auto slot = static_cast<std::size_t>(((k % static_cast<std::int64_t>(nf)) + static_cast<std::int64_t>(nf)) %
                                                   static_cast<std::int64_t>(nf));
        bins[slot] += coef[j] * unit_phasor(static_cast<double>(k) * df * spec_.interleave_shift);
    }
    const auto period = idft(bins);
    std::vector<cplx> out(samples);
    for (std::size_t n = 0; n < samples; ++n) out[n] = period[n % nf] * static_cast<double>(nf);
    return out;
}

std::vector<cplx> ChannelWaveform::payload_on_grid(std::size_t samples) const { return grid_with(false, samples); }

std::vector<cplx> ChannelWaveform::payload_deriv_on_grid(std::size_t samples) const { return grid_with(true, samples); }

cplx eval(const ChannelSpec& spec, double t) { return ChannelWaveform(spec).eval(t); }

cplx eval_deriv(const ChannelSpec& spec, double t) { return ChannelWaveform(spec).eval_deriv(t); }

SamplingMode parse_sampling_mode(const std::string& s) {
    if (s == "exact") return SamplingMode::exact;
    if (s == "linearized") return SamplingMode::linearized;
    throw ConfigError("unknown sampling mode '" + s + "' (expected exact|linearized)");
}

std::string to_string(SamplingMode mode) { return mode == SamplingMode::exact ? "exact" : "linearized"; }

SampleTrace sample_with_jitter(std::span<const ChannelSpec> specs, JitterTrace jitter, const MatR& noise_cov,
                               std::uint64_t seed, SamplingMode mode) {
    const std::size_t m = specs.size();
    const std::size_t n = jitter.xi.samples();
    if (jitter.xi.channels() != m)
        throw DimensionMismatch("sample_with_jitter: " + std::to_string(m) + " channel specs vs " +
                                std::to_string(jitter.xi.channels()) + " jitter channels");
    if (noise_cov.rows() != m || noise_cov.cols() != m)
        throw DimensionMismatch("sample_with_jitter: noise covariance " + noise_cov.shape());

    SampleTrace tr;
    tr.y = ComplexArray(n, m);
    tr.s_clean = ComplexArray(n, m);
    tr.d_s = ComplexArray(n, m);
    tr.p_clean = ComplexArray(n, m);
    tr.d_p = ComplexArray(n, m);
    tr.w = ComplexArray(n, m);

    for (std::size_t c = 0; c < m; ++c) {
        const ChannelWaveform wave(specs[c]);
        const double fs = specs[c].fs;
        tr.fs.push_back(fs);
        tr.s_clean.set_column(c, wave.payload_on_grid(n));
        tr.d_s.set_column(c, wave.payload_deriv_on_grid(n));

        double sq = 0.0;
        for (std::size_t k = 0; k < n; ++k) sq += jitter.xi(k, c) * jitter.xi(k, c);
        const double rel = std::sqrt(sq / static_cast<double>(n)) * fs;
        if (rel > 0.1)
            tr.warnings.push_back("channel " + std::to_string(c) + ": jitter std is " + std::to_string(100.0 * rel) +
                                  "% of the sampling interval; first-order model is unreliable");

        for (std::size_t k = 0; k < n; ++k) {
            const double t = static_cast<double>(k) / fs;
            const double xi = jitter.xi(k, c);
            const cplx p = wave.pilot(t);
            const cplx dp = wave.pilot_deriv(t);
            tr.p_clean(k, c) = p;
            tr.d_p(k, c) = dp;
            if (mode == SamplingMode::exact)
                tr.y(k, c) = wave.eval(t + xi);
            else
                tr.y(k, c) = tr.s_clean(k, c) + p + (tr.d_s(k, c) + dp) * xi;
        }
    }

    const MatR factor = psd_factor(noise_cov);
    Rng rng(derive_seed(seed, 2));
    std::vector<double> gr(m), gi(m);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t c = 0; c < m; ++c) {
            gr[c] = rng.normal();
            gi[c] = rng.normal();
        }
        for (std::size_t i = 0; i < m; ++i) {
            double re = 0.0, im = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                re += factor(i, j) * gr[j];
                im += factor(i, j) * gi[j];
            }
            const cplx w = cplx(re, im) * std::numbers::sqrt2 * 0.5;
            tr.w(k, i) = w;
            tr.y(k, i) += w;
        }
    }
    tr.jitter = std::move(jitter);
    return tr;
}

SampleTrace sample_jittered(std::span<const ChannelSpec> specs, const VarModel& model, const MatR& noise_cov,
                            std::size_t samples, std::uint64_t seed, SamplingMode mode) {
    if (model.channels() != specs.size())
        throw DimensionMismatch("sample_jittered: model has " + std::to_string(model.channels()) + " channels, " +
                                std::to_string(specs.size()) + " specs given");
    return sample_with_jitter(specs, simulate(model, samples, derive_seed(seed, 1)), noise_cov, seed, mode);
}

std::vector<cplx> qam16_alphabet() {
    std::vector<cplx> pts;
    const double scale = 1.0 / std::sqrt(10.0);
    for (int i : {-3, -1, 1, 3})
        for (int q : {-3, -1, 1, 3}) pts.emplace_back(i * scale, q * scale);
    return pts;
}

std::vector<ChannelSpec> make_ofdm_specs(const OfdmPlan& plan, std::uint64_t seed) {
    if (plan.channels == 0) throw ConfigError("make_ofdm_specs: need at least one channel");
    if (!(plan.pilot_fraction > 0.0 && plan.pilot_fraction < 1.0))
        throw ConfigError("make_ofdm_specs: pilot power fraction must lie in (0, 1)");
    if (plan.active_lo == 0 || plan.active_lo > plan.active_hi || plan.active_hi >= plan.n_fft)
        throw ConfigError("make_ofdm_specs: active carrier range must satisfy 0 < lo <= hi < n_fft");
    if (!(plan.fs > 0.0)) throw ConfigError("make_ofdm_specs: fs must be positive");

    const auto alphabet = qam16_alphabet();
    const double df = plan.fs / static_cast<double>(plan.n_fft);
    std::vector<ChannelSpec> specs;
    specs.reserve(plan.channels);
    for (std::size_t c = 0; c < plan.channels; ++c) {
        Rng rng(derive_seed(seed, 100 + c));
        const auto count = static_cast<std::int64_t>(
            rng.uniform_int(static_cast<std::int64_t>(plan.active_lo), static_cast<std::int64_t>(plan.active_hi)));
        const std::int64_t neg = (count + 1) / 2;
        const std::int64_t pos = count / 2;

        ChannelSpec spec;
        spec.fs = plan.fs;
        spec.n_fft = plan.n_fft;
        spec.carriers.reserve(static_cast<std::size_t>(count));
        for (std::int64_t k = -neg; k <= pos; ++k) {
            if (k == 0) continue;
            spec.carriers.push_back({k, alphabet[static_cast<std::size_t>(rng.uniform_int(0, 15))]});
        }
        const double scale = std::sqrt((1.0 - plan.pilot_fraction) / spec.payload_power());
        for (auto& car : spec.carriers) car.symbol *= scale;
        spec.payload_band_hz = static_cast<double>(std::max(neg, pos)) * df;
        spec.pilot = {std::sqrt(plan.pilot_fraction), plan.pilot_freq_hz};
        if (!(plan.pilot_freq_hz > spec.payload_band_hz))
            throw ConfigError("make_ofdm_specs: pilot at " + std::to_string(plan.pilot_freq_hz) +
                              " Hz overlaps the payload band (W_p = " + std::to_string(spec.payload_band_hz) + " Hz)");
        if (plan.pilot_freq_hz >= 0.5 * plan.fs) throw ConfigError("make_ofdm_specs: pilot above Nyquist");
        spec.validate();
        specs.push_back(std::move(spec));
    }
    return specs;
}

std::vector<ChannelSpec> make_interleaved_specs(const ChannelSpec& reference, std::size_t channels) {
    if (channels == 0) throw ConfigError("make_interleaved_specs: need at least one channel");
    std::vector<ChannelSpec> specs(channels, reference);
    const double fast_ts = 1.0 / (static_cast<double>(channels) * reference.fs);
    for (std::size_t m = 0; m < channels; ++m)
        specs[m].interleave_shift = reference.interleave_shift + static_cast<double>(m) * fast_ts;
    return specs;
}

}  // namespace jitterlab
