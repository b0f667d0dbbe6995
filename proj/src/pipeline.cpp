#include <jitterlab/pipeline.hpp>

#include <limits>

namespace jitterlab {

namespace {

double ratio_db(double num, double den) {
    if (den <= 1e-30 * num) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(num / den);
}

double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

void require_shape(const auto& a, const auto& b, const char* what) {
    if (!a.same_shape(b)) throw DimensionMismatch(std::string(what) + ": inconsistent record shapes");
}

// Shared body of sjdr/sinadr; noise may be null.
DbPair distortion_ratio(const ComplexArray& s, const ComplexArray& ds, const RealArray& xi, const ComplexArray& dy,
                        const RealArray& xi_hat, const ComplexArray* w) {
    require_shape(s, ds, "metric");
    require_shape(s, xi, "metric");
    require_shape(s, dy, "metric");
    require_shape(s, xi_hat, "metric");
    if (w) require_shape(s, *w, "metric");
    const std::size_t n = s.samples(), m = s.channels();
    DbPair out;
    for (std::size_t c = 0; c < m; ++c) {
        double sig = 0.0, pre = 0.0, post = 0.0, noise = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            sig += std::norm(s(k, c));
            const cplx jit = ds(k, c) * xi(k, c);
            pre += std::norm(jit);
            post += std::norm(jit - dy(k, c) * xi_hat(k, c));
            if (w) noise += std::norm((*w)(k, c));
        }
        const double inv = 1.0 / static_cast<double>(n);
        sig *= inv;
        pre = pre * inv + noise * inv;
        post = post * inv + noise * inv;
        out.pre_channel.push_back(ratio_db(sig, pre));
        out.post_channel.push_back(ratio_db(sig, post));
    }
    out.pre = mean_of(out.pre_channel);
    out.post = mean_of(out.post_channel);
    return out;
}

}  // namespace

DbPair sjdr(const ComplexArray& s_clean, const ComplexArray& d_s_true, const RealArray& xi,
            const ComplexArray& y_deriv_used, const RealArray& xi_hat) {
    return distortion_ratio(s_clean, d_s_true, xi, y_deriv_used, xi_hat, nullptr);
}

DbPair sinadr(const ComplexArray& s_clean, const ComplexArray& d_s_true, const RealArray& xi,
              const ComplexArray& y_deriv_used, const RealArray& xi_hat, const ComplexArray& w) {
    return distortion_ratio(s_clean, d_s_true, xi, y_deriv_used, xi_hat, &w);
}

std::vector<double> rmsd_per_channel(const RealArray& xi_hat, const RealArray& xi) {
    require_shape(xi_hat, xi, "rmsd");
    std::vector<double> out(xi.channels());
    for (std::size_t c = 0; c < xi.channels(); ++c) {
        double acc = 0.0;
        for (std::size_t k = 0; k < xi.samples(); ++k) {
            const double e = xi_hat(k, c) - xi(k, c);
            acc += e * e;
        }
        out[c] = std::sqrt(acc / static_cast<double>(xi.samples()));
    }
    return out;
}

double avg_rmsd(const RealArray& xi_hat, const RealArray& xi) { return mean_of(rmsd_per_channel(xi_hat, xi)); }

MetricReport evaluate_metrics(const SampleTrace& trace, const ComplexArray& y_deriv_used, const RealArray& xi_hat) {
    MetricReport r;
    r.sjdr = sjdr(trace.s_clean, trace.d_s, trace.jitter.xi, y_deriv_used, xi_hat);
    r.sinadr = sinadr(trace.s_clean, trace.d_s, trace.jitter.xi, y_deriv_used, xi_hat, trace.w);
    r.rmsd_channel = rmsd_per_channel(xi_hat, trace.jitter.xi);
    r.sjdr_pre = r.sjdr.pre;
    r.sjdr_post = r.sjdr.post;
    r.sinadr_pre = r.sinadr.pre;
    r.sinadr_post = r.sinadr.post;
    r.avg_rmsd = mean_of(r.rmsd_channel);
    return r;
}

NoisePolicy parse_noise_policy(const std::string& s) {
    if (s == "band_fraction") return NoisePolicy::band_fraction;
    if (s == "in_band_psd") return NoisePolicy::in_band_psd;
    throw ConfigError("unknown noise policy '" + s + "' (expected band_fraction|in_band_psd)");
}

std::string to_string(NoisePolicy p) { return p == NoisePolicy::band_fraction ? "band_fraction" : "in_band_psd"; }

Dejittered dejitter(const ComplexArray& y, const ComplexArray& pilot, const ComplexArray& d_pilot,
                    const RealArray& xi_hat, std::span<const double> fs) {
    require_shape(y, pilot, "dejitter");
    require_shape(y, d_pilot, "dejitter");
    require_shape(y, xi_hat, "dejitter");
    Dejittered out;
    out.y_bar = ComplexArray(y.samples(), y.channels());
    for (std::size_t k = 0; k < y.samples(); ++k)
        for (std::size_t c = 0; c < y.channels(); ++c)
            out.y_bar(k, c) = y(k, c) - (pilot(k, c) + d_pilot(k, c) * xi_hat(k, c));
    out.d_y_bar = differentiate(out.y_bar, fs);
    out.y_doublebar = out.y_bar;
    for (std::size_t k = 0; k < y.samples(); ++k)
        for (std::size_t c = 0; c < y.channels(); ++c) out.y_doublebar(k, c) -= out.d_y_bar(k, c) * xi_hat(k, c);
    return out;
}

StateSpace build_state_space(const SampleTrace& trace, const VarModel& model, const MatR& noise_cov,
                             std::span<const BandPassSpec> bandpass_specs, NoisePolicy policy) {
    const std::size_t m = trace.y.channels();
    if (model.channels() != m || bandpass_specs.size() != m)
        throw DimensionMismatch("build_state_space: model, band-pass specs and trace disagree on channel count");
    StateSpace ss;
    ss.transition = model.transition();
    ss.innovation_cov = model.innovation_cov();
    ss.meas_noise = policy == NoisePolicy::band_fraction
                        ? filtered_noise_cov(noise_cov, bandpass_specs, trace.y.samples())
                        : symmetrize(noise_cov);
    ss.observation = bandpass(trace.y, bandpass_specs);
    ss.pilot = trace.p_clean;
    ss.jacobian = trace.d_p;
    return ss;
}

CompensationResult compensate(const SampleTrace& trace, const VarModel& model, const MatR& noise_cov,
                              std::span<const BandPassSpec> bandpass_specs, const CompensationOptions& options) {
    const StateSpace ss = build_state_space(trace, model, noise_cov, bandpass_specs, options.noise_policy);
    CompensationResult res;
    res.xi_hat = track(ss, options.tracker).xi_smooth;
    auto dj = dejitter(trace.y, trace.p_clean, trace.d_p, res.xi_hat, trace.fs);
    res.y_bar = std::move(dj.y_bar);
    res.d_y_bar = std::move(dj.d_y_bar);
    res.y_doublebar = std::move(dj.y_doublebar);
    res.metrics = evaluate_metrics(trace, res.d_y_bar, res.xi_hat);
    return res;
}

}  // namespace jitterlab
