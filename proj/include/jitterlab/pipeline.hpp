#pragma once

// Pilot-tone aided jitter estimation and two-step de-jittering, plus the
// distortion metrics used to score it.

#include <jitterlab/dspfilt.hpp>
#include <jitterlab/multisig.hpp>
#include <jitterlab/tracker.hpp>

#include <span>
#include <vector>

namespace jitterlab {

struct DbPair {
    double pre = 0.0;   // channel-averaged dB
    double post = 0.0;
    std::vector<double> pre_channel;
    std::vector<double> post_channel;
};

struct MetricReport {
    double sjdr_pre = 0.0;
    double sjdr_post = 0.0;
    double sinadr_pre = 0.0;
    double sinadr_post = 0.0;
    double avg_rmsd = 0.0;  // seconds
    DbPair sjdr;
    DbPair sinadr;
    std::vector<double> rmsd_channel;
};

// SJDR pre/post: payload power over mean |s' xi|^2 (pre) and over mean
// |s' xi - y' xi_hat|^2 (post), 10 log10 averaged across channels. A channel
// whose denominator is below 1e-30 of its numerator reports +infinity.
DbPair sjdr(const ComplexArray& s_clean, const ComplexArray& d_s_true, const RealArray& xi,
            const ComplexArray& y_deriv_used, const RealArray& xi_hat);

// As sjdr with mean |w|^2 added to both denominators.
DbPair sinadr(const ComplexArray& s_clean, const ComplexArray& d_s_true, const RealArray& xi,
              const ComplexArray& y_deriv_used, const RealArray& xi_hat, const ComplexArray& w);

std::vector<double> rmsd_per_channel(const RealArray& xi_hat, const RealArray& xi);

// (1/M) sum_m sqrt(mean_n (xi_hat - xi)^2), seconds.
double avg_rmsd(const RealArray& xi_hat, const RealArray& xi);

MetricReport evaluate_metrics(const SampleTrace& trace, const ComplexArray& y_deriv_used, const RealArray& xi_hat);

// How the tracker is told the covariance of the band-passed noise.
enum class NoisePolicy {
    band_fraction,  // Sigma_w * kept_bins / N  (per-sample variance of H(w))
    in_band_psd,    // Sigma_w  (matches the in-band spectral level of H(w))
};

NoisePolicy parse_noise_policy(const std::string& s);
std::string to_string(NoisePolicy p);

struct CompensationOptions {
    TrackerMode tracker = TrackerMode::mimo;
    NoisePolicy noise_policy = NoisePolicy::in_band_psd;
};

struct Dejittered {
    ComplexArray y_bar;        // y - (p + D_p xi_hat)
    ComplexArray d_y_bar;      // ideal derivative of y_bar
    ComplexArray y_doublebar;  // y_bar - D_ybar xi_hat
};

// De-jittering steps given an estimate: remove the jittered pilot, then the
// payload distortion through the derivative of the pilot-free record.
Dejittered dejitter(const ComplexArray& y, const ComplexArray& pilot, const ComplexArray& d_pilot,
                    const RealArray& xi_hat, std::span<const double> fs);

// State space seen by the tracker: z = H(y), pilot and D_p from the known
// pilot, noise covariance per the chosen policy.
StateSpace build_state_space(const SampleTrace& trace, const VarModel& model, const MatR& noise_cov,
                             std::span<const BandPassSpec> bandpass_specs, NoisePolicy policy);

struct CompensationResult {
    ComplexArray y_bar;
    ComplexArray y_doublebar;
    ComplexArray d_y_bar;
    RealArray xi_hat;
    MetricReport metrics;
};

// Full chain: band-pass, track, de-jitter pilots, differentiate, remove
// payload distortion, score against the trace's ground truth.
CompensationResult compensate(const SampleTrace& trace, const VarModel& model, const MatR& noise_cov,
                              std::span<const BandPassSpec> bandpass_specs, const CompensationOptions& options = {});

}  // namespace jitterlab
