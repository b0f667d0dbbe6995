#pragma once

// Kalman filter (Joseph-form update) and Rauch-Tung-Striebel smoother for
//
//   xi_n = V xi_{n-1} + eps_n
//   z_n  = p(t_n) + D_p(t_n) xi_n + H(w_n)
//
// with a real state and complex diagonal observation Jacobian D_p. Complex
// observations are processed as the stacked real vector [Re; Im] with
// measurement covariance diag(R/2, R/2), R being the covariance of the
// circularly-symmetric filtered noise.

#include <jitterlab/array2d.hpp>
#include <jitterlab/matcore.hpp>
#include <jitterlab/varjitter.hpp>

#include <iosfwd>
#include <vector>

namespace jitterlab {

struct StateSpace {
    MatR transition;
    MatR innovation_cov;
    MatR meas_noise;          // complex-circular covariance of H(w_n), M x M
    ComplexArray observation; // z_n
    ComplexArray pilot;       // p(t_n)
    ComplexArray jacobian;    // diagonal of D_p(t_n)

    std::size_t channels() const noexcept { return transition.rows(); }
    std::size_t samples() const noexcept { return observation.samples(); }

    // Shapes agree, rho(V) < 1, covariances symmetric PSD.
    void validate() const;
};

struct FilterPass {
    RealArray xi_filt;            // mu_{n|n}
    std::vector<MatR> p_filt;     // P_{n|n}
    RealArray xi_pred;            // mu_{n|n-1}
    std::vector<MatR> p_pred;     // P_{n|n-1}
    RealArray innovation;         // nu_n stacked [Re; Im], N x 2M
    RealArray whitened_innovation;// chol(S_n)^{-1} nu_n
};

struct TrackerOutput {
    RealArray xi_filt;
    std::vector<MatR> p_filt;
    RealArray xi_smooth;
    std::vector<MatR> p_smooth;
};

// Forward pass. Starts from mu_{0|0} = 0 and the steady-state prior
// P_{0|0} solving P = V P V^t + Sigma_eps. Throws SingularInnovation when the
// innovation covariance has condition number above 1e12.
FilterPass kalman_filter(const StateSpace& ss);

// Backward pass over a completed forward pass. Throws SingularPrediction when
// a predicted covariance has condition number above 1e12.
TrackerOutput rts_smooth(const FilterPass& pass, const StateSpace& ss);

// kalman_filter followed by rts_smooth.
TrackerOutput mimo_track(const StateSpace& ss);

// M independent scalar trackers with a_m = (Xi_1)_mm / (Xi_0)_mm,
// q_m = (Xi_0)_mm (1 - a_m^2) and measurement noise (R)_mm.
TrackerOutput siso_track(const StateSpace& ss);

enum class TrackerMode { mimo, siso };

TrackerMode parse_tracker_mode(const std::string& s);
std::string to_string(TrackerMode mode);

TrackerOutput track(const StateSpace& ss, TrackerMode mode);

// Per-step mu and diag(P) of filtered and smoothed passes as CSV.
void write_tracker_csv(std::ostream& out, const TrackerOutput& result);

}  // namespace jitterlab
