#pragma once

// Time-interleaved ADC with a single shared clock: sub-ADC m inherits the
// jitter of sub-ADC m-1 within a frame and the chain wraps across frames,
//
//   xi_{m,n} = phi xi_{m-1,n} + eps_{m,n}   (m >= 2)
//   xi_{1,n} = phi xi_{M,n-1} + eps_{1,n},
//
// which is the VAR(1) model V = phi u e_M^t, Sigma_eta = N Sigma_eps N^t with
// N = (I - phi J)^{-1} and u = (1, phi, ..., phi^{M-1})^t.

#include <jitterlab/varjitter.hpp>

namespace jitterlab {

class TiAdcModel {
public:
    // Throws DomainError unless 0 < phi < 1; Sigma_eps must be M x M PSD.
    TiAdcModel(double phi, MatR sigma_eps);

    std::size_t channels() const noexcept { return sigma_eps_.rows(); }
    double phi() const noexcept { return phi_; }
    const MatR& sigma_eps() const noexcept { return sigma_eps_; }

    // (1, phi, ..., phi^{M-1})
    const VecR& u() const noexcept { return u_; }
    // (I - phi J)^{-1} from the finite Neumann sum.
    const MatR& neumann_inverse() const noexcept { return neumann_; }
    const MatR& sigma_eta() const noexcept { return sigma_eta_; }

    const VarModel& var_model() const noexcept { return var_; }

private:
    double phi_;
    MatR sigma_eps_;
    VecR u_;
    MatR neumann_;
    MatR sigma_eta_;
    VarModel var_;
};

// Strictly lower shift: J_{jm} = delta_{(j-1)m}, first row zero.
MatR shift_matrix(std::size_t m);

// Sum_{k=0}^{M-1} phi^k J^k.
MatR neumann_inverse(std::size_t m, double phi);

TiAdcModel build_tiadc(std::size_t m, double phi, const MatR& sigma_eps);

// Closed form Xi_0 = [phi^2 (Sigma_eta)_MM / (1 - phi^{2M})] u u^t + Sigma_eta.
MatR tiadc_steady_state_cov(const TiAdcModel& model);

// Runs the scalar chained recursion directly on a single stream of N*M
// jitter values and reshapes it frame-wise to N x M. The chain starts from
// the stationary law of the last channel so the trace is stationary.
JitterTrace simulate_tiadc_scalar(const TiAdcModel& model, std::size_t frames, std::uint64_t seed);

}  // namespace jitterlab
