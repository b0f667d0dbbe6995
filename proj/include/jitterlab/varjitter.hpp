#pragma once

// Cross-correlated VAR(1) clock jitter: xi_n = V xi_{n-1} + eps_n with
// eps_n ~ N(0, Sigma_eps) i.i.d. in time. Jitter values are in seconds.

#include <jitterlab/array2d.hpp>
#include <jitterlab/matcore.hpp>

#include <cstdint>
#include <span>

namespace jitterlab {

class VarModel {
public:
    // Validates rho(V) < 1 (UnstableModel) and Sigma_eps symmetric PSD
    // (IndefiniteMatrix); shapes must agree (DimensionMismatch).
    VarModel(MatR transition, MatR innovation_cov);

    const MatR& transition() const noexcept { return v_; }
    const MatR& innovation_cov() const noexcept { return sigma_eps_; }
    std::size_t channels() const noexcept { return v_.rows(); }

private:
    MatR v_;
    MatR sigma_eps_;
};

struct JitterTrace {
    RealArray xi;  // N x M, seconds
    std::uint64_t seed = 0;
};

// Xi_0 solving Xi_0 = V Xi_0 V^t + Sigma_eps.
MatR steady_state_cov(const VarModel& model);

// Xi_1 = E[xi_n xi_{n-1}^t] = V Xi_0.
MatR lag1_cov(const VarModel& model);

// Inverts the Yule-Walker pair: V = Xi_1 Xi_0^{-1},
// Sigma_eps = Xi_0 - Xi_1 Xi_0^{-1} Xi_1^t. Throws SingularCovariance when Xi_0
// is not strictly positive definite.
VarModel yule_walker_recover(const MatR& xi0, const MatR& xi1);

// S(w) = (1/2pi) (I - V e^{-iw})^{-1} Sigma_eps (I - V^t e^{iw})^{-1}.
MatC spectral_density(const VarModel& model, double omega);

// N samples of the process, starting from the stationary law N(0, Xi_0).
JitterTrace simulate(const VarModel& model, std::size_t samples, std::uint64_t seed);

// Haar-distributed orthogonal matrix from the QR factor of a seeded Gaussian
// matrix.
MatR random_orthogonal(std::size_t n, std::uint64_t seed);

// Model with prescribed stationary covariance Xi_0 and similarity-spectrum a:
// V = L U diag(a) U^t L^{-1}, Sigma_eps = L (I - U A A^t U^t) L^t, with
// L = chol(Xi_0) and U = random_orthogonal(M, seed).
VarModel build_correlated_model(const MatR& xi0, std::span<const double> a, std::uint64_t seed);

// Unit-diagonal equicorrelated matrix scaled by variance:
// variance * ((1 - corr) I + corr 1 1^t).
MatR equicorrelated_cov(std::size_t channels, double variance, double corr);

// Empirical lag-0 and lag-1 covariances (zero-mean assumed).
MatR sample_cov(const RealArray& xi);
MatR sample_lag1_cov(const RealArray& xi);

}  // namespace jitterlab
