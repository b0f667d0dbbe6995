#include <jitterlab/varjitter.hpp>

#include <jitterlab/rng.hpp>

#include <numbers>

namespace jitterlab {

VarModel::VarModel(MatR transition, MatR innovation_cov)
    : v_(std::move(transition)), sigma_eps_(std::move(innovation_cov)) {
    if (!v_.square() || v_.rows() == 0) throw DimensionMismatch("VarModel: V must be square, got " + v_.shape());
    if (sigma_eps_.rows() != v_.rows() || sigma_eps_.cols() != v_.cols())
        throw DimensionMismatch("VarModel: Sigma_eps " + sigma_eps_.shape() + " vs V " + v_.shape());
    const double rho = spectral_radius(v_);
    if (rho >= 1.0) throw UnstableModel("VarModel: spectral radius " + std::to_string(rho) + " >= 1");
    if (!is_symmetric(sigma_eps_)) throw IndefiniteMatrix("VarModel: Sigma_eps is not symmetric");
    sigma_eps_ = symmetrize(sigma_eps_);
    psd_factor(sigma_eps_);  // throws IndefiniteMatrix on a negative direction
}

MatR steady_state_cov(const VarModel& model) {
    return solve_lyapunov(model.transition(), model.innovation_cov());
}

MatR lag1_cov(const VarModel& model) {
    return model.transition() * steady_state_cov(model);
}

VarModel yule_walker_recover(const MatR& xi0, const MatR& xi1) {
    if (!xi0.square() || xi1.rows() != xi0.rows() || xi1.cols() != xi0.cols())
        throw DimensionMismatch("yule_walker_recover: Xi_0 " + xi0.shape() + " vs Xi_1 " + xi1.shape());
    MatR l;
    try {
        l = cholesky(xi0);
    } catch (const IndefiniteMatrix& e) {
        throw SingularCovariance(std::string("yule_walker_recover: Xi_0 not positive definite (") + e.what() + ")");
    }
    // Xi_0 X = Xi_1^t  =>  V = X^t
    const MatR v = cholesky_solve(l, xi1.transpose()).transpose();
    MatR sigma = symmetrize(xi0 - v * xi1.transpose());
    if (spectral_radius(v) >= 1.0) throw UnstableModel("yule_walker_recover: recovered V is unstable");
    return VarModel(v, std::move(sigma));
}

MatC spectral_density(const VarModel& model, double omega) {
    const std::size_t m = model.channels();
    const MatC v = to_complex(model.transition());
    const MatC a = MatC::identity(m) - v * std::polar(1.0, -omega);
    const MatC b = inverse(a);
    MatC s = b * to_complex(model.innovation_cov()) * adjoint(b);
    s *= cplx(1.0 / (2.0 * std::numbers::pi));
    // enforce exact Hermitian symmetry
    for (std::size_t i = 0; i < m; ++i) {
        s(i, i) = s(i, i).real();
        for (std::size_t j = i + 1; j < m; ++j) {
            const cplx h = 0.5 * (s(i, j) + std::conj(s(j, i)));
            s(i, j) = h;
            s(j, i) = std::conj(h);
        }
    }
    return s;
}

JitterTrace simulate(const VarModel& model, std::size_t samples, std::uint64_t seed) {
    if (samples == 0) throw DomainError("simulate: need at least one sample");
    const std::size_t m = model.channels();
    const MatR& v = model.transition();
    const MatR innov = psd_factor(model.innovation_cov());
    const MatR init = psd_factor(steady_state_cov(model));

    Rng rng(seed);
    JitterTrace trace{RealArray(samples, m), seed};
    VecR g(m), prev(m), cur(m);

    for (auto& x : g) x = rng.normal();
    prev = init * std::span<const double>(g);
    std::copy(prev.begin(), prev.end(), trace.xi.row(0).begin());

    for (std::size_t n = 1; n < samples; ++n) {
        for (auto& x : g) x = rng.normal();
        for (std::size_t i = 0; i < m; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < m; ++j) acc += v(i, j) * prev[j] + innov(i, j) * g[j];
            cur[i] = acc;
        }
        std::copy(cur.begin(), cur.end(), trace.xi.row(n).begin());
        std::swap(prev, cur);
    }
    return trace;
}

MatR random_orthogonal(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    MatR g(n, n);
    for (auto& x : g.flat()) x = rng.normal();
    return orthogonal_factor(g);
}

VarModel build_correlated_model(const MatR& xi0, std::span<const double> a, std::uint64_t seed) {
    const std::size_t m = xi0.rows();
    if (!xi0.square() || a.size() != m)
        throw DimensionMismatch("build_correlated_model: Xi_0 " + xi0.shape() + " with " +
                                std::to_string(a.size()) + " eigenvalues");
    for (double aj : a)
        if (!(std::abs(aj) < 1.0)) throw DomainError("build_correlated_model: |a_j| must be < 1");
    MatR l;
    try {
        l = cholesky(xi0);
    } catch (const IndefiniteMatrix& e) {
        throw SingularCovariance(std::string("build_correlated_model: Xi_0 not positive definite (") + e.what() + ")");
    }
    const MatR u = random_orthogonal(m, seed);
    const MatR amat = MatR::diagonal(a);
    const MatR core = u * amat * u.transpose();
    // V = (L core) L^{-1}  =>  V^t = L^{-t} (L core)^t, i.e. solve L^t X = (L core)^t
    const MatR lcore = l * core;
    const MatR v = solve(l.transpose(), lcore.transpose()).transpose();
    const MatR inner = MatR::identity(m) - u * amat * amat.transpose() * u.transpose();
    MatR sigma = symmetrize(l * inner * l.transpose());
    return VarModel(v, std::move(sigma));
}

MatR equicorrelated_cov(std::size_t channels, double variance, double corr) {
    if (!(variance > 0.0)) throw DomainError("equicorrelated_cov: variance must be positive");
    MatR c(channels, channels, variance * corr);
    for (std::size_t i = 0; i < channels; ++i) c(i, i) = variance;
    return c;
}

MatR sample_cov(const RealArray& xi) {
    const std::size_t m = xi.channels(), n = xi.samples();
    MatR c(m, m);
    for (std::size_t t = 0; t < n; ++t) {
        const auto r = xi.row(t);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) c(i, j) += r[i] * r[j];
    }
    c *= 1.0 / static_cast<double>(n);
    return c;
}

MatR sample_lag1_cov(const RealArray& xi) {
    const std::size_t m = xi.channels(), n = xi.samples();
    MatR c(m, m);
    if (n < 2) return c;
    for (std::size_t t = 1; t < n; ++t) {
        const auto cur = xi.row(t), prev = xi.row(t - 1);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) c(i, j) += cur[i] * prev[j];
    }
    c *= 1.0 / static_cast<double>(n - 1);
    return c;
}

}  // namespace jitterlab
