#include <jitterlab/tiadc.hpp>

#include <jitterlab/rng.hpp>

namespace jitterlab {

namespace {

MatR tiadc_transition(double phi, const VecR& u) {
    const std::size_t m = u.size();
    MatR v(m, m);
    for (std::size_t j = 0; j < m; ++j) v(j, m - 1) = phi * u[j];
    return v;
}

VecR powers(std::size_t m, double phi) {
    VecR u(m);
    double p = 1.0;
    for (std::size_t j = 0; j < m; ++j, p *= phi) u[j] = p;
    return u;
}

MatR checked_sigma(double phi, const MatR& sigma_eps) {
    if (!(phi > 0.0 && phi < 1.0)) throw DomainError("build_tiadc: phi must lie in (0, 1)");
    if (!sigma_eps.square() || sigma_eps.rows() == 0)
        throw DimensionMismatch("build_tiadc: Sigma_eps must be square, got " + sigma_eps.shape());
    return sigma_eps;
}

}  // namespace

MatR shift_matrix(std::size_t m) {
    MatR j(m, m);
    for (std::size_t r = 1; r < m; ++r) j(r, r - 1) = 1.0;
    return j;
}

MatR neumann_inverse(std::size_t m, double phi) {
    const MatR j = shift_matrix(m);
    MatR sum = MatR::identity(m);
    MatR term = MatR::identity(m);
    for (std::size_t k = 1; k < m; ++k) {
        term = (term * j) * phi;
        sum += term;
    }
    return sum;
}

TiAdcModel::TiAdcModel(double phi, MatR sigma_eps)
    : phi_(phi),
      sigma_eps_(checked_sigma(phi, sigma_eps)),
      u_(powers(sigma_eps_.rows(), phi)),
      neumann_(jitterlab::neumann_inverse(sigma_eps_.rows(), phi)),
      sigma_eta_(symmetrize(neumann_ * sigma_eps_ * neumann_.transpose())),
      var_(tiadc_transition(phi, u_), sigma_eta_) {}

TiAdcModel build_tiadc(std::size_t m, double phi, const MatR& sigma_eps) {
    if (sigma_eps.rows() != m) throw DimensionMismatch("build_tiadc: Sigma_eps does not match M");
    return TiAdcModel(phi, sigma_eps);
}

MatR tiadc_steady_state_cov(const TiAdcModel& model) {
    const std::size_t m = model.channels();
    const double phi = model.phi();
    const MatR& eta = model.sigma_eta();
    const double scale = phi * phi * eta(m - 1, m - 1) / (1.0 - std::pow(phi, 2.0 * static_cast<double>(m)));
    MatR xi0 = eta;
    const VecR& u = model.u();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) xi0(i, j) += scale * u[i] * u[j];
    return xi0;
}

JitterTrace simulate_tiadc_scalar(const TiAdcModel& model, std::size_t frames, std::uint64_t seed) {
    if (frames == 0) throw DomainError("simulate_tiadc_scalar: need at least one frame");
    const std::size_t m = model.channels();
    const double phi = model.phi();
    const MatR innov = psd_factor(model.sigma_eps());
    const double last_var = tiadc_steady_state_cov(model)(m - 1, m - 1);

    Rng rng(seed);
    JitterTrace trace{RealArray(frames, m), seed};
    VecR g(m);
    double prev = std::sqrt(std::max(last_var, 0.0)) * rng.normal();
    for (std::size_t n = 0; n < frames; ++n) {
        for (auto& x : g) x = rng.normal();
        const VecR eps = innov * std::span<const double>(g);
        for (std::size_t c = 0; c < m; ++c) {
            prev = phi * prev + eps[c];
            trace.xi(n, c) = prev;
        }
    }
    return trace;
}

}  // namespace jitterlab
