#include <jitterlab/tracker.hpp>

#include <ostream>

namespace jitterlab {

namespace {

constexpr double max_condition = 1e12;

// Cholesky factor of a covariance that must be well conditioned; any failure
// is reported through the caller-chosen error type.
template <typename ErrorT>
MatR checked_factor(const MatR& s, std::size_t step, const char* what) {
    MatR l;
    try {
        l = cholesky(s);
    } catch (const IndefiniteMatrix&) {
        throw ErrorT(std::string(what) + " is singular at step " + std::to_string(step));
    }
    if (cholesky_condition(l) > max_condition)
        throw ErrorT(std::string(what) + " condition number exceeds 1e12 at step " + std::to_string(step));
    return l;
}

// Lower-triangular solve L x = b.
VecR forward_substitute(const MatR& l, std::span<const double> b) {
    VecR x(b.begin(), b.end());
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t k = 0; k < i; ++k) x[i] -= l(i, k) * x[k];
        x[i] /= l(i, i);
    }
    return x;
}

}  // namespace

void StateSpace::validate() const {
    const std::size_t m = transition.rows();
    if (!transition.square() || m == 0) throw DimensionMismatch("StateSpace: V must be square");
    auto check_square = [m](const MatR& a, const char* name) {
        if (a.rows() != m || a.cols() != m)
            throw DimensionMismatch(std::string("StateSpace: ") + name + " is " + a.shape());
        if (!is_symmetric(a)) throw IndefiniteMatrix(std::string("StateSpace: ") + name + " is not symmetric");
        psd_factor(a);
    };
    check_square(innovation_cov, "Sigma_eps");
    check_square(meas_noise, "measurement noise");
    if (observation.channels() != m || !pilot.same_shape(observation) || !jacobian.same_shape(observation))
        throw DimensionMismatch("StateSpace: observation, pilot and Jacobian must all be N x M");
    if (observation.samples() == 0) throw DomainError("StateSpace: empty observation record");
    if (spectral_radius(transition) >= 1.0) throw UnstableModel("StateSpace: V is unstable");
}

FilterPass kalman_filter(const StateSpace& ss) {
    ss.validate();
    const std::size_t m = ss.channels(), n_steps = ss.samples(), d = 2 * m;
    const MatR& v = ss.transition;
    const MatR vt = v.transpose();

    MatR r(d, d);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            r(i, j) = 0.5 * ss.meas_noise(i, j);
            r(m + i, m + j) = 0.5 * ss.meas_noise(i, j);
        }

    FilterPass out{RealArray(n_steps, m), {}, RealArray(n_steps, m), {}, RealArray(n_steps, d), RealArray(n_steps, d)};
    out.p_filt.reserve(n_steps);
    out.p_pred.reserve(n_steps);

    VecR mu(m, 0.0);
    MatR p = solve_lyapunov(v, ss.innovation_cov);
    const MatR eye = MatR::identity(m);
    MatR h(d, m);
    VecR ztilde(d);

    for (std::size_t n = 0; n < n_steps; ++n) {
        const VecR mu_pred = v * std::span<const double>(mu);
        const MatR p_pred = symmetrize(v * p * vt + ss.innovation_cov);

        for (std::size_t c = 0; c < m; ++c) {
            const cplx hc = ss.jacobian(n, c);
            h(c, c) = hc.real();
            h(m + c, c) = hc.imag();
            const cplx zt = ss.observation(n, c) - ss.pilot(n, c);
            ztilde[c] = zt.real();
            ztilde[m + c] = zt.imag();
        }
        const VecR hmu = h * std::span<const double>(mu_pred);
        VecR nu(d);
        for (std::size_t i = 0; i < d; ++i) nu[i] = ztilde[i] - hmu[i];

        const MatR hp = h * p_pred;  // H P, d x m
        const MatR s = symmetrize(hp * h.transpose() + r);
        const MatR ls = checked_factor<SingularInnovation>(s, n, "innovation covariance");
        const MatR gain = cholesky_solve(ls, hp).transpose();  // K = P H^t S^{-1}, m x d

        mu = mu_pred;
        {
            const VecR step = gain * std::span<const double>(nu);
            for (std::size_t i = 0; i < m; ++i) mu[i] += step[i];
        }
        const MatR ikh = eye - gain * h;
        p = symmetrize(ikh * p_pred * ikh.transpose() + gain * r * gain.transpose());

        std::copy(mu.begin(), mu.end(), out.xi_filt.row(n).begin());
        std::copy(mu_pred.begin(), mu_pred.end(), out.xi_pred.row(n).begin());
        std::copy(nu.begin(), nu.end(), out.innovation.row(n).begin());
        const VecR white = forward_substitute(ls, nu);
        std::copy(white.begin(), white.end(), out.whitened_innovation.row(n).begin());
        out.p_filt.push_back(p);
        out.p_pred.push_back(p_pred);
    }
    return out;
}

TrackerOutput rts_smooth(const FilterPass& pass, const StateSpace& ss) {
    const std::size_t m = ss.channels(), n_steps = pass.xi_filt.samples();
    if (pass.xi_filt.channels() != m || pass.p_filt.size() != n_steps || pass.p_pred.size() != n_steps)
        throw DimensionMismatch("rts_smooth: filter pass does not match the state space");
    const MatR& v = ss.transition;

    TrackerOutput out{pass.xi_filt, pass.p_filt, RealArray(n_steps, m), std::vector<MatR>(n_steps)};
    if (n_steps == 0) return out;
    std::copy(pass.xi_filt.row(n_steps - 1).begin(), pass.xi_filt.row(n_steps - 1).end(),
              out.xi_smooth.row(n_steps - 1).begin());
    out.p_smooth[n_steps - 1] = pass.p_filt[n_steps - 1];

    for (std::size_t n = n_steps - 1; n-- > 0;) {
        const MatR& p_next_pred = pass.p_pred[n + 1];
        const MatR lp = checked_factor<SingularPrediction>(p_next_pred, n + 1, "predicted covariance");
        // J = P_{n|n} V^t P_{n+1|n}^{-1}  <=>  J^t = P_{n+1|n}^{-1} V P_{n|n}
        const MatR gain = cholesky_solve(lp, v * pass.p_filt[n]).transpose();

        VecR diff(m);
        for (std::size_t i = 0; i < m; ++i) diff[i] = out.xi_smooth(n + 1, i) - pass.xi_pred(n + 1, i);
        const VecR corr = gain * std::span<const double>(diff);
        for (std::size_t i = 0; i < m; ++i) out.xi_smooth(n, i) = pass.xi_filt(n, i) + corr[i];

        out.p_smooth[n] =
            symmetrize(pass.p_filt[n] + gain * (out.p_smooth[n + 1] - p_next_pred) * gain.transpose());
    }
    return out;
}

TrackerOutput mimo_track(const StateSpace& ss) { return rts_smooth(kalman_filter(ss), ss); }

TrackerOutput siso_track(const StateSpace& ss) {
    ss.validate();
    const std::size_t m = ss.channels(), n_steps = ss.samples();
    const MatR xi0 = solve_lyapunov(ss.transition, ss.innovation_cov);
    const MatR xi1 = ss.transition * xi0;

    TrackerOutput out{RealArray(n_steps, m), std::vector<MatR>(n_steps, MatR(m, m)), RealArray(n_steps, m),
                      std::vector<MatR>(n_steps, MatR(m, m))};
    for (std::size_t c = 0; c < m; ++c) {
        const double var = xi0(c, c);
        const double a = var > 0.0 ? xi1(c, c) / var : 0.0;
        StateSpace scalar{MatR{{a}},
                          MatR{{var * (1.0 - a * a)}},
                          MatR{{ss.meas_noise(c, c)}},
                          ComplexArray(n_steps, 1),
                          ComplexArray(n_steps, 1),
                          ComplexArray(n_steps, 1)};
        for (std::size_t n = 0; n < n_steps; ++n) {
            scalar.observation(n, 0) = ss.observation(n, c);
            scalar.pilot(n, 0) = ss.pilot(n, c);
            scalar.jacobian(n, 0) = ss.jacobian(n, c);
        }
        const TrackerOutput one = mimo_track(scalar);
        for (std::size_t n = 0; n < n_steps; ++n) {
            out.xi_filt(n, c) = one.xi_filt(n, 0);
            out.xi_smooth(n, c) = one.xi_smooth(n, 0);
            out.p_filt[n](c, c) = one.p_filt[n](0, 0);
            out.p_smooth[n](c, c) = one.p_smooth[n](0, 0);
        }
    }
    return out;
}

TrackerMode parse_tracker_mode(const std::string& s) {
    if (s == "mimo") return TrackerMode::mimo;
    if (s == "siso") return TrackerMode::siso;
    throw ConfigError("unknown tracker mode '" + s + "' (expected mimo|siso)");
}

std::string to_string(TrackerMode mode) { return mode == TrackerMode::mimo ? "mimo" : "siso"; }

TrackerOutput track(const StateSpace& ss, TrackerMode mode) {
    return mode == TrackerMode::mimo ? mimo_track(ss) : siso_track(ss);
}

void write_tracker_csv(std::ostream& out, const TrackerOutput& result) {
    const std::size_t m = result.xi_filt.channels();
    out << "n";
    for (std::size_t c = 0; c < m; ++c) out << ",mu_filt_" << c << ",p_filt_" << c;
    for (std::size_t c = 0; c < m; ++c) out << ",mu_smooth_" << c << ",p_smooth_" << c;
    out << '\n';
    const auto old = out.precision(17);
    for (std::size_t n = 0; n < result.xi_filt.samples(); ++n) {
        out << n;
        for (std::size_t c = 0; c < m; ++c) out << ',' << result.xi_filt(n, c) << ',' << result.p_filt[n](c, c);
        for (std::size_t c = 0; c < m; ++c) out << ',' << result.xi_smooth(n, c) << ',' << result.p_smooth[n](c, c);
        out << '\n';
    }
    out.precision(old);
}

}  // namespace jitterlab
