// Acceptance checks: one PASS/FAIL line per criterion, detail on stdout.

#include "support.hpp"

#include <jitterlab/expcli.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

using namespace jitterlab;

namespace {

const std::filesystem::path kConfigs = JITTERLAB_SOURCE_DIR "/configs";

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// sum_k V^k Q (V^k)^t until the terms vanish
MatR series_oracle(const MatR& v, const MatR& q) {
    MatR sum = q, term = q;
    for (int k = 0; k < 100000; ++k) {
        term = v * term * v.transpose();
        sum += term;
        if (max_abs(term) <= 1e-18 * max_abs(sum)) break;
    }
    return sum;
}

// (I - V kron V) vec X = vec Q, solved by Eigen
MatR kron_oracle(const MatR& v, const MatR& q) {
    const Eigen::MatrixXd ev = testing::to_eigen(v);
    const auto n = ev.rows();
    Eigen::MatrixXd k = Eigen::MatrixXd::Identity(n * n, n * n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) k.block(i * n, j * n, n, n) -= ev(i, j) * ev;
    Eigen::MatrixXd eq = testing::to_eigen(q);
    Eigen::VectorXd x = k.partialPivLu().solve(Eigen::Map<Eigen::VectorXd>(eq.data(), n * n));
    return testing::from_eigen(Eigen::Map<Eigen::MatrixXd>(x.data(), n, n));
}

Outcome a1() {
    Rng rng(101);
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0;
    for (int i = 0; i < 50; ++i) {
        const std::size_t m = std::array<std::size_t, 3>{2, 4, 8}[i % 3];
        const MatR v = testing::random_stable(m, rng, 0.1 + 0.85 * rng.uniform());
        const MatR q = testing::random_spd(m, rng);
        worst = std::max(worst, testing::max_diff(solve_lyapunov(v, q), series_oracle(v, q)));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {worst <= 1e-9 && secs < 5.0, fmt("max entry error %.2e, %.2f s", worst, secs)};
}

Outcome a2() {
    Rng rng(202);
    double worst = 0, worst_rho = 0;
    for (int i = 0; i < 20; ++i) {
        const std::size_t m = 1 + static_cast<std::size_t>(rng.uniform_int(1, 7));
        const double phi = 0.05 + 0.9 * rng.uniform();
        const MatR sig = testing::random_spd(m, rng);
        const TiAdcModel t = build_tiadc(m, phi, sig);
        const MatR closed = tiadc_steady_state_cov(t);
        const MatR& v = t.var_model().transition();
        const double scale = max_abs(closed);
        worst = std::max(worst, testing::max_diff(closed, solve_lyapunov(v, t.sigma_eta())) / scale);
        worst = std::max(worst, testing::max_diff(closed, kron_oracle(v, t.sigma_eta())) / scale);
        const auto ev = Eigen::EigenSolver<Eigen::MatrixXd>(testing::to_eigen(v)).eigenvalues();
        double r = 0;
        for (Eigen::Index k = 0; k < ev.size(); ++k) r = std::max(r, std::abs(ev[k]));
        worst_rho = std::max(worst_rho, std::abs(r - std::pow(phi, double(m))));
        worst_rho = std::max(worst_rho, std::abs(spectral_radius(v) - std::pow(phi, double(m))));
    }
    return {worst <= 1e-10 && worst_rho <= 1e-12, fmt("max rel error %.2e, spectral radius error %.2e", worst, worst_rho)};
}

Outcome a3() {
    const std::size_t n = 100000;
    bool ok = true;
    double worst_z = 0;
    for (std::size_t m : {2u, 4u, 8u}) {
        const TiAdcModel t = build_tiadc(m, 0.9, MatR::identity(m) * 1e-24);
        const auto a = simulate_tiadc_scalar(t, n, 31 + m);
        const auto b = simulate(t.var_model(), n, 77 + m);
        for (std::size_t c = 0; c < m; ++c)
            for (std::size_t lag : {0u, 1u}) {
                std::vector<double> pa, pb;
                for (std::size_t k = lag; k < n; ++k) {
                    pa.push_back(a.xi(k, c) * a.xi(k - lag, c));
                    pb.push_back(b.xi(k, c) * b.xi(k - lag, c));
                }
                const auto sa = testing::batch_means(pa), sb = testing::batch_means(pb);
                const double z = std::abs(sa.mean - sb.mean) / std::hypot(sa.se, sb.se);
                worst_z = std::max(worst_z, z);
                ok = ok && z <= 4.0;
            }
    }
    return {ok, fmt("largest |difference| / SE = %.2f over variances and lag-1 covariances", worst_z)};
}

struct Synth {
    StateSpace ss;
    RealArray xi;
};

Synth synth(const VarModel& model, const MatR& r, std::size_t n, std::uint64_t seed) {
    const std::size_t m = model.channels();
    Synth s{{model.transition(), model.innovation_cov(), r, ComplexArray(n, m), ComplexArray(n, m), ComplexArray(n, m)},
            simulate(model, n, seed).xi};
    const MatR lr = psd_factor(r);
    Rng rng(seed + 5000);
    std::vector<cplx> g(m);
    for (std::size_t k = 0; k < n; ++k) {
        for (auto& v : g) v = cplx(rng.normal(), rng.normal()) * std::sqrt(0.5);
        for (std::size_t c = 0; c < m; ++c) {
            const cplx p = std::polar(1.0 + 0.2 * double(c), 2 * std::numbers::pi * 0.21 * double(k));
            cplx w;
            for (std::size_t j = 0; j < m; ++j) w += lr(c, j) * g[j];
            s.ss.pilot(k, c) = p;
            s.ss.jacobian(k, c) = cplx(0, 1.5) * p;
            s.ss.observation(k, c) = p + s.ss.jacobian(k, c) * s.xi(k, c) + w;
        }
    }
    return s;
}

double mse(const RealArray& a, const RealArray& b) {
    double s = 0;
    for (std::size_t k = 0; k < a.flat().size(); ++k) s += std::pow(a.flat()[k] - b.flat()[k], 2);
    return s / static_cast<double>(a.flat().size());
}

Outcome a4() {
    Rng rng(404);
    const VarModel model = build_correlated_model(testing::random_spd(3, rng, 0.5), std::vector<double>{0.97, 0.9, 0.6}, 9);
    const MatR r = MatR::identity(3) * 0.8;

    const std::size_t n = 20000;
    const Synth big = synth(model, r, n, 1);
    const FilterPass pass = kalman_filter(big.ss);
    double worst_r1 = 0;
    for (std::size_t c = 0; c < 6; ++c) {
        double s0 = 0, s1 = 0;
        for (std::size_t k = 0; k < n; ++k) {
            s0 += std::pow(pass.whitened_innovation(k, c), 2);
            if (k) s1 += pass.whitened_innovation(k, c) * pass.whitened_innovation(k - 1, c);
        }
        worst_r1 = std::max(worst_r1, std::abs(s1 / s0));
    }
    const bool white = worst_r1 <= 4.0 / std::sqrt(double(n));

    double f = 0, s = 0;
    for (std::uint64_t t = 0; t < 50; ++t) {
        const Synth one = synth(model, r, 400, 100 + t);
        const TrackerOutput out = mimo_track(one.ss);
        f += mse(out.xi_filt, one.xi);
        s += mse(out.xi_smooth, one.xi);
    }
    const double prior = trace(steady_state_cov(model)) / 3;
    f /= 50;
    s /= 50;
    const bool order = s <= f && f <= prior;

    // scalar constant-H case against the closed-form Riccati root
    const double a = 0.9, q = 0.19, rr = 0.5;
    const cplx h(0.6, -0.8);
    StateSpace sc{MatR{{a}}, MatR{{q}}, MatR{{rr}}, ComplexArray(300, 1), ComplexArray(300, 1), ComplexArray(300, 1)};
    for (std::size_t k = 0; k < 300; ++k) sc.jacobian(k, 0) = h;
    const FilterPass sp = kalman_filter(sc);
    const double g = 2 * std::norm(h) / rr;
    const double b = 1 - a * a - q * g;
    const double x = (-b + std::sqrt(b * b + 4 * g * q)) / (2 * g);
    const double p_star = x / (1 + g * x);
    const double ric = std::abs(sp.p_filt.back()(0, 0) - p_star) / p_star;

    return {white && order && ric <= 1e-10,
            fmt("max |r1| %.4f (bound %.4f); MSE smoother %.4f <= filter %.4f <= prior %.4f; Riccati rel error %.1e",
                worst_r1, 4.0 / std::sqrt(double(n)), s, f, prior, ric)};
}

std::map<double, AggregatePoint> by_rho(const std::vector<AggregatePoint>& pts, double snr, const std::string& mode) {
    std::map<double, AggregatePoint> out;
    for (const auto& p : pts)
        if (p.snr_db == snr && p.mode == mode) out[p.rho] = p;
    return out;
}

Outcome a5() {
    ExperimentConfig cfg = load_config(kConfigs / "mimo_vs_siso.json");
    const auto pts = aggregate(run_experiment(cfg).rows);
    bool ok = true;
    std::ostringstream os;
    os << "RMSD ratio mimo/siso";
    for (double snr : cfg.snr_db) {
        const auto mimo = by_rho(pts, snr, "mimo"), siso = by_rho(pts, snr, "siso");
        os << " | " << snr << " dB:";
        for (const auto& [rho, p] : mimo) {
            const double ratio = p.avg_rmsd.mean / siso.at(rho).avg_rmsd.mean;
            ok = ok && ratio < 1.0;
            os << fmt(" %g:%.9f", rho, ratio);
        }
    }
    return {ok, os.str()};
}

Outcome a6() {
    ExperimentConfig cfg = load_config(kConfigs / "jitter_limited.json");
    cfg.rho = {0.05};
    cfg.modes = {TrackerMode::mimo};
    const auto pts = aggregate(run_experiment(cfg).rows);
    const auto& p = pts.at(0);
    const double dj = p.sjdr_post.mean - p.sjdr_pre.mean, dn = p.sinadr_post.mean - p.sinadr_pre.mean;
    return {dj >= 10.0 && dn >= 3.0, fmt("M=%zu N=%zu, %zu trials: SJDR gain %.2f dB, SINADR gain %.2f dB", cfg.channels,
                                         cfg.samples, p.sjdr_pre.count, dj, dn)};
}

Outcome a7() {
    ExperimentConfig cfg = load_config(kConfigs / "low_jitter_high_noise.json");
    const auto pts = aggregate(run_experiment(cfg).rows);
    const auto mimo = by_rho(pts, cfg.snr_db[0], "mimo");
    bool ok = true;
    std::ostringstream os;
    os << "rho: SJDR gain / SINADR gain (dB)";
    // scored where the payload keeps at least half the power
    for (const auto& [rho, p] : mimo) {
        const double dj = p.sjdr_post.mean - p.sjdr_pre.mean, dn = p.sinadr_post.mean - p.sinadr_pre.mean;
        if (rho <= 0.5) ok = ok && dn <= 0.5 && dj > 0.0;
        os << fmt(" | %g: %+.3f / %+.4f%s", rho, dj, dn, rho <= 0.5 ? "" : " (not scored)");
    }
    return {ok, os.str()};
}

Outcome a8() {
    ExperimentConfig cfg = load_config(kConfigs / "high_jitter_low_noise.json");
    const auto pts = aggregate(run_experiment(cfg).rows);
    const auto mimo = by_rho(pts, cfg.snr_db[0], "mimo");
    double best_rho = 0, best = -1e300;
    std::ostringstream os;
    for (const auto& [rho, p] : mimo) {
        if (p.sinadr_post.mean > best) {
            best = p.sinadr_post.mean;
            best_rho = rho;
        }
        os << fmt("%g:%.2f ", rho, p.sinadr_post.mean);
    }
    bool decreasing = true;
    double prev = 1e300;
    for (const auto& [rho, p] : mimo) {
        if (rho < 0.5) continue;
        decreasing = decreasing && p.sinadr_post.mean < prev;
        prev = p.sinadr_post.mean;
    }
    return {best_rho > 0.0 && best_rho <= 0.10 && decreasing,
            fmt("argmax rho %g; mean SINADR_post by rho: ", best_rho) + os.str()};
}

Outcome a9() {
    const auto specs = make_ofdm_specs({4, 4096, 800, 880, 100e6, 1229 * 100e6 / 4096, 0.05}, 1);
    auto residual = [&](double jrel) {
        const MatR xi0 = equicorrelated_cov(4, std::pow(jrel / 100e6, 2), 0.95);
        const VarModel m = build_correlated_model(xi0, std::vector<double>(4, 0.99), 7);
        const auto e = sample_jittered(specs, m, MatR(4, 4), 4096, 5, SamplingMode::exact);
        const auto l = sample_jittered(specs, m, MatR(4, 4), 4096, 5, SamplingMode::linearized);
        double s = 0;
        for (std::size_t k = 0; k < e.y.flat().size(); ++k) s += std::norm(e.y.flat()[k] - l.y.flat()[k]);
        return s;
    };
    std::ostringstream os;
    bool ok = true;
    for (double j : {0.04, 0.02, 0.01, 0.005}) {
        const double factor = residual(j) / residual(j / 2);
        ok = ok && factor >= 8.0 && factor <= 32.0;
        os << fmt(" %g%%->%g%%: %.2f", 100 * j, 50 * j, factor);
    }
    return {ok, "discrepancy drop when halving jitter:" + os.str()};
}

Outcome a10(double suite_secs) {
    const ExperimentConfig cfg = load_config(kConfigs / "baseline.json");
    std::ostringstream a, b;
    write_csv(a, run_experiment(cfg).rows, config_hash(cfg), std::nullopt);
    write_csv(b, run_experiment(cfg).rows, config_hash(cfg), std::nullopt);
    const bool same = a.str() == b.str() && !a.str().empty();
    return {same && suite_secs < 900.0,
            fmt("%zu-byte CSVs %s; A1-A9 took %.1f s", a.str().size(), same ? "identical" : "DIFFER", suite_secs)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> checks{
        {"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4}, {"A5", a5},
        {"A6", a6}, {"A7", a7}, {"A8", a8}, {"A9", a9}};
    int failed = 0;
    const auto t0 = std::chrono::steady_clock::now();
    auto report = [&](const char* id, const std::function<Outcome()>& f) {
        Outcome o;
        try {
            o = f();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << id << ' ' << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << std::endl;
    };
    for (const auto& [id, f] : checks) report(id, f);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report("A10", [secs] { return a10(secs); });
    return failed ? 1 : 0;
}
