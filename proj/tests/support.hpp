#pragma once

#include <jitterlab/matcore.hpp>
#include <jitterlab/rng.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <vector>

namespace testing {

using jitterlab::MatR;
using jitterlab::Rng;

inline MatR gaussian(std::size_t r, std::size_t c, Rng& rng) {
    MatR g(r, c);
    for (auto& v : g.flat()) v = rng.normal();
    return g;
}

// G G^t + eps I
inline MatR random_spd(std::size_t n, Rng& rng, double ridge = 0.1) {
    const MatR g = gaussian(n, n, rng);
    return jitterlab::symmetrize(g * g.transpose() + MatR::identity(n) * ridge);
}

inline Eigen::MatrixXd to_eigen(const MatR& a) {
    Eigen::MatrixXd e(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) e(i, j) = a(i, j);
    return e;
}

inline MatR from_eigen(const Eigen::MatrixXd& e) {
    MatR a(e.rows(), e.cols());
    for (Eigen::Index i = 0; i < e.rows(); ++i)
        for (Eigen::Index j = 0; j < e.cols(); ++j) a(i, j) = e(i, j);
    return a;
}

inline double eigen_radius(const MatR& a) {
    return Eigen::EigenSolver<Eigen::MatrixXd>(to_eigen(a), false).eigenvalues().cwiseAbs().maxCoeff();
}

// Gaussian matrix rescaled to spectral radius `radius` (Eigen oracle).
inline MatR random_stable(std::size_t n, Rng& rng, double radius) {
    MatR g = gaussian(n, n, rng);
    return g * (radius / eigen_radius(g));
}

inline double max_diff(const MatR& a, const MatR& b) { return jitterlab::max_abs(a - b); }

// Mean and batch-means standard error of a correlated series.
struct MeanSe {
    double mean;
    double se;
};

inline MeanSe batch_means(const std::vector<double>& x, std::size_t batches = 50) {
    const std::size_t len = x.size() / batches;
    std::vector<double> b(batches, 0.0);
    for (std::size_t k = 0; k < batches; ++k) {
        for (std::size_t i = 0; i < len; ++i) b[k] += x[k * len + i];
        b[k] /= static_cast<double>(len);
    }
    double m = 0.0;
    for (double v : b) m += v;
    m /= static_cast<double>(batches);
    double ss = 0.0;
    for (double v : b) ss += (v - m) * (v - m);
    return {m, std::sqrt(ss / static_cast<double>(batches - 1) / static_cast<double>(batches))};
}

}  // namespace testing
