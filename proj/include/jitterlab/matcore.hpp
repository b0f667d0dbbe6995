#pragma once

// Small dense real/complex matrices and the handful of kernels the jitter
// model and the tracker need: Cholesky, LU solve, spectral radius and the
// vectorized discrete Lyapunov solver. Sized for M <= 32 channels.

#include <jitterlab/errors.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace jitterlab {

using cplx = std::complex<double>;

template <typename T>
class Matrix {
public:
    using value_type = T;

    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    Matrix(std::initializer_list<std::initializer_list<T>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw DimensionMismatch("ragged matrix initializer");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix I(n, n);
        for (std::size_t i = 0; i < n; ++i) I(i, i) = T{1};
        return I;
    }

    static Matrix diagonal(std::span<const T> d) {
        Matrix D(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) D(i, i) = d[i];
        return D;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }
    bool empty() const noexcept { return data_.empty(); }

    T& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<T> flat() noexcept { return data_; }
    std::span<const T> flat() const noexcept { return data_; }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix& operator+=(const Matrix& o) {
        check_same(o, "+=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_same(o, "-=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    Matrix& operator*=(T s) {
        for (auto& v : data_) v *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, T s) { return a *= s; }
    friend Matrix operator*(T s, Matrix a) { return a *= s; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_)
            throw DimensionMismatch("matrix product " + a.shape() + " * " + b.shape());
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T aik = a(i, k);
                if (aik == T{}) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    friend std::vector<T> operator*(const Matrix& a, std::span<const T> x) {
        if (a.cols_ != x.size()) throw DimensionMismatch("matrix-vector product");
        std::vector<T> y(a.rows_, T{});
        for (std::size_t i = 0; i < a.rows_; ++i) {
            T acc{};
            for (std::size_t j = 0; j < a.cols_; ++j) acc += a(i, j) * x[j];
            y[i] = acc;
        }
        return y;
    }

    std::string shape() const {
        return std::to_string(rows_) + "x" + std::to_string(cols_);
    }

private:
    void check_same(const Matrix& o, const char* op) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw DimensionMismatch(std::string("matrix ") + op + " " + shape() + " vs " + o.shape());
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using MatR = Matrix<double>;
using MatC = Matrix<cplx>;
using VecR = std::vector<double>;

template <typename T>
double max_abs(const Matrix<T>& a) {
    double m = 0.0;
    for (const auto& v : a.flat()) m = std::max(m, std::abs(v));
    return m;
}

inline double trace(const MatR& a) {
    double t = 0.0;
    for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) t += a(i, i);
    return t;
}

inline MatC to_complex(const MatR& a) {
    MatC c(a.rows(), a.cols());
    for (std::size_t k = 0; k < a.flat().size(); ++k) c.flat()[k] = a.flat()[k];
    return c;
}

MatC adjoint(const MatC& a);

// (A + A^t)/2; throws on non-square input.
MatR symmetrize(const MatR& a);

// ||A - A^t||_max <= tol * ||A||_max.
bool is_symmetric(const MatR& a, double rel_tol = 1e-12);

MatR kron(const MatR& a, const MatR& b);

// Column-stacking vectorization and its inverse.
VecR vec(const MatR& a);
MatR unvec(std::span<const double> v, std::size_t rows, std::size_t cols);

// Lower-triangular L with L L^t = S. Pivots below 1e-12 * trace(S)/M raise
// IndefiniteMatrix. The input is symmetrized first.
MatR cholesky(const MatR& s);

// Factor of a symmetric PSD matrix that tolerates rank deficiency: columns
// whose pivot falls under the floor are zeroed. Returns L with L L^t ~= S.
MatR psd_factor(const MatR& s);

// Solves (L L^t) X = B given the Cholesky factor L.
MatR cholesky_solve(const MatR& l, const MatR& b);

// Ratio (max L_ii / min L_ii)^2, a cheap lower bound on cond(S).
double cholesky_condition(const MatR& l);

// Gaussian elimination with partial pivoting. Throws SingularSystem.
template <typename T>
Matrix<T> solve(const Matrix<T>& a, const Matrix<T>& b);

template <typename T>
Matrix<T> inverse(const Matrix<T>& a) {
    return solve(a, Matrix<T>::identity(a.rows()));
}

// Q factor of A = Q R (Householder), signs fixed so that diag(R) >= 0.
MatR orthogonal_factor(const MatR& a);

// max_j |lambda_j(A)| via Hessenberg reduction and shifted complex QR.
double spectral_radius(const MatR& a);

// X solving X = V X V^t + Q through (I - V kron V) vec(X) = vec(Q).
// Throws UnstableModel when rho(V) >= 1 - 1e-9.
MatR solve_lyapunov(const MatR& v, const MatR& q);

}  // namespace jitterlab
