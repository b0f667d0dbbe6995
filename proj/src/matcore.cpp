#include <jitterlab/matcore.hpp>

#include <limits>
#include <numeric>
#include <utility>

namespace jitterlab {

namespace {

void require_square(const MatR& a, const char* what) {
    if (!a.square()) throw DimensionMismatch(std::string(what) + ": non-square input " + a.shape());
}

double pivot_floor(const MatR& s) {
    const std::size_t n = s.rows();
    return n == 0 ? 0.0 : 1e-12 * std::abs(trace(s)) / static_cast<double>(n);
}

// Householder reduction to upper Hessenberg form. Similarity transform, so
// the spectrum is preserved.
MatR hessenberg(MatR h) {
    const std::size_t n = h.rows();
    if (n < 3) return h;
    std::vector<double> v(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double alpha = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) alpha += h(i, k) * h(i, k);
        alpha = std::sqrt(alpha);
        if (alpha == 0.0) continue;
        if (h(k + 1, k) > 0) alpha = -alpha;
        std::fill(v.begin(), v.end(), 0.0);
        v[k + 1] = h(k + 1, k) - alpha;
        for (std::size_t i = k + 2; i < n; ++i) v[i] = h(i, k);
        double vnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) vnorm2 += v[i] * v[i];
        if (vnorm2 == 0.0) continue;
        // H <- (I - 2vv^t/|v|^2) H (I - 2vv^t/|v|^2)
        for (std::size_t j = 0; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t i = k + 1; i < n; ++i) dot += v[i] * h(i, j);
            const double f = 2.0 * dot / vnorm2;
            for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= f * v[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            double dot = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) dot += h(i, j) * v[j];
            const double f = 2.0 * dot / vnorm2;
            for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= f * v[j];
        }
        for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
    }
    return h;
}

bool is_triangular(const MatR& a) {
    const std::size_t n = a.rows();
    bool upper = true, lower = true;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i > j && a(i, j) != 0.0) upper = false;
            if (i < j && a(i, j) != 0.0) lower = false;
        }
    return upper || lower;
}

// Eigenvalues of an upper Hessenberg matrix by single-shift complex QR with
// Wilkinson shifts, operating only on the active unreduced block.
std::vector<cplx> hessenberg_eigenvalues(const MatR& hr) {
    const std::size_t n = hr.rows();
    MatC h = to_complex(hr);
    std::vector<cplx> eig(n);
    constexpr double eps = std::numeric_limits<double>::epsilon();
    std::vector<double> cs(n);
    std::vector<cplx> sn(n);

    std::size_t hi = n - 1;
    int iter = 0;
    int total = 0;
    const int max_total = 100 * static_cast<int>(n) + 100;
    while (true) {
        std::size_t lo = hi;
        while (lo > 0) {
            const double scale = std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo));
            if (std::abs(h(lo, lo - 1)) <= eps * (scale == 0.0 ? 1.0 : scale)) {
                h(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }
        if (lo == hi) {
            eig[hi] = h(hi, hi);
            if (hi == 0) break;
            --hi;
            iter = 0;
            continue;
        }
        if (++total > max_total) throw NotConverged("spectral_radius: QR iteration did not converge");
        ++iter;

        cplx mu;
        if (iter % 11 == 0) {
            // exceptional shift to break cycles
            mu = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1));
        } else {
            const cplx a = h(hi - 1, hi - 1), b = h(hi - 1, hi), c = h(hi, hi - 1), d = h(hi, hi);
            const cplx half = 0.5 * (a - d);
            const cplx disc = std::sqrt(half * half + b * c);
            const cplx m1 = 0.5 * (a + d) + disc;
            const cplx m2 = 0.5 * (a + d) - disc;
            mu = std::abs(m1 - d) < std::abs(m2 - d) ? m1 : m2;
        }

        for (std::size_t k = lo; k <= hi; ++k) h(k, k) -= mu;
        for (std::size_t k = lo; k < hi; ++k) {
            const cplx a = h(k, k), b = h(k + 1, k);
            const double r = std::hypot(std::abs(a), std::abs(b));
            double c;
            cplx s;
            if (r == 0.0) {
                c = 1.0;
                s = 0.0;
            } else if (std::abs(a) == 0.0) {
                c = 0.0;
                s = std::conj(b) / std::abs(b);
            } else {
                c = std::abs(a) / r;
                s = (a / std::abs(a)) * std::conj(b) / r;
            }
            cs[k] = c;
            sn[k] = s;
            for (std::size_t j = k; j <= hi; ++j) {
                const cplx x = h(k, j), y = h(k + 1, j);
                h(k, j) = c * x + s * y;
                h(k + 1, j) = -std::conj(s) * x + c * y;
            }
        }
        for (std::size_t k = lo; k < hi; ++k) {
            const double c = cs[k];
            const cplx s = sn[k];
            const std::size_t last = std::min(k + 2, hi);
            for (std::size_t i = lo; i <= last; ++i) {
                const cplx x = h(i, k), y = h(i, k + 1);
                h(i, k) = x * c + y * std::conj(s);
                h(i, k + 1) = -x * s + y * c;
            }
        }
        for (std::size_t k = lo; k <= hi; ++k) h(k, k) += mu;
    }
    return eig;
}

}  // namespace

MatC adjoint(const MatC& a) {
    MatC t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = std::conj(a(i, j));
    return t;
}

MatR symmetrize(const MatR& a) {
    require_square(a, "symmetrize");
    MatR s(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) s(i, j) = 0.5 * (a(i, j) + a(j, i));
    return s;
}

bool is_symmetric(const MatR& a, double rel_tol) {
    if (!a.square()) return false;
    const double scale = max_abs(a);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j)
            if (std::abs(a(i, j) - a(j, i)) > rel_tol * scale) return false;
    return true;
}

MatR kron(const MatR& a, const MatR& b) {
    MatR k(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const double aij = a(i, j);
            for (std::size_t p = 0; p < b.rows(); ++p)
                for (std::size_t q = 0; q < b.cols(); ++q)
                    k(i * b.rows() + p, j * b.cols() + q) = aij * b(p, q);
        }
    return k;
}

VecR vec(const MatR& a) {
    VecR v;
    v.reserve(a.rows() * a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) v.push_back(a(i, j));
    return v;
}

MatR unvec(std::span<const double> v, std::size_t rows, std::size_t cols) {
    if (v.size() != rows * cols) throw DimensionMismatch("unvec: length does not match shape");
    MatR a(rows, cols);
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < rows; ++i) a(i, j) = v[j * rows + i];
    return a;
}

MatR cholesky(const MatR& s_in) {
    require_square(s_in, "cholesky");
    const MatR s = symmetrize(s_in);
    const std::size_t n = s.rows();
    const double floor = pivot_floor(s);
    MatR l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = s(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > floor)) throw IndefiniteMatrix("cholesky: pivot " + std::to_string(d) + " below floor");
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double x = s(i, j);
            for (std::size_t k = 0; k < j; ++k) x -= l(i, k) * l(j, k);
            l(i, j) = x / ljj;
        }
    }
    return l;
}

MatR psd_factor(const MatR& s_in) {
    require_square(s_in, "psd_factor");
    MatR a = symmetrize(s_in);
    const std::size_t n = a.rows();
    const double floor = pivot_floor(a);
    const double neg_tol = 1e-8 * std::max(max_abs(a), std::numeric_limits<double>::min());
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    MatR l(n, n);
    // Outer-product Cholesky with diagonal pivoting on the Schur complement.
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t p = j;
        for (std::size_t i = j + 1; i < n; ++i)
            if (a(perm[i], perm[i]) > a(perm[p], perm[p])) p = i;
        std::swap(perm[j], perm[p]);
        const std::size_t pj = perm[j];
        const double d = a(pj, pj);
        if (d < -neg_tol) throw IndefiniteMatrix("psd_factor: matrix is not positive semi-definite");
        if (d <= floor) break;  // remaining Schur complement is numerically zero
        const double root = std::sqrt(d);
        for (std::size_t i = j; i < n; ++i) l(perm[i], j) = a(perm[i], pj) / root;
        for (std::size_t i = j + 1; i < n; ++i)
            for (std::size_t k = j + 1; k < n; ++k)
                a(perm[i], perm[k]) -= l(perm[i], j) * l(perm[k], j);
    }
    return l;
}

MatR cholesky_solve(const MatR& l, const MatR& b) {
    const std::size_t n = l.rows();
    if (!l.square() || b.rows() != n) throw DimensionMismatch("cholesky_solve: shape mismatch");
    MatR x = b;
    for (std::size_t c = 0; c < b.cols(); ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            double v = x(i, c);
            for (std::size_t k = 0; k < i; ++k) v -= l(i, k) * x(k, c);
            x(i, c) = v / l(i, i);
        }
        for (std::size_t ii = n; ii-- > 0;) {
            double v = x(ii, c);
            for (std::size_t k = ii + 1; k < n; ++k) v -= l(k, ii) * x(k, c);
            x(ii, c) = v / l(ii, ii);
        }
    }
    return x;
}

double cholesky_condition(const MatR& l) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t i = 0; i < l.rows(); ++i) {
        lo = std::min(lo, std::abs(l(i, i)));
        hi = std::max(hi, std::abs(l(i, i)));
    }
    if (lo == 0.0) return std::numeric_limits<double>::infinity();
    const double r = hi / lo;
    return r * r;
}

template <typename T>
Matrix<T> solve(const Matrix<T>& a_in, const Matrix<T>& b_in) {
    if (!a_in.square() || b_in.rows() != a_in.rows())
        throw DimensionMismatch("solve: " + a_in.shape() + " vs rhs " + b_in.shape());
    Matrix<T> a = a_in;
    Matrix<T> b = b_in;
    const std::size_t n = a.rows(), m = b.cols();
    const double tiny = 1e-14 * std::max(max_abs(a), std::numeric_limits<double>::min());
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
        if (std::abs(a(p, k)) <= tiny) throw SingularSystem("solve: matrix is singular to working precision");
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            for (std::size_t j = 0; j < m; ++j) std::swap(b(k, j), b(p, j));
        }
        const T piv = a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const T f = a(i, k) / piv;
            if (f == T{}) continue;
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
            for (std::size_t j = 0; j < m; ++j) b(i, j) -= f * b(k, j);
        }
    }
    for (std::size_t c = 0; c < m; ++c)
        for (std::size_t ii = n; ii-- > 0;) {
            T v = b(ii, c);
            for (std::size_t j = ii + 1; j < n; ++j) v -= a(ii, j) * b(j, c);
            b(ii, c) = v / a(ii, ii);
        }
    return b;
}

template MatR solve<double>(const MatR&, const MatR&);
template MatC solve<cplx>(const MatC&, const MatC&);

MatR orthogonal_factor(const MatR& a) {
    require_square(a, "orthogonal_factor");
    const std::size_t n = a.rows();
    MatR r = a;
    MatR q = MatR::identity(n);
    std::vector<double> v(n);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        double alpha = 0.0;
        for (std::size_t i = k; i < n; ++i) alpha += r(i, k) * r(i, k);
        alpha = std::sqrt(alpha);
        if (alpha == 0.0) continue;
        if (r(k, k) > 0) alpha = -alpha;
        std::fill(v.begin(), v.end(), 0.0);
        v[k] = r(k, k) - alpha;
        for (std::size_t i = k + 1; i < n; ++i) v[i] = r(i, k);
        double vnorm2 = 0.0;
        for (std::size_t i = k; i < n; ++i) vnorm2 += v[i] * v[i];
        if (vnorm2 == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t i = k; i < n; ++i) dot += v[i] * r(i, j);
            const double f = 2.0 * dot / vnorm2;
            for (std::size_t i = k; i < n; ++i) r(i, j) -= f * v[i];
        }
        // accumulate Q <- Q H_k
        for (std::size_t i = 0; i < n; ++i) {
            double dot = 0.0;
            for (std::size_t j = k; j < n; ++j) dot += q(i, j) * v[j];
            const double f = 2.0 * dot / vnorm2;
            for (std::size_t j = k; j < n; ++j) q(i, j) -= f * v[j];
        }
    }
    for (std::size_t j = 0; j < n; ++j)
        if (r(j, j) < 0)
            for (std::size_t i = 0; i < n; ++i) q(i, j) = -q(i, j);
    return q;
}

double spectral_radius(const MatR& a) {
    require_square(a, "spectral_radius");
    const std::size_t n = a.rows();
    if (n == 0) return 0.0;
    double rho = 0.0;
    if (is_triangular(a)) {
        for (std::size_t i = 0; i < n; ++i) rho = std::max(rho, std::abs(a(i, i)));
        return rho;
    }
    for (const cplx& l : hessenberg_eigenvalues(hessenberg(a))) rho = std::max(rho, std::abs(l));
    return rho;
}

MatR solve_lyapunov(const MatR& v, const MatR& q) {
    require_square(v, "solve_lyapunov");
    if (q.rows() != v.rows() || q.cols() != v.cols())
        throw DimensionMismatch("solve_lyapunov: Q " + q.shape() + " vs V " + v.shape());
    const double rho = spectral_radius(v);
    if (rho >= 1.0 - 1e-9)
        throw UnstableModel("solve_lyapunov: spectral radius " + std::to_string(rho) + " >= 1");
    const std::size_t n = v.rows();
    MatR sys = MatR::identity(n * n) - kron(v, v);
    const VecR rhs = vec(q);
    MatR x = solve(sys, unvec(rhs, n * n, 1));
    return symmetrize(unvec(x.flat(), n, n));
}

}  // namespace jitterlab
