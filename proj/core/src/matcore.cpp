// SPDX-License-Identifier: Apache-2.0

#include "sicperf/matcore.hpp"

#include <cmath>
#include <stdexcept>

namespace sicperf {

complex_matrix::complex_matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx(0.0, 0.0)) {
    if (rows == 0 || cols == 0) {
        throw std::invalid_argument("complex_matrix: dimensions must be >= 1");
    }
}

complex_matrix::complex_matrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows == 0 || cols == 0) {
        throw std::invalid_argument("complex_matrix: dimensions must be >= 1");
    }
    if (data_.size() != rows * cols) {
        throw std::invalid_argument("complex_matrix: entry count != rows*cols");
    }
    for (const cplx& z : data_) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw std::invalid_argument("complex_matrix: non-finite entry");
        }
    }
}

qr_factors qr_decompose(const complex_matrix& a) {
    const std::size_t n = a.rows();
    const std::size_t m = a.cols();
    if (n < m) {
        throw std::invalid_argument("qr_decompose: requires rows >= cols");
    }

    complex_matrix r = a;
    complex_matrix q(n, n);
    for (std::size_t i = 0; i < n; ++i) q(i, i) = 1.0;

    std::vector<cplx> v(n);
    for (std::size_t k = 0; k < m; ++k) {
        // Householder vector zeroing r(k+1..n-1, k).
        double xnorm_sq = 0.0;
        for (std::size_t i = k; i < n; ++i) xnorm_sq += std::norm(r(i, k));
        const double xnorm = std::sqrt(xnorm_sq);
        if (xnorm == 0.0) continue;

        const cplx x0 = r(k, k);
        const double x0abs = std::abs(x0);
        const cplx phase = (x0abs > 0.0) ? x0 / x0abs : cplx(1.0, 0.0);
        const cplx alpha = -phase * xnorm;

        double vnorm_sq = 0.0;
        for (std::size_t i = k; i < n; ++i) {
            v[i] = r(i, k);
            if (i == k) v[i] -= alpha;
            vnorm_sq += std::norm(v[i]);
        }
        if (vnorm_sq == 0.0) continue;
        const double beta = 2.0 / vnorm_sq;

        // r <- (I - beta v v^H) r
        for (std::size_t j = k; j < m; ++j) {
            cplx dot(0.0, 0.0);
            for (std::size_t i = k; i < n; ++i) dot += std::conj(v[i]) * r(i, j);
            dot *= beta;
            for (std::size_t i = k; i < n; ++i) r(i, j) -= dot * v[i];
        }
        // q <- q (I - beta v v^H)
        for (std::size_t i = 0; i < n; ++i) {
            cplx dot(0.0, 0.0);
            for (std::size_t j = k; j < n; ++j) dot += q(i, j) * v[j];
            dot *= beta;
            for (std::size_t j = k; j < n; ++j) q(i, j) -= dot * std::conj(v[j]);
        }
    }

    // Make the diagonal of R real and non-negative; fold phases into Q so the
    // product is unchanged. The analytic layer models r_ii^2 with r_ii >= 0.
    for (std::size_t k = 0; k < m; ++k) {
        const cplx d = r(k, k);
        const double dabs = std::abs(d);
        if (dabs == 0.0) continue;
        const cplx ph = d / dabs;
        for (std::size_t j = k + 1; j < m; ++j) r(k, j) *= std::conj(ph);
        r(k, k) = dabs;  // exactly real, as the analytic layer assumes
        for (std::size_t i = 0; i < n; ++i) q(i, k) *= ph;
    }
    // Zero the strictly-lower triangle exactly (roundoff leftovers).
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m && j < i; ++j) r(i, j) = 0.0;
    }

    qr_factors f{std::move(q), std::move(r), {}};
    f.diag_sq.resize(m);
    for (std::size_t k = 0; k < m; ++k) f.diag_sq[k] = std::norm(f.r(k, k));
    return f;
}

std::vector<cplx> solve_hpd(const complex_matrix& a, const std::vector<cplx>& b) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw std::invalid_argument("solve_hpd: matrix must be square");
    if (b.size() != n) throw std::invalid_argument("solve_hpd: rhs size mismatch");

    double amax = 0.0;
    for (const cplx& z : a.data()) amax = std::max(amax, std::abs(z));
    const double tol = 1e-10 * std::max(1.0, amax);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            if (std::abs(a(i, j) - std::conj(a(j, i))) > tol) {
                throw std::invalid_argument("solve_hpd: matrix is not Hermitian");
            }
        }
    }

    // In-place lower Cholesky a = L L^H.
    complex_matrix l(n, n);
    double max_pivot = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j).real();
        for (std::size_t k = 0; k < n && k < j; ++k) d -= std::norm(l(j, k));
        max_pivot = std::max(max_pivot, d);
        if (!(d > 0.0) || d < 1e-14 * max_pivot) {
            throw std::runtime_error("solve_hpd: matrix numerically singular");
        }
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            cplx s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
            l(i, j) = s / ljj;
        }
    }

    // Forward substitution L y = b, then back substitution L^H x = y.
    std::vector<cplx> x(b);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < i; ++k) x[i] -= l(i, k) * x[k];
        x[i] /= l(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t k = ii + 1; k < n; ++k) x[ii] -= std::conj(l(k, ii)) * x[k];
        x[ii] /= l(ii, ii);
    }
    return x;
}

std::vector<double> col_norms_sq(const complex_matrix& a) {
    std::vector<double> out(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) out[j] += std::norm(a(i, j));
    }
    return out;
}

complex_matrix multiply(const complex_matrix& a, const complex_matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("multiply: dimension mismatch");
    complex_matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

complex_matrix adjoint(const complex_matrix& a) {
    complex_matrix c(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) c(j, i) = std::conj(a(i, j));
    }
    return c;
}

std::vector<cplx> matvec(const complex_matrix& a, const std::vector<cplx>& x) {
    if (x.size() != a.cols()) throw std::invalid_argument("matvec: dimension mismatch");
    std::vector<cplx> y(a.rows(), cplx(0.0, 0.0));
    for (std::size_t i = 0; i < a.rows(); ++i) {
        cplx s(0.0, 0.0);
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

std::vector<cplx> adjoint_matvec(const complex_matrix& a, const std::vector<cplx>& x) {
    if (x.size() != a.rows()) throw std::invalid_argument("adjoint_matvec: dimension mismatch");
    std::vector<cplx> y(a.cols(), cplx(0.0, 0.0));
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const cplx xi = x[i];
        for (std::size_t j = 0; j < a.cols(); ++j) y[j] += std::conj(a(i, j)) * xi;
    }
    return y;
}

}  // namespace sicperf
