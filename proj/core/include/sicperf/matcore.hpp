// SPDX-License-Identifier: Apache-2.0
//
// Minimal complex-valued dense matrix kernel for the SIC receiver chain.
// Matrices here are small by construction (<= ~16x16), so everything is
// plain row-major storage with unblocked algorithms.

#ifndef SICPERF_MATCORE_HPP
#define SICPERF_MATCORE_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace sicperf {

using cplx = std::complex<double>;

class complex_matrix {
public:
    complex_matrix() = default;

    // Zero-initialized rows x cols matrix. Throws std::invalid_argument on
    // zero dimensions.
    complex_matrix(std::size_t rows, std::size_t cols);

    // Construct from row-major entries. Throws std::invalid_argument when the
    // entry count does not match or any entry is non-finite.
    complex_matrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<cplx>& data() const { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

struct qr_factors {
    complex_matrix q;             // n x n unitary
    complex_matrix r;             // n x m upper triangular, real non-negative diagonal
    std::vector<double> diag_sq;  // r_ii^2, i = 1..m
};

// Householder QR with full Q. Requires rows >= cols; the diagonal of R is
// made real and non-negative (phase absorbed into Q).
qr_factors qr_decompose(const complex_matrix& a);

// Solve a*x = b for Hermitian positive definite a via Cholesky. Throws
// std::invalid_argument for non-Hermitian input (asymmetry beyond 1e-10
// relative to the largest entry) and std::runtime_error when a pivot falls
// below 1e-14 times the largest pivot.
std::vector<cplx> solve_hpd(const complex_matrix& a, const std::vector<cplx>& b);

// Squared Euclidean norm of each column.
std::vector<double> col_norms_sq(const complex_matrix& a);

// Small helpers shared by the receiver modules.
complex_matrix multiply(const complex_matrix& a, const complex_matrix& b);
complex_matrix adjoint(const complex_matrix& a);
std::vector<cplx> matvec(const complex_matrix& a, const std::vector<cplx>& x);
std::vector<cplx> adjoint_matvec(const complex_matrix& a, const std::vector<cplx>& x);

}  // namespace sicperf

#endif
