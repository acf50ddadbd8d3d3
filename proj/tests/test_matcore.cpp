// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>

#include "doctest.h"
#include "sicperf/channel.hpp"
#include "sicperf/matcore.hpp"

using namespace sicperf;

namespace {

complex_matrix random_matrix(std::size_t n, std::size_t m, gauss_stream& rng) {
    complex_matrix a(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) a(i, j) = rng.cnormal(1.0);
    }
    return a;
}

double max_abs_diff(const complex_matrix& a, const complex_matrix& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
    }
    return d;
}

}  // namespace

TEST_CASE("complex_matrix validation") {
    CHECK_THROWS_AS(complex_matrix(0, 2), std::invalid_argument);
    CHECK_THROWS_AS(complex_matrix(2, 2, {cplx(1, 0)}), std::invalid_argument);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(complex_matrix(1, 1, {cplx(inf, 0)}), std::invalid_argument);
}

TEST_CASE("qr identity 3x3") {
    complex_matrix a(3, 3);
    for (std::size_t i = 0; i < 3; ++i) a(i, i) = 1.0;
    const qr_factors f = qr_decompose(a);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(std::abs(f.q(i, j) - (i == j ? 1.0 : 0.0)) < 1e-12);
            CHECK(std::abs(f.r(i, j) - (i == j ? 1.0 : 0.0)) < 1e-12);
        }
    }
}

TEST_CASE("qr single column norm") {
    complex_matrix a(2, 1, {cplx(3, 0), cplx(4, 0)});
    const qr_factors f = qr_decompose(a);
    CHECK(f.r(0, 0).real() == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(f.diag_sq[0] == doctest::Approx(25.0).epsilon(1e-12));
}

TEST_CASE("qr invariants on random draws") {
    gauss_stream rng(123);
    for (std::size_t n = 1; n <= 8; ++n) {
        for (std::size_t m = 1; m <= n; ++m) {
            for (int rep = 0; rep < 20; ++rep) {
                const complex_matrix a = random_matrix(n, m, rng);
                const qr_factors f = qr_decompose(a);
                // Reconstruction.
                const complex_matrix qr = multiply(f.q, f.r);
                CHECK(max_abs_diff(qr, a) < 1e-10);
                // Unitarity.
                const complex_matrix qhq = multiply(adjoint(f.q), f.q);
                for (std::size_t i = 0; i < n; ++i) {
                    for (std::size_t j = 0; j < n; ++j) {
                        CHECK(std::abs(qhq(i, j) - (i == j ? 1.0 : 0.0)) < 1e-10);
                    }
                }
                // Triangularity with real non-negative diagonal.
                for (std::size_t i = 0; i < n; ++i) {
                    for (std::size_t j = 0; j < m; ++j) {
                        if (i > j) CHECK(std::abs(f.r(i, j)) == 0.0);
                        if (i == j) {
                            CHECK(f.r(i, j).imag() == 0.0);
                            CHECK(f.r(i, j).real() >= 0.0);
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("qr rejects wide matrices") {
    CHECK_THROWS_AS(qr_decompose(complex_matrix(2, 3)), std::invalid_argument);
}

TEST_CASE("solve_hpd basics") {
    complex_matrix eye(2, 2);
    eye(0, 0) = 1.0;
    eye(1, 1) = 1.0;
    const std::vector<cplx> b{cplx(1, 2), cplx(-3, 0.5)};
    const auto x = solve_hpd(eye, b);
    CHECK(std::abs(x[0] - b[0]) < 1e-14);
    CHECK(std::abs(x[1] - b[1]) < 1e-14);

    complex_matrix two(2, 2);
    two(0, 0) = 2.0;
    two(1, 1) = 2.0;
    const auto y = solve_hpd(two, {cplx(4, 0), cplx(6, 0)});
    CHECK(y[0].real() == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(y[1].real() == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("solve_hpd matches 2x2 adjugate inverse") {
    gauss_stream rng(7);
    for (int rep = 0; rep < 50; ++rep) {
        // a = L L^H + I, guaranteed HPD.
        const complex_matrix l = random_matrix(2, 2, rng);
        complex_matrix a = multiply(l, adjoint(l));
        a(0, 0) += 1.0;
        a(1, 1) += 1.0;
        const std::vector<cplx> b{rng.cnormal(1.0), rng.cnormal(1.0)};
        const auto x = solve_hpd(a, b);
        const cplx det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
        const cplx x0 = (a(1, 1) * b[0] - a(0, 1) * b[1]) / det;
        const cplx x1 = (a(0, 0) * b[1] - a(1, 0) * b[0]) / det;
        CHECK(std::abs(x[0] - x0) < 1e-9 * (1.0 + std::abs(x0)));
        CHECK(std::abs(x[1] - x1) < 1e-9 * (1.0 + std::abs(x1)));
    }
}

TEST_CASE("solve_hpd residual on random HPD systems") {
    gauss_stream rng(99);
    for (std::size_t n : {3, 5, 8}) {
        for (int rep = 0; rep < 20; ++rep) {
            const complex_matrix l = random_matrix(n, n, rng);
            complex_matrix a = multiply(l, adjoint(l));
            for (std::size_t i = 0; i < n; ++i) a(i, i) += 0.5;
            std::vector<cplx> b(n);
            for (auto& v : b) v = rng.cnormal(1.0);
            const auto x = solve_hpd(a, b);
            const auto ax = matvec(a, x);
            double res = 0.0, bn = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                res += std::norm(ax[i] - b[i]);
                bn += std::norm(b[i]);
            }
            CHECK(std::sqrt(res) < 1e-9 * std::sqrt(bn));
        }
    }
}

TEST_CASE("solve_hpd rejects non-hermitian input") {
    complex_matrix a(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 1.0;
    a(0, 1) = cplx(0.5, 0.5);
    a(1, 0) = cplx(0.5, 0.5);  // should be the conjugate
    CHECK_THROWS_AS(solve_hpd(a, {cplx(1, 0), cplx(1, 0)}), std::invalid_argument);
}

TEST_CASE("col_norms_sq") {
    complex_matrix eye(2, 2);
    eye(0, 0) = 1.0;
    eye(1, 1) = 1.0;
    const auto ns = col_norms_sq(eye);
    CHECK(ns[0] == doctest::Approx(1.0));
    CHECK(ns[1] == doctest::Approx(1.0));

    complex_matrix c(2, 1, {cplx(1, 1), cplx(1, -1)});
    CHECK(col_norms_sq(c)[0] == doctest::Approx(4.0).epsilon(1e-14));

    gauss_stream rng(5);
    const complex_matrix a = random_matrix(4, 3, rng);
    const auto got = col_norms_sq(a);
    for (std::size_t j = 0; j < 3; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < 4; ++i) s += std::norm(a(i, j));
        CHECK(got[j] == doctest::Approx(s).epsilon(1e-13));
    }
}
