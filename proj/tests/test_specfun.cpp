// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "sicperf/specfun.hpp"

using namespace sicperf;

TEST_CASE("gamma_real values and domain") {
    CHECK(gamma_real(5.0) == doctest::Approx(24.0).epsilon(1e-12));
    CHECK(gamma_real(0.5) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
    CHECK(gamma_real(3.5) == doctest::Approx(3.3233509704478426).epsilon(1e-12));
    for (int k = 1; k <= 20; ++k) {
        double fact = 1.0;
        for (int j = 2; j < k; ++j) fact *= j;
        CHECK(gamma_real(static_cast<double>(k)) == doctest::Approx(fact).epsilon(1e-13));
    }
    CHECK_THROWS_AS(gamma_real(0.0), std::invalid_argument);
    CHECK_THROWS_AS(gamma_real(-1.5), std::invalid_argument);
}

TEST_CASE("beta consistency") {
    for (double a : {0.5, 1.0, 2.5, 4.0}) {
        for (double b : {0.5, 1.5, 3.0}) {
            CHECK(beta_real(a, b) * gamma_real(a + b) ==
                  doctest::Approx(gamma_real(a) * gamma_real(b)).epsilon(1e-10));
        }
    }
}

TEST_CASE("tricomi_u identities and oracle values") {
    CHECK(tricomi_u({1.0, 2.0, 2.0}) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(tricomi_u({2.0, 3.0, 4.0}) == doctest::Approx(0.0625).epsilon(1e-8));
    // Independent high-resolution quadrature of the defining integral.
    CHECK(tricomi_u({3.0, 7.5, 0.8}) == doctest::Approx(1.004139126894e3).epsilon(1e-7));
    CHECK(tricomi_u({0.5, -2.0, 3.0}) == doctest::Approx(4.035096441797e-1).epsilon(1e-7));

    // U(a, a+1, x) = x^{-a} across a deterministic (a, x) grid.
    for (int ia = 0; ia < 10; ++ia) {
        for (int ix = 0; ix < 5; ++ix) {
            const double a = 0.6 + 5.3 * ia / 9.0;
            const double x = 0.1 + 19.9 * ix / 4.0;
            CHECK(tricomi_u({a, a + 1.0, x}) ==
                  doctest::Approx(std::pow(x, -a)).epsilon(1e-8));
        }
    }

    // Monotone decreasing in x.
    double prev = tricomi_u({2.5, 1.5, 0.2});
    for (double x : {0.5, 1.0, 2.0, 5.0, 10.0}) {
        const double cur = tricomi_u({2.5, 1.5, x});
        CHECK(cur < prev);
        prev = cur;
    }

    CHECK_THROWS_AS(tricomi_u({-1.0, 2.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(tricomi_u({1.0, 2.0, -1.0}), std::invalid_argument);
}

TEST_CASE("regularized incomplete gamma") {
    CHECK(regularized_gamma_q(4.0, 0.0) == doctest::Approx(1.0));
    CHECK(regularized_gamma_q(1.0, std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(regularized_gamma_q(3.0, 3.0) ==
          doctest::Approx(8.5 * std::exp(-3.0)).epsilon(1e-12));
    // Integer-k Erlang identity.
    for (int k : {1, 2, 5, 8}) {
        for (double x : {0.3, 1.0, 4.0, 12.0}) {
            double s = 0.0, term = 1.0;
            for (int j = 0; j < k; ++j) {
                if (j > 0) term *= x / j;
                s += term;
            }
            CHECK(regularized_gamma_q(k, x) == doctest::Approx(std::exp(-x) * s).epsilon(1e-12));
        }
    }
    for (double k : {0.5, 2.0, 6.5}) {
        for (double x : {0.1, 2.0, 9.0}) {
            CHECK(regularized_gamma_p(k, x) + regularized_gamma_q(k, x) ==
                  doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(regularized_gamma_q(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(regularized_gamma_q(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("gaussian_q") {
    CHECK(gaussian_q(0.0) == doctest::Approx(0.5));
    CHECK(gaussian_q(1.0) == doctest::Approx(0.15865525393145707).epsilon(1e-10));
    for (double x : {0.3, 1.7}) {
        CHECK(gaussian_q(x) + gaussian_q(-x) == doctest::Approx(1.0).epsilon(1e-12));
    }
}
